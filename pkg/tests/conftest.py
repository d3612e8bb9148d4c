from __future__ import annotations

import os
import sys

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

from ellgenus.toricgeo import Fan  # noqa: E402


@pytest.fixture
def p1_fan():
    return Fan(1, ((1,), (-1,)), ((0,), (1,)))


@pytest.fixture
def p2_fan():
    return Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))


@pytest.fixture
def a1_coarse():
    return Fan(2, ((1, 0), (0, 1), (-1, -2)), ((0, 1), (1, 2), (0, 2)))


@pytest.fixture
def f2_fan():
    return Fan(2, ((1, 0), (0, 1), (-1, -2), (0, -1)), ((0, 1), (1, 2), (2, 3), (0, 3)))


@pytest.fixture
def a1_blowup():
    return Fan(
        2,
        ((1, 0), (0, 1), (-1, -2), (0, -1), (1, -1)),
        ((0, 1), (1, 2), (2, 3), (3, 4), (0, 4)),
    )
