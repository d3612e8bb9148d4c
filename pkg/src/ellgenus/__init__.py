"""Exact two-variable elliptic genera as truncated (y, q)-series.

Smooth manifolds (ring or Chern-number models), singular pairs through a
resolution, orbifolds through commuting-pair fixed-point data, toric
quotients and Calabi-Yau hypersurfaces, together with checks of the
identities that relate them.
"""

from __future__ import annotations

from .cohom import (
    ChernNumberModel,
    RingModel,
    curve_ring,
    formal_curve,
    formal_surface,
    from_presentation,
    point_model,
    product_model,
    projective_space,
)
from .dmvv import CoeffTable, dmvv_check, dmvv_lhs, dmvv_rhs, hecke_component
from .errors import (
    CapacityError,
    EllGenusError,
    InvalidInput,
    RationalityFailure,
    StabilizationError,
    TruncationError,
    UnsupportedScale,
)
from .exactnum import BACKEND, Cyclotomic, caps
from .genuscore import (
    DivisorDatum,
    GenusResult,
    cy_hypersurface,
    ell_singular,
    ell_smooth,
    jacobi_shift_check,
    norm_factor,
    stringy_chi_y,
)
from .orbifold import (
    ActionData,
    EigenBundle,
    FixedComponent,
    PairEntry,
    conjecture_compare,
    ell_orbifold,
    elliptic_involution_data,
    elliptic_involution_quotient,
    fermionic_shift,
    orbifold_euler,
    symmetric_product_data,
)
from .qyseries import Series, YFrac
from .toricgeo import (
    Fan,
    PLFunction,
    QuotientData,
    fan_validate,
    lattice_f,
    quotient_pair_genus,
    refinement_discrepancies,
    resolve_rank2,
    stanley_reisner,
    toric_fixed_data,
    toric_singular_genus,
)

__version__ = "0.1.0"
