"""Command-line front end.

Every input is a UTF-8 JSON document with ``schema_version`` and ``kind``;
it is given as a path, ``-`` for stdin, inline JSON, or ``builtin:NAME``
for the files shipped in ``ellgenus/data``.

Exit status: 0 success or passing check, 1 failing check, 2 invalid
input, 3 capacity cap exceeded, 4 unsupported scale.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from importlib import resources

from . import cohom, dmvv, genuscore, orbifold, toricgeo
from .errors import EllGenusError, InvalidInput
from .exactnum import as_rational, caps, check_denom, fmt_rational

SCHEMA_VERSION = 1
COMMANDS = (
    "genus-smooth",
    "genus-singular",
    "genus-orbifold",
    "genus-hypersurface",
    "stringy-chiy",
    "dmvv-check",
    "conjecture-check",
    "fan-validate",
    "jacobi-check",
)
DEFAULTS = {"q_order": "4", "p_order": "2", "denom_cap": None, "cyc_cap": None, "format": "table", "output": None}

# ---------------------------------------------------------------- input


def builtin_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files("ellgenus.data").iterdir() if p.name.endswith(".json"))


def load_document(arg: str) -> dict:
    try:
        if arg.startswith("builtin:"):
            name = arg.split(":", 1)[1]
            path = resources.files("ellgenus.data") / f"{name}.json"
            if not path.is_file():
                raise InvalidInput(f"unknown builtin {name!r}; available: {', '.join(builtin_names())}")
            text = path.read_text(encoding="utf-8")
        elif arg == "-":
            text = sys.stdin.read()
        elif arg.lstrip().startswith("{"):
            text = arg
        else:
            with open(arg, encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
    except OSError as exc:
        raise InvalidInput(f"cannot read input: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"input is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InvalidInput("input must be a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise InvalidInput(f"schema_version must be {SCHEMA_VERSION}, got {version!r}")
    if "kind" not in data:
        raise InvalidInput("input needs a 'kind' field")
    return data


def _fields(data: dict, required: set, optional: set = frozenset()) -> None:
    allowed = set(required) | set(optional) | {"schema_version", "kind", "provenance"}
    extra = set(data) - allowed
    if extra:
        raise InvalidInput(f"unknown fields for kind {data.get('kind')!r}: {sorted(extra)}")
    missing = set(required) - set(data)
    if missing:
        raise InvalidInput(f"missing fields for kind {data.get('kind')!r}: {sorted(missing)}")


def _strip(data: dict) -> dict:
    return {k: v for k, v in data.items() if k != "provenance"}


def parse_ring(data: dict) -> cohom.RingModel:
    if data.get("kind") == "fan":
        return toricgeo.stanley_reisner(parse_fan(data))
    if data.get("kind") not in (None, "ring"):
        raise InvalidInput(f"expected a ring, got kind {data.get('kind')!r}")
    return cohom.ring_from_json(_strip(data))


def parse_fan(data: dict) -> toricgeo.Fan:
    if data.get("kind") not in (None, "fan"):
        raise InvalidInput(f"expected a fan, got kind {data.get('kind')!r}")
    return toricgeo.Fan.from_json(_strip(data))


def parse_manifold(data: dict):
    kind = data["kind"]
    if kind == "chern_numbers":
        return cohom.chern_numbers_from_json(_strip(data))
    if kind in ("ring", "fan"):
        return parse_ring(data)
    raise InvalidInput(f"kind {kind!r} is not a manifold description")


def parse_singular(data: dict):
    """``(ring, divisors)`` from a singular_pair or toric_pair document."""
    kind = data["kind"]
    if kind == "singular_pair":
        _fields(data, {"ring", "divisors"})
        ring = parse_ring(data["ring"])
        divs = []
        for d in data["divisors"]:
            if set(d) - {"class", "alpha"}:
                raise InvalidInput(f"unknown divisor fields {sorted(set(d) - {'class', 'alpha'})}")
            divs.append(genuscore.DivisorDatum(ring.parse(d["class"]), as_rational(d["alpha"])))
        return ring, divs
    if kind == "toric_pair":
        _fields(data, {"coarse"}, {"fine", "deg"})
        coarse = parse_fan(data["coarse"])
        fine = parse_fan(data["fine"]) if "fine" in data else coarse
        deg = toricgeo.PLFunction.from_json(data["deg"]) if "deg" in data else None
        disc = toricgeo.refinement_discrepancies(coarse, deg, fine)
        if disc.has_minus_one:
            raise InvalidInput("a ray has discrepancy -1; that case is not supported")
        ring = toricgeo.stanley_reisner(fine)
        return ring, toricgeo.toric_pair_divisors(fine, ring, disc.all_alpha)
    if kind == "toric_quotient":
        f, q, fine = parse_quotient(data)
        qs = toricgeo.quotient_setup(f, q)
        if fine is None:
            fine = qs.fan if toricgeo.fan_validate(qs.fan)["smooth"] else toricgeo.resolve_rank2(qs.fan)
        disc = toricgeo.refinement_discrepancies(qs.fan, qs.deg, fine)
        ring = toricgeo.stanley_reisner(fine)
        return ring, toricgeo.toric_pair_divisors(fine, ring, disc.all_alpha)
    if kind == "elliptic_involution":
        _fields(data, set(), {"quotient_points"})
        return orbifold.elliptic_involution_quotient(int(data.get("quotient_points", 4)))
    raise InvalidInput(f"kind {kind!r} does not describe a singular pair")


def parse_quotient(data: dict):
    _fields(data, {"fan", "sublattice_matrix"}, {"fine"})
    f = parse_fan(data["fan"])
    q = toricgeo.QuotientData(tuple(map(tuple, data["sublattice_matrix"])))
    fine = parse_fan(data["fine"]) if "fine" in data else None
    return f, q, fine


def parse_action(data: dict) -> orbifold.ActionData:
    kind = data["kind"]
    if kind == "action":
        return orbifold.action_from_json(data)
    if kind == "toric_quotient":
        f, q, _ = parse_quotient(data)
        return toricgeo.toric_fixed_data(f, q)
    if kind == "symmetric_product":
        _fields(data, {"ring", "n"})
        return orbifold.symmetric_product_data(parse_ring(data["ring"]), int(data["n"]))
    if kind == "elliptic_involution":
        _fields(data, set(), {"quotient_points"})
        return orbifold.elliptic_involution_data()
    raise InvalidInput(f"kind {kind!r} does not describe a group action")


# ---------------------------------------------------------------- output


def render_genus_table(g: genuscore.GenusResult) -> str:
    s = g.series
    lines = [f"# convention: {g.convention}  dim: {g.dim}  Q: {fmt_rational(g.q_order)}"]
    if g.den:
        den = " * ".join(f"(y^-{fmt_rational(b / 2)} - y^{fmt_rational(b / 2)})^{n}" for b, n in sorted(g.den.items()))
        lines.append(f"# divided by: {den}")
    ys = sorted({y for y, _, _ in s.terms()})
    qs = sorted({q for _, q, _ in s.terms()})
    if not ys:
        lines.append(f"0 + O(q^{fmt_rational(g.q_order)})")
        return "\n".join(lines) + "\n"
    header = ["q\\y"] + [fmt_rational(y) for y in ys]
    rows = [header]
    for q in qs:
        row = s.q_row(q)
        rows.append([fmt_rational(q)] + [fmt_rational(row.get(y, 0)) for y in ys])
    widths = [max(len(r[i]) for r in rows) for i in range(len(header))]
    for r in rows:
        lines.append("  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def render_report_table(report: dict) -> str:
    lines = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list) and v and all(isinstance(x, dict) for x in v):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            lines.append(f"{prefix}: {json.dumps(v)}")

    walk("", report)
    return "\n".join(lines) + "\n"


def emit(payload, fmt: str, output: str | None) -> None:
    if isinstance(payload, genuscore.GenusResult):
        text = render_genus_table(payload) if fmt == "table" else _dump(dict(payload.to_json(), schema_version=SCHEMA_VERSION))
    else:
        payload = dict(payload, schema_version=SCHEMA_VERSION)
        text = render_report_table(payload) if fmt == "table" else _dump(payload)
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# ---------------------------------------------------------------- commands


def _mm(mm) -> dict | None:
    if mm is None:
        return None
    y, q, a, b = mm
    return {"y": fmt_rational(y), "q": fmt_rational(q), "lhs": fmt_rational(a), "rhs": fmt_rational(b)}


def run_command(cmd: str, data: dict, opts: argparse.Namespace):
    """Return ``(payload, passed)``; ``passed`` is ``None`` for plain computations."""
    Qo = opts.q_order
    conv = opts.convention
    if cmd == "genus-smooth":
        return genuscore.ell_smooth(parse_manifold(data), Qo, conv), None
    if cmd == "genus-singular":
        if data["kind"] == "toric_quotient":
            f, q, fine = parse_quotient(data)
            return toricgeo.quotient_pair_genus(f, q, Qo, fine, conv), None
        ring, divs = parse_singular(data)
        return genuscore.ell_singular(ring, divs, Qo, conv), None
    if cmd == "genus-orbifold":
        return orbifold.ell_orbifold(parse_action(data), Qo), None
    if cmd == "genus-hypersurface":
        if data["kind"] != "hypersurface":
            raise InvalidInput("genus-hypersurface needs kind 'hypersurface'")
        _fields(data, {"ambient"}, {"fine"})
        coarse = parse_fan(data["ambient"])
        fine = parse_fan(data["fine"]) if "fine" in data else None
        return genuscore.cy_hypersurface(coarse, fine, Qo, conv), None
    if cmd == "stringy-chiy":
        ring, divs = parse_singular(data)
        e = genuscore.stringy_chi_y(ring, divs)
        coeffs = {fmt_rational(u): fmt_rational(c) for u, _, c in e.terms()}
        return {"kind": "stringy_chi_y", "dim": ring.dim, "variable": "u", "coefficients": coeffs}, None
    if cmd == "dmvv-check":
        rep = dmvv.dmvv_check(parse_ring(data), opts.p_order, Qo)
        return rep.to_json(), rep.passed
    if cmd == "conjecture-check":
        if data["kind"] == "conjecture":
            _fields(data, {"action", "quotient"})
            a = parse_action(dict(data["action"], schema_version=SCHEMA_VERSION))
            quot = parse_singular(dict(data["quotient"], schema_version=SCHEMA_VERSION))
        else:
            a, quot = parse_action(data), parse_singular(data)
        rep = orbifold.conjecture_compare(a, quot, a.ambient_dim, Qo)
        return dict(rep.to_json(), kind="conjecture_report"), rep.passed
    if cmd == "fan-validate":
        f = parse_fan(data)
        return dict(toricgeo.fan_validate(f), kind="fan_report"), None
    if cmd == "jacobi-check":
        if data["kind"] == "genus":
            g = genuscore.GenusResult.from_json(_strip(data))
        else:
            g = genuscore.ell_smooth(parse_manifold(data), Qo, "ell")
        if g.convention != "ell":
            g = g.to_convention("ell")
        two_m = opts.index_two_m if opts.index_two_m is not None else g.dim
        reports = genuscore.jacobi_shift_check(g, two_m, opts.steps)
        ok = all(r.passed for r in reports)
        return {
            "kind": "jacobi_report",
            "pass": ok,
            "index": fmt_rational(as_rational(two_m) / 2),
            "orders_checked": fmt_rational(g.q_order),
            "laws": [r.to_json() for r in reports],
        }, ok
    raise InvalidInput(f"unknown command {cmd!r}")  # pragma: no cover - argparse restricts choices


# ---------------------------------------------------------------- entry point


def _env(name: str):
    return os.environ.get("ELLGENUS_" + name.upper())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ellgenus", description="Exact two-variable elliptic genera and identity checks.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="JSON path, '-', inline JSON, or builtin:NAME")
    p.add_argument("--q-order", dest="q_order", help="q truncation order (rational, default 4)")
    p.add_argument("--p-order", dest="p_order", help="p truncation for dmvv-check (default 2)")
    p.add_argument("--denom-cap", dest="denom_cap", help="largest exponent denominator allowed")
    p.add_argument("--cyc-cap", dest="cyc_cap", help="largest cyclotomic order allowed")
    p.add_argument("--format", dest="format", choices=("table", "json"))
    p.add_argument("--output", dest="output", help="write to this file instead of stdout")
    p.add_argument("--convention", choices=("ell", "hat"), default="ell")
    p.add_argument("--index-two-m", dest="index_two_m", type=int, help="twice the Jacobi index (default: dimension)")
    p.add_argument("--steps", type=int, default=1, help="n in z -> z + n tau for jacobi-check")
    return p


def _resolve(opts: argparse.Namespace) -> argparse.Namespace:
    for key, default in DEFAULTS.items():
        if getattr(opts, key) is None:
            setattr(opts, key, _env(key) if _env(key) is not None else default)
    try:
        opts.q_order = as_rational(opts.q_order)
        opts.p_order = int(opts.p_order)
        opts.denom_cap = int(opts.denom_cap) if opts.denom_cap is not None else None
        opts.cyc_cap = int(opts.cyc_cap) if opts.cyc_cap is not None else None
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"bad numeric option: {exc}") from exc
    if opts.q_order <= 0 or opts.p_order < 0:
        raise InvalidInput("orders must be positive")
    if opts.format not in ("table", "json"):
        raise InvalidInput("format must be 'table' or 'json'")
    return opts


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    opts = parser.parse_args(argv)
    try:
        opts = _resolve(opts)
        with caps(opts.denom_cap, opts.cyc_cap):
            check_denom(opts.q_order.denominator)
            data = load_document(opts.input)
            payload, passed = run_command(opts.command, data, opts)
            emit(payload, opts.format, opts.output)
    except EllGenusError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 1 if passed is False else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
