"""Finite-dimensional models of even cohomology rings with Chern data.

A :class:`RingModel` is a graded commutative Q-algebra with a monomial
basis, an integration functional on the top degree, and the total Chern
class of the tangent bundle.  Degrees are complex degrees, so divisor
classes have degree 1 and the top degree equals the complex dimension.

Rings are built from a presentation (generators and homogeneous
relations) by exact linear algebra one degree at a time.  Products of
models are formed directly from the tensor product of the two tables.

Multiplicative characteristic classes are evaluated without Chern roots:
``prod_i phi(x_i) = sum_lambda a_0^(r - len) a_lambda1 ... m_lambda(x)``
and every monomial symmetric function ``m_lambda`` is rewritten in
elementary symmetric functions, that is in Chern classes.
"""

from __future__ import annotations

import ast
import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import InvalidInput
from .exactnum import ONE, ZERO, Cyclotomic, Q, as_rational, fmt_rational

# ---------------------------------------------------------------- polynomials

Poly = dict  # exponent tuple -> rational


def parse_polynomial(text, names: list[str]) -> Poly:
    """Parse ``"x1*x2 - 2*x3^2 + 1/2"`` into ``{exponents: coeff}``.

    Accepts ``+ - * /``, integer powers via ``**`` or ``^``, parentheses and
    rational constants.  Division is only allowed by constants.
    """
    if isinstance(text, dict):
        return {tuple(k): as_rational(v) for k, v in text.items()}
    if isinstance(text, (int,)) or not isinstance(text, str):
        return {tuple([0] * len(names)): as_rational(text)}
    index = {n: i for i, n in enumerate(names)}
    n = len(names)
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise InvalidInput(f"cannot parse polynomial {text!r}") from exc

    def const(c):
        return {tuple([0] * n): as_rational(c)}

    def walk(node) -> Poly:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return const(node.value)
        if isinstance(node, ast.Name):
            if node.id not in index:
                raise InvalidInput(f"unknown generator {node.id!r} in {text!r}")
            e = [0] * n
            e[index[node.id]] = 1
            return {tuple(e): ONE}
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            p = walk(node.operand)
            return {k: -v for k, v in p.items()} if isinstance(node.op, ast.USub) else p
        if isinstance(node, ast.BinOp):
            a = walk(node.left)
            if isinstance(node.op, ast.Pow):
                e = _const_value(walk(node.right), n)
                if e.denominator != 1 or e < 0:
                    raise InvalidInput(f"exponent must be a nonnegative integer in {text!r}")
                return poly_pow(a, int(e), n)
            b = walk(node.right)
            if isinstance(node.op, ast.Add):
                return poly_add(a, b)
            if isinstance(node.op, ast.Sub):
                return poly_add(a, {k: -v for k, v in b.items()})
            if isinstance(node.op, ast.Mult):
                return poly_mul(a, b)
            if isinstance(node.op, ast.Div):
                c = _const_value(b, n)
                if c == 0:
                    raise InvalidInput("division by zero in polynomial")
                return {k: v / c for k, v in a.items()}
        raise InvalidInput(f"unsupported syntax in polynomial {text!r}")

    return {k: v for k, v in walk(tree).items() if v}


def _const_value(p: Poly, n: int):
    zero = tuple([0] * n)
    if any(k != zero for k, v in p.items() if v):
        raise InvalidInput("expected a constant")
    return p.get(zero, ZERO)


def poly_add(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, ZERO) + v
    return {k: v for k, v in out.items() if v}


def poly_mul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            k = tuple(x + y for x, y in zip(ka, kb))
            out[k] = out.get(k, ZERO) + va * vb
    return {k: v for k, v in out.items() if v}


def poly_pow(a: Poly, e: int, n: int) -> Poly:
    out = {tuple([0] * n): ONE}
    for _ in range(e):
        out = poly_mul(out, a)
    return out


def format_monomial(exps: tuple, names: list[str]) -> str:
    parts = []
    for e, name in zip(exps, names):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) or "1"


def format_polynomial(p: Poly, names: list[str]) -> str:
    if not p:
        return "0"
    out = []
    for k in sorted(p, key=lambda k: (sum(k), k)):
        c = p[k]
        mono = format_monomial(k, names)
        if mono == "1":
            out.append(fmt_rational(c))
        elif c == 1:
            out.append(mono)
        elif c == -1:
            out.append("-" + mono)
        else:
            out.append(f"{fmt_rational(c)}*{mono}")
    return " + ".join(out).replace("+ -", "- ")


# ---------------------------------------------------------------- rings


class RingModel:
    """Graded ring with monomial basis, structure constants and integration.

    ``basis[i]`` is an exponent tuple over ``generators``; ``mult[(i, j)]`` is
    a tuple of ``(k, c)`` pairs; ``integrals[k]`` is the value of the top
    degree basis element ``k``.
    """

    def __init__(self, dim, generators, basis, degrees, mult, integrals, nf=None):
        self.dim = int(dim)
        self.generators = list(generators)  # [(name, degree)]
        self.names = [g[0] for g in self.generators]
        self.basis = list(basis)
        self.degrees = list(degrees)
        self.mult = mult
        self.integrals = dict(integrals)
        self._nf = nf or {}
        self.index = {m: i for i, m in enumerate(self.basis)}
        self.tangent_chern: list[RingElement] = [self.one()]
        self.factors: list[RingModel] = []
        self._factor_maps: list[list[int]] = []

    # -- elements -------------------------------------------------------------
    def element(self, vec: dict) -> "RingElement":
        return RingElement(self, {k: as_rational(v) for k, v in vec.items() if v})

    def zero(self) -> "RingElement":
        return RingElement(self, {})

    def one(self) -> "RingElement":
        return RingElement(self, {self.index[tuple([0] * len(self.generators))]: ONE})

    def gen(self, name: str) -> "RingElement":
        if name not in self.names:
            raise InvalidInput(f"no generator {name!r}")
        e = [0] * len(self.names)
        e[self.names.index(name)] = 1
        return self.monomial(tuple(e))

    def monomial(self, exps: tuple) -> "RingElement":
        exps = tuple(exps)
        if exps in self.index:
            return RingElement(self, {self.index[exps]: ONE})
        deg = sum(e * g[1] for e, g in zip(exps, self.generators))
        if deg > self.dim:
            return self.zero()
        if exps in self._nf:
            return RingElement(self, dict(self._nf[exps]))
        # fall back to repeated multiplication by generators
        result = self.one()
        for i, e in enumerate(exps):
            for _ in range(e):
                result = result * self.gen(self.names[i])
        return result

    def parse(self, text) -> "RingElement":
        p = parse_polynomial(text, self.names)
        out = self.zero()
        for k, c in p.items():
            out = out + self.monomial(k).scale(c)
        return out

    def integrate(self, a: "RingElement"):
        tot = ZERO
        for k, c in a.vec.items():
            v = self.integrals.get(k)
            if v is not None:
                tot += c * v
        return tot

    def chern(self, i: int) -> "RingElement":
        if i < len(self.tangent_chern):
            return self.tangent_chern[i]
        return self.zero()

    def total_chern(self) -> "RingElement":
        out = self.zero()
        for c in self.tangent_chern:
            out = out + c
        return out

    def euler_number(self):
        return self.integrate(self.chern(self.dim))

    def basis_size(self) -> int:
        return len(self.basis)

    def basis_of_degree(self, k: int) -> list[int]:
        return [i for i, d in enumerate(self.degrees) if d == k]

    def top_index(self) -> int:
        (k,) = self.integrals.keys() if len(self.integrals) == 1 else (None,)
        if k is None:
            raise InvalidInput("top degree is not one-dimensional")
        return k

    def set_tangent_chern(self, classes) -> "RingModel":
        """Set ``c(T)`` from a total class or a list ``[c_1, ..., c_d]``."""
        if isinstance(classes, (str, RingElement)):
            tot = classes if isinstance(classes, RingElement) else self.parse(classes)
            parts = [tot.degree_part(i) for i in range(self.dim + 1)]
        else:
            parts = [self.one()] + [c if isinstance(c, RingElement) else self.parse(c) for c in classes]
            parts = parts[: self.dim + 1] + [self.zero()] * (self.dim + 1 - len(parts))
        for i, c in enumerate(parts):
            if any(self.degrees[k] != i for k in c.vec):
                raise InvalidInput(f"c_{i} is not homogeneous of degree {i}")
        if parts[0] != self.one():
            raise InvalidInput("c_0 of the tangent bundle must be 1")
        self.tangent_chern = parts
        return self

    # -- structure checks --------------------------------------------------------
    def check_structure(self) -> None:
        """Exhaustive associativity/commutativity check on the basis."""
        n = len(self.basis)
        els = [RingElement(self, {i: ONE}) for i in range(n)]
        for i in range(n):
            for j in range(n):
                if els[i] * els[j] != els[j] * els[i]:
                    raise InvalidInput(f"not commutative on basis {i},{j}")
                for k in range(n):
                    if (els[i] * els[j]) * els[k] != els[i] * (els[j] * els[k]):
                        raise InvalidInput(f"not associative on basis {i},{j},{k}")
        for k in self.integrals:
            if self.degrees[k] != self.dim:
                raise InvalidInput("integration supported outside the top degree")

    # -- products -------------------------------------------------------------------
    def factor_embedding(self, which: int, a: "RingElement") -> "RingElement":
        """Pull back an element of ``factors[which]`` along the projection."""
        fmap = self._factor_maps[which]
        return RingElement(self, {fmap[k]: c for k, c in a.vec.items()})

    def same_structure(self, other: "RingModel") -> bool:
        """Structure-constant equality up to reordering of a common basis."""
        if self.dim != other.dim or set(self.basis) != set(other.basis):
            return False
        perm = [other.index[m] for m in self.basis]
        for i in range(len(self.basis)):
            for j in range(len(self.basis)):
                a = {perm[k]: c for k, c in self.mult.get((i, j), ())}
                b = dict(other.mult.get((perm[i], perm[j]), ()))
                if a != b:
                    return False
        if {perm[k]: v for k, v in self.integrals.items()} != other.integrals:
            return False
        for ca, cb in zip(self.tangent_chern, other.tangent_chern):
            if {perm[k]: v for k, v in ca.vec.items()} != cb.vec:
                return False
        return True

    def __repr__(self):
        gens = ", ".join(f"{n}:{d}" for n, d in self.generators)
        return f"RingModel(dim={self.dim}, gens=[{gens}], basis={len(self.basis)})"

    def to_json(self) -> dict:
        return {
            "kind": "ring",
            "dim": self.dim,
            "generators": [{"name": n, "degree": d} for n, d in self.generators],
            "basis": [format_monomial(m, self.names) for m in self.basis],
            "tangent_chern": [c.to_string() for c in self.tangent_chern[1:]],
        }


class RingElement:
    """Immutable element of a :class:`RingModel` (sparse basis vector)."""

    __slots__ = ("model", "vec")
    is_ring_element = True

    def __init__(self, model: RingModel, vec: dict):
        self.model = model
        self.vec = vec

    def _lift(self, other):
        if isinstance(other, RingElement):
            if other.model is not self.model:
                raise InvalidInput("elements of different ring models")
            return other
        return self.model.one().scale(other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.vec)
        for k, c in other.vec.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return RingElement(self.model, out)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(self.model, {k: -c for k, c in self.vec.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "RingElement":
        # cyclotomic scalars are kept as is (twisted factors before averaging)
        if not isinstance(c, Cyclotomic):
            c = as_rational(c)
        if not c:
            return RingElement(self.model, {})
        return RingElement(self.model, {k: v * c for k, v in self.vec.items()})

    def __mul__(self, other):
        if not isinstance(other, RingElement):
            try:
                return self.scale(other)
            except InvalidInput:
                return NotImplemented
        other = self._lift(other)
        mult = self.model.mult
        out: dict = {}
        for i, a in self.vec.items():
            for j, b in other.vec.items():
                for k, c in mult.get((i, j), ()):
                    out[k] = out.get(k, ZERO) + a * b * c
        return RingElement(self.model, {k: v for k, v in out.items() if v})

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, e: int):
        out = self.model.one()
        for _ in range(e):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.vec)

    def __eq__(self, other):
        if isinstance(other, RingElement):
            return self.model is other.model and self.vec == other.vec
        try:
            return self == self._lift(other)
        except InvalidInput:
            return NotImplemented

    __hash__ = None

    def degree_part(self, k: int) -> "RingElement":
        deg = self.model.degrees
        return RingElement(self.model, {i: c for i, c in self.vec.items() if deg[i] == k})

    def constant(self):
        return self.vec.get(self.model.index[tuple([0] * len(self.model.names))], ZERO)

    def is_nilpotent(self) -> bool:
        return self.constant() == 0

    def inverse(self) -> "RingElement":
        c0 = self.constant()
        if not c0:
            raise InvalidInput("ring element with zero constant term is not a unit")
        inv0 = ONE / c0
        n = (self - c0).scale(-inv0)  # self = c0 (1 - n)
        out = self.model.one()
        term = self.model.one()
        for _ in range(self.model.dim):
            term = term * n
            if not term:
                break
            out = out + term
        return out.scale(inv0)

    def integrate(self):
        return self.model.integrate(self)

    def to_string(self) -> str:
        p = {}
        for k, c in self.vec.items():
            p[self.model.basis[k]] = c
        return format_polynomial(p, self.model.names)

    def __repr__(self):
        return f"RingElement({self.to_string()})"


def _monomials_of_degree(degs: list[int], k: int):
    n = len(degs)

    def rec(i, rem):
        if i == n:
            if rem == 0:
                yield ()
            return
        d = degs[i]
        for e in range(rem // d + 1) if d > 0 else [0]:
            for rest in rec(i + 1, rem - e * d):
                yield (e,) + rest

    return list(rec(0, k))


def _rref(rows: list[dict], order: list) -> tuple[dict, list]:
    """Reduced row echelon form; columns ordered by ``order`` (first = pivot first).

    Returns ``{pivot_col: row}`` with row[pivot] == 1.
    """
    pos = {c: i for i, c in enumerate(order)}
    pivots: dict = {}
    for r in rows:
        r = {k: v for k, v in r.items() if v}
        # reduce against existing pivots
        for p, prow in pivots.items():
            c = r.get(p)
            if c:
                for k, v in prow.items():
                    nv = r.get(k, ZERO) - c * v
                    if nv:
                        r[k] = nv
                    else:
                        r.pop(k, None)
        if not r:
            continue
        p = min(r, key=lambda k: pos[k])
        inv = ONE / r[p]
        r = {k: v * inv for k, v in r.items()}
        for q, qrow in pivots.items():
            c = qrow.get(p)
            if c:
                for k, v in r.items():
                    nv = qrow.get(k, ZERO) - c * v
                    if nv:
                        qrow[k] = nv
                    else:
                        qrow.pop(k, None)
        pivots[p] = r
    return pivots, [c for c in order if c not in pivots]


def from_presentation(generators, relations, dim: int, normalization, tangent_chern=None) -> RingModel:
    """Quotient ``Q[generators] / (relations)`` truncated above ``dim``.

    ``generators`` is a list of ``(name, degree)`` pairs (or dicts with
    ``name``/``degree``); ``normalization`` is a top-degree monomial whose
    integral is 1.
    """
    gens = []
    for g in generators:
        if isinstance(g, dict):
            gens.append((str(g["name"]), int(g["degree"])))
        elif isinstance(g, str):
            gens.append((g, 1))
        else:
            gens.append((str(g[0]), int(g[1])))
    names = [g[0] for g in gens]
    if len(set(names)) != len(names):
        raise InvalidInput("duplicate generator names")
    degs = [g[1] for g in gens]
    if any(d < 1 for d in degs):
        raise InvalidInput("generator degrees must be positive")
    dim = int(dim)
    if dim < 0:
        raise InvalidInput("dimension must be nonnegative")
    rels = []
    for r in relations:
        p = parse_polynomial(r, names)
        if not p:
            continue
        ds = {sum(e * d for e, d in zip(k, degs)) for k in p}
        if len(ds) != 1:
            raise InvalidInput(f"relation {r!r} is not homogeneous")
        rels.append((ds.pop(), p))

    basis, degrees, nf = [], [], {}
    for k in range(dim + 1):
        monos = _monomials_of_degree(degs, k)
        order = sorted(monos, reverse=True)  # lex-largest monomials become pivots
        spans = []
        for e, p in rels:
            if e > k:
                continue
            for m in _monomials_of_degree(degs, k - e):
                spans.append({tuple(a + b for a, b in zip(m, km)): c for km, c in p.items()})
        pivots, std = _rref(spans, order)
        std_sorted = sorted(std)
        for s in std_sorted:
            basis.append(s)
            degrees.append(k)
        for m in monos:
            if m in pivots:
                nf[m] = {s: -c for s, c in pivots[m].items() if s != m}
            else:
                nf[m] = {m: ONE}
    index = {m: i for i, m in enumerate(basis)}
    nf_idx = {m: {index[s]: c for s, c in v.items() if c} for m, v in nf.items()}

    top = [i for i, d in enumerate(degrees) if d == dim]
    if len(top) != 1:
        raise InvalidInput(
            f"top degree {dim} of the quotient has dimension {len(top)}, expected 1"
        )
    if isinstance(normalization, dict):
        ((norm_mono, norm_val),) = normalization.items()
    else:
        norm_mono, norm_val = normalization, 1
    np_ = parse_polynomial(norm_mono, names) if isinstance(norm_mono, str) else {tuple(norm_mono): ONE}
    if len(np_) != 1:
        raise InvalidInput("normalization must be a single monomial")
    ((nm, ncoef),) = np_.items()
    if sum(e * d for e, d in zip(nm, degs)) != dim:
        raise InvalidInput("normalization monomial is not of top degree")
    val = nf_idx.get(nm, {}).get(top[0], ZERO) * ncoef
    if not val:
        raise InvalidInput("normalization monomial vanishes in the quotient")
    integrals = {top[0]: as_rational(norm_val) / val}

    mult = {}
    for i, mi in enumerate(basis):
        for j, mj in enumerate(basis):
            if degrees[i] + degrees[j] > dim:
                continue
            m = tuple(a + b for a, b in zip(mi, mj))
            mult[(i, j)] = tuple(sorted(nf_idx[m].items()))
    model = RingModel(dim, gens, basis, degrees, mult, integrals, nf=nf_idx)
    if tangent_chern is not None:
        model.set_tangent_chern(tangent_chern)
    return model


def point_model() -> RingModel:
    return from_presentation([], [], 0, {(): 1}, None)


def projective_space(n: int) -> RingModel:
    if n < 1:
        raise InvalidInput("projective space needs n >= 1")
    return from_presentation([("h", 1)], [f"h^{n + 1}"], n, f"h^{n}", f"(1+h)^{n + 1}")


def curve_ring(genus: int = 1) -> RingModel:
    """Cohomology ``Q[h]/h^2`` of a curve of the given genus, ``h`` the point class."""
    return from_presentation([("h", 1)], ["h^2"], 1, "h", f"1+({2 - 2 * genus})*h")


def product_model(*models: RingModel) -> RingModel:
    """Tensor product; integrals and total Chern classes multiply."""
    if not models:
        return point_model()
    gens, offsets = [], []
    taken: set = set()
    for idx, m in enumerate(models):
        offsets.append(len(gens))
        for name, deg in m.generators:
            new = name
            if new in taken:
                new = f"{name}_{idx + 1}"
                while new in taken:
                    new += "'"
            taken.add(new)
            gens.append((new, deg))
    ngen = len(gens)

    def label(combo):
        e = [0] * ngen
        for m, off, i in zip(models, offsets, combo):
            for t, v in enumerate(m.basis[i]):
                e[off + t] = v
        return tuple(e)

    combos = sorted(
        itertools.product(*[range(len(m.basis)) for m in models]),
        key=lambda c: (sum(m.degrees[i] for m, i in zip(models, c)), c),
    )
    basis = [label(c) for c in combos]
    degrees = [sum(m.degrees[i] for m, i in zip(models, c)) for c in combos]
    cindex = {c: n for n, c in enumerate(combos)}
    dim = sum(m.dim for m in models)
    mult = {}
    for a, ca in enumerate(combos):
        for b, cb in enumerate(combos):
            if degrees[a] + degrees[b] > dim:
                continue
            acc = {(): ONE}
            for m, i, j in zip(models, ca, cb):
                nxt = {}
                for part, c in acc.items():
                    for k, v in m.mult.get((i, j), ()):
                        nxt[part + (k,)] = c * v
                acc = nxt
            mult[(a, b)] = tuple(sorted((cindex[k], v) for k, v in acc.items() if v))
    integrals = {}
    for top in itertools.product(*[m.integrals.items() for m in models]):
        key = tuple(k for k, _ in top)
        integrals[cindex[key]] = math.prod((v for _, v in top), start=ONE)
    model = RingModel(dim, gens, basis, degrees, mult, integrals)
    model.factors = list(models)
    zero_combo = [m.index[tuple([0] * len(m.names))] for m in models]
    for w, m in enumerate(models):
        fmap = []
        for i in range(len(m.basis)):
            c = list(zero_combo)
            c[w] = i
            fmap.append(cindex[tuple(c)])
        model._factor_maps.append(fmap)
    total = model.one()
    for w, m in enumerate(models):
        total = total * model.factor_embedding(w, m.total_chern())
    model.set_tangent_chern(total)
    return model


def power_model(m: RingModel, k: int) -> RingModel:
    return product_model(*([m] * k)) if k > 0 else point_model()


def ring_from_json(data: dict) -> RingModel:
    known = {"kind", "dim", "generators", "relations", "normalization", "tangent_chern", "schema_version"}
    extra = set(data) - known
    if extra:
        raise InvalidInput(f"unknown ring fields {sorted(extra)}")
    try:
        norm = data["normalization"]
        if isinstance(norm, dict):
            ((mono, val),) = norm.items()
            norm = {mono: as_rational(val)}
        return from_presentation(
            data["generators"], data.get("relations", []), data["dim"], norm, data.get("tangent_chern")
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed ring JSON: {exc}") from exc


# ---------------------------------------------------------------- Chern numbers


@dataclass(frozen=True)
class ChernNumberModel:
    """Chern numbers ``c_{i_1} ... c_{i_k}[X]`` keyed by partitions of ``dim``."""

    dim: int
    chern_integrals: dict = field(default_factory=dict)

    def __post_init__(self):
        ints = {tuple(sorted(k, reverse=True)): as_rational(v) for k, v in self.chern_integrals.items()}
        object.__setattr__(self, "chern_integrals", ints)
        missing = [p for p in partitions(self.dim) if p not in ints]
        if missing:
            raise InvalidInput(f"missing Chern numbers for partitions {missing}")

    def chern_number(self, part) -> object:
        part = tuple(sorted((p for p in part if p), reverse=True))
        if sum(part) != self.dim:
            return ZERO
        return self.chern_integrals[part]

    def euler_number(self):
        return self.chern_number((self.dim,)) if self.dim else ONE

    def to_json(self) -> dict:
        return {
            "kind": "chern_numbers",
            "dim": self.dim,
            "integrals": {",".join(map(str, k)): fmt_rational(v) for k, v in sorted(self.chern_integrals.items())},
        }


def chern_numbers_from_json(data: dict) -> ChernNumberModel:
    extra = set(data) - {"kind", "dim", "integrals", "schema_version"}
    if extra:
        raise InvalidInput(f"unknown chern-number fields {sorted(extra)}")
    try:
        ints = {tuple(int(t) for t in str(k).split(",")): as_rational(v) for k, v in data["integrals"].items()}
        return ChernNumberModel(int(data["dim"]), ints)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InvalidInput):
            raise
        raise InvalidInput(f"malformed chern-number JSON: {exc}") from exc


def formal_surface(c1_sq, c2) -> ChernNumberModel:
    return ChernNumberModel(2, {(1, 1): c1_sq, (2,): c2})


def formal_curve(genus: int = 1) -> ChernNumberModel:
    """A curve of the given genus as Chern numbers (``c_1 = 2 - 2g``)."""
    return ChernNumberModel(1, {(1,): 2 - 2 * genus})


def chern_numbers_of(model: RingModel) -> ChernNumberModel:
    ints = {}
    for p in partitions(model.dim):
        prod = model.one()
        for i in p:
            prod = prod * model.chern(i)
        ints[p] = model.integrate(prod)
    return ChernNumberModel(model.dim, ints)


# ---------------------------------------------------------------- symmetric functions


@lru_cache(maxsize=None)
def partitions(n: int, max_part: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Partitions of ``n`` as non-increasing tuples, in reverse lex order."""
    if max_part is None:
        max_part = n
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def conjugate(part: tuple[int, ...]) -> tuple[int, ...]:
    if not part:
        return ()
    return tuple(sum(1 for p in part if p > i) for i in range(part[0]))


@lru_cache(maxsize=None)
def _elementary_in_monomial(mu: tuple[int, ...]) -> dict:
    """``e_mu`` in the monomial basis, in ``|mu|`` variables."""
    n = sum(mu)
    poly = {tuple([0] * n): 1}
    for k in mu:
        nxt: dict = {}
        for subset in itertools.combinations(range(n), k):
            for e, c in poly.items():
                e2 = list(e)
                for i in subset:
                    e2[i] += 1
                t = tuple(e2)
                nxt[t] = nxt.get(t, 0) + c
        poly = nxt
    out = {}
    for e, c in poly.items():
        lam = tuple(sorted((x for x in e if x), reverse=True))
        if tuple(sorted(e, reverse=True)) == e:  # one representative per orbit
            out[lam] = c
    return out


@lru_cache(maxsize=None)
def monomial_in_elementary(lam: tuple[int, ...]) -> dict:
    """``m_lam = sum_mu c_mu e_mu``; returns ``{mu: c}`` with integer ``c``."""
    lam = tuple(sorted((p for p in lam if p), reverse=True))
    if not lam:
        return {(): 1}
    lead = conjugate(lam)
    exp = _elementary_in_monomial(lead)
    out = {lead: 1}
    for nu, c in exp.items():
        if nu == lam or not c:
            continue
        for mu, d in monomial_in_elementary(nu).items():
            out[mu] = out.get(mu, 0) - c * d
    return {mu: c for mu, c in out.items() if c}


def multiplicative_terms(rank: int, top: int):
    """Partitions ``lam`` with ``|lam| <= top`` and ``len(lam) <= rank``."""
    for k in range(top + 1):
        for lam in partitions(k):
            if len(lam) <= rank:
                yield lam


def chern_monomial(model: RingModel, classes: list, lam: tuple[int, ...]) -> RingElement:
    """Evaluate ``m_lam`` of Chern roots given the Chern classes ``classes``."""
    out = model.zero()
    for mu, c in monomial_in_elementary(lam).items():
        prod = model.one()
        for i in mu:
            prod = prod * (classes[i] if i < len(classes) else model.zero())
            if not prod:
                break
        if prod:
            out = out + prod.scale(c)
    return out
