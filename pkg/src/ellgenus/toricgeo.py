"""Fans, Stanley-Reisner rings, refinements and torus-subgroup quotients.

Conventions: ``deg`` is a piecewise-linear function on a simplicial fan,
given by its values on the rays.  For a refinement of a coarse fan with
``deg = 1`` on the coarse rays, the discrepancy of a fine ray is
``deg(ray) - 1``.

A quotient is described by an integer matrix ``A``: the fan lives in
``N = A Z^r`` (rays given in the basis formed by the columns of ``A``) and
``N' = Z^r``.  The group ``G = N'/N`` acts on the toric variety through
the torus; the element ``v`` acts on the chart coordinate dual to ray
``n_i`` of a smooth cone by ``exp(2 pi i c_i)``, where ``v = sum c_i n_i``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import reduce

from .cohom import RingModel, from_presentation, point_model, projective_space
from .errors import InvalidInput, UnsupportedScale
from .exactnum import ONE, ZERO, Q, as_rational, fmt_rational, frac_part

# ---------------------------------------------------------------- exact linear algebra


def _det(rows: list[list]) -> object:
    n = len(rows)
    if n == 0:
        return ONE
    m = [[as_rational(x) for x in r] for r in rows]
    det = ONE
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            return ZERO
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        inv = ONE / m[c][c]
        for r in range(c + 1, n):
            f = m[r][c] * inv
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return det


def _rank(vectors: list) -> int:
    rows = [[as_rational(x) for x in v] for v in vectors]
    if not rows:
        return 0
    ncol = len(rows[0])
    rk = 0
    for c in range(ncol):
        p = next((r for r in range(rk, len(rows)) if rows[r][c]), None)
        if p is None:
            continue
        rows[rk], rows[p] = rows[p], rows[rk]
        inv = ONE / rows[rk][c]
        for r in range(len(rows)):
            if r != rk and rows[r][c]:
                f = rows[r][c] * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rk])]
        rk += 1
    return rk


def _solve(cols: list, v) -> list | None:
    """Coefficients ``c`` with ``sum c_i cols[i] = v`` (unique), or ``None``."""
    n = len(cols)
    dim = len(v)
    aug = [[as_rational(cols[j][i]) for j in range(n)] + [as_rational(v[i])] for i in range(dim)]
    row = 0
    piv = []
    for c in range(n):
        p = next((r for r in range(row, dim) if aug[r][c]), None)
        if p is None:
            continue
        aug[row], aug[p] = aug[p], aug[row]
        inv = ONE / aug[row][c]
        aug[row] = [a * inv for a in aug[row]]
        for r in range(dim):
            if r != row and aug[r][c]:
                f = aug[r][c]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        piv.append(c)
        row += 1
    if any(aug[r][n] for r in range(row, dim)):
        return None
    if len(piv) < n:
        return None
    out = [ZERO] * n
    for r, c in enumerate(piv):
        out[c] = aug[r][n]
    return out


def _nullspace(rows: list) -> list:
    """Basis of ``{x : rows x = 0}``."""
    if not rows:
        return []
    ncol = len(rows[0])
    m = [[as_rational(x) for x in r] for r in rows]
    piv = []
    r0 = 0
    for c in range(ncol):
        p = next((r for r in range(r0, len(m)) if m[r][c]), None)
        if p is None:
            continue
        m[r0], m[p] = m[p], m[r0]
        inv = ONE / m[r0][c]
        m[r0] = [a * inv for a in m[r0]]
        for r in range(len(m)):
            if r != r0 and m[r][c]:
                f = m[r][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[r0])]
        piv.append(c)
        r0 += 1
    free = [c for c in range(ncol) if c not in piv]
    basis = []
    for f in free:
        v = [ZERO] * ncol
        v[f] = ONE
        for r, c in enumerate(piv):
            v[c] = -m[r][f]
        basis.append(v)
    return basis


def _gcd_minors(vectors: list) -> int:
    k = len(vectors)
    if k == 0:
        return 1
    dim = len(vectors[0])
    g = 0
    for cols in itertools.combinations(range(dim), k):
        d = _det([[v[c] for c in cols] for v in vectors])
        g = math.gcd(g, int(abs(d)))
    return g


# ---------------------------------------------------------------- fans


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(tuple(sorted(int(i) for i in c)) for c in self.max_cones)
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        if self.rank < 1:
            raise InvalidInput("fan rank must be positive")
        for r in rays:
            if len(r) != self.rank:
                raise InvalidInput(f"ray {r} does not have rank {self.rank}")
            if not any(r):
                raise InvalidInput("zero ray")
            if reduce(math.gcd, (abs(x) for x in r)) != 1:
                raise InvalidInput(f"ray {r} is not primitive")
        if len(set(rays)) != len(rays):
            raise InvalidInput("repeated ray")
        for c in cones:
            if not c or len(set(c)) != len(c):
                raise InvalidInput(f"malformed cone {c}")
            if any(i < 0 or i >= len(rays) for i in c):
                raise InvalidInput(f"cone {c} references a missing ray")

    def cone_rays(self, cone) -> list:
        return [self.rays[i] for i in cone]

    def cones(self) -> set:
        """All faces of the maximal cones (as sorted index tuples), including ``()``."""
        out = set()
        for c in self.max_cones:
            for k in range(len(c) + 1):
                out.update(itertools.combinations(c, k))
        return out

    def containing_cone(self, v) -> tuple | None:
        """A maximal cone containing ``v`` and its coordinates there."""
        for c in self.max_cones:
            coords = _solve(self.cone_rays(c), v)
            if coords is not None and all(x >= 0 for x in coords):
                return c, coords
        return None

    def to_json(self) -> dict:
        return {"rank": self.rank, "rays": [list(r) for r in self.rays], "max_cones": [list(c) for c in self.max_cones]}

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        extra = set(data) - {"rank", "rays", "max_cones", "schema_version", "kind"}
        if extra:
            raise InvalidInput(f"unknown fan fields {sorted(extra)}")
        try:
            return cls(int(data["rank"]), tuple(map(tuple, data["rays"])), tuple(map(tuple, data["max_cones"])))
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidInput):
                raise
            raise InvalidInput(f"malformed fan JSON: {exc}") from exc


def _in_cone(rays: list, v) -> bool:
    if not rays:
        return not any(v)
    coords = _solve(rays, v)
    return coords is not None and all(x >= 0 for x in coords)


def _span_intersection_line(A: list, B: list, rank: int):
    """Direction of ``span(A) cap span(B)`` if it is a line, else ``None``."""
    if not A or not B:
        return None
    # solve sum a_i A_i - sum b_j B_j = 0
    rows = [[A[i][k] for i in range(len(A))] + [-B[j][k] for j in range(len(B))] for k in range(rank)]
    ns = _nullspace(rows)
    vecs = []
    for sol in ns:
        v = [sum((sol[i] * A[i][k] for i in range(len(A))), ZERO) for k in range(rank)]
        vecs.append(v)
    if _rank(vecs) != 1:
        return None
    return next(v for v in vecs if any(v))


def _cones_meet_properly(f: Fan, c1: tuple, c2: tuple) -> bool:
    """Exact check that ``c1 cap c2`` is the common face (simplicial cones)."""
    common = sorted(set(c1) & set(c2))
    common_rays = f.cone_rays(common)
    R1, R2 = f.cone_rays(c1), f.cone_rays(c2)
    # every extreme ray of the intersection lies on span(F) cap span(G) for faces F, G
    candidates = [r for r in R1 if _in_cone(R2, r)] + [r for r in R2 if _in_cone(R1, r)]
    for k1 in range(1, len(c1) + 1):
        for F in itertools.combinations(R1, k1):
            for k2 in range(1, len(c2) + 1):
                for G in itertools.combinations(R2, k2):
                    v = _span_intersection_line(list(F), list(G), f.rank)
                    if v is None:
                        continue
                    for w in (v, [-x for x in v]):
                        if _in_cone(R1, w) and _in_cone(R2, w):
                            candidates.append(w)
    return all(_in_cone(common_rays, w) for w in candidates)


def fan_validate(f: Fan) -> dict:
    """``{smooth, complete, simplicial}`` for a fan of rank at most 3."""
    if f.rank > 3:
        raise UnsupportedScale("fan validation is implemented for rank <= 3")
    simplicial = all(_rank(f.cone_rays(c)) == len(c) for c in f.max_cones)
    if not simplicial:
        return {"smooth": False, "complete": _complete_nonsimplicial(f), "simplicial": False}
    for c1, c2 in itertools.combinations(f.max_cones, 2):
        if set(c1) <= set(c2) or set(c2) <= set(c1):
            raise InvalidInput(f"cone {c1} is a face of cone {c2}; list maximal cones only")
        if not _cones_meet_properly(f, c1, c2):
            raise InvalidInput(f"cones {c1} and {c2} do not meet in a common face")
    smooth = all(_gcd_minors(f.cone_rays(c)) == 1 for c in f.max_cones)
    complete = _complete_simplicial(f)
    return {"smooth": smooth, "complete": complete, "simplicial": True}


def _complete_simplicial(f: Fan) -> bool:
    if not f.max_cones or any(len(c) != f.rank for c in f.max_cones):
        return False
    facets: dict = {}
    for c in f.max_cones:
        for i in c:
            face = tuple(j for j in c if j != i)
            facets.setdefault(face, []).append((c, i))
    for face, owners in facets.items():
        if len(owners) != 2:
            return False
        # the two cones must lie on opposite sides of the facet
        normals = _nullspace([list(f.rays[j]) for j in face]) if face else [[ONE]]
        nrm = normals[0]
        s = [sum((nrm[k] * f.rays[opp][k] for k in range(f.rank)), ZERO) for _, opp in owners]
        if not (s[0] * s[1] < 0):
            return False
    # covering degree 1 at a generic point
    probe = [Q(1, 1)] + [Q(7 ** (k + 1) + 3, 1000 + 17 * k) for k in range(f.rank - 1)]
    hits = 0
    for c in f.max_cones:
        coords = _solve(f.cone_rays(c), probe)
        if coords is not None and all(x > 0 for x in coords):
            hits += 1
    return hits == 1


def _complete_nonsimplicial(f: Fan) -> bool:
    return False


# ---------------------------------------------------------------- Stanley-Reisner rings


def ray_names(f: Fan) -> list[str]:
    return [f"x{i + 1}" for i in range(len(f.rays))]


def stanley_reisner(f: Fan) -> RingModel:
    """Cohomology of a smooth complete toric variety from its fan."""
    v = fan_validate(f)
    if not (v["smooth"] and v["complete"]):
        raise InvalidInput("Stanley-Reisner ring needs a smooth complete fan")
    n = len(f.rays)
    names = ray_names(f)
    faces = f.cones()
    rels = []
    for k in range(2, f.rank + 2):
        for S in itertools.combinations(range(n), k):
            if S in faces:
                continue
            if any(T not in faces for T in itertools.combinations(S, k - 1)):
                continue  # not minimal
            e = [0] * n
            for i in S:
                e[i] = 1
            rels.append({tuple(e): ONE})
    for k in range(f.rank):
        p = {}
        for i, r in enumerate(f.rays):
            if r[k]:
                e = [0] * n
                e[i] = 1
                p[tuple(e)] = as_rational(r[k])
        rels.append(p)
    top = [0] * n
    for i in f.max_cones[0]:
        top[i] = 1
    tangent = "*".join(f"(1+{nm})" for nm in names)
    model = from_presentation([(nm, 1) for nm in names], rels, f.rank, {tuple(top): 1}, tangent)
    model.fan = f
    return model


# ---------------------------------------------------------------- PL functions and refinements


@dataclass(frozen=True)
class PLFunction:
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(as_rational(v) for v in self.values))

    def evaluate(self, f: Fan, v):
        hit = f.containing_cone(v)
        if hit is None:
            raise InvalidInput(f"vector {tuple(v)} is not in the support of the fan")
        cone, coords = hit
        return sum((c * self.values[i] for c, i in zip(coords, cone)), ZERO)

    def to_json(self) -> dict:
        return {"ray_values": [fmt_rational(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "PLFunction":
        extra = set(data) - {"ray_values", "schema_version"}
        if extra:
            raise InvalidInput(f"unknown deg fields {sorted(extra)}")
        return cls(tuple(as_rational(v) for v in data["ray_values"]))


def unit_deg(f: Fan) -> PLFunction:
    return PLFunction(tuple(ONE for _ in f.rays))


@dataclass
class Discrepancies:
    entries: list  # [(fine ray index, alpha)]
    log_terminal: bool
    has_minus_one: bool
    all_alpha: list = field(default_factory=list)  # alpha for every fine ray


def refinement_discrepancies(coarse: Fan, deg: PLFunction | None, fine: Fan) -> Discrepancies:
    """``alpha_k = deg(r_k) - 1`` on the rays of a refinement.

    Entries list the new rays and every ray with nonzero discrepancy.
    """
    if coarse.rank != fine.rank:
        raise InvalidInput("fans of different rank")
    if deg is None:
        deg = unit_deg(coarse)
    if len(deg.values) != len(coarse.rays):
        raise InvalidInput("deg needs one value per coarse ray")
    for c in fine.max_cones:
        rays = fine.cone_rays(c)
        if not any(all(_in_cone(coarse.cone_rays(cc), r) for r in rays) for cc in coarse.max_cones):
            raise InvalidInput(f"fine cone {c} is not contained in a coarse cone")
    coarse_set = set(coarse.rays)
    entries, alphas = [], []
    for i, r in enumerate(fine.rays):
        a = deg.evaluate(coarse, r) - 1
        alphas.append(a)
        if r not in coarse_set or a != 0:
            entries.append((i, a))
    return Discrepancies(
        entries,
        log_terminal=all(a > -1 for a in alphas),
        has_minus_one=any(a == -1 for a in alphas),
        all_alpha=alphas,
    )


def _lowest_interior_point(u, v):
    """Nonzero lattice point ``a u + b v`` with ``0 <= a, b < 1`` minimizing ``a + b``."""
    best = None
    xs = [0, u[0], v[0], u[0] + v[0]]
    ys = [0, u[1], v[1], u[1] + v[1]]
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if x == 0 and y == 0:
                continue
            ab = _solve([list(u), list(v)], (x, y))
            if ab is None or not all(0 <= c < 1 for c in ab):
                continue
            if best is None or sum(ab) < best[0]:
                best = (sum(ab), (x, y))
    return best[1]


def resolve_rank2(f: Fan) -> Fan:
    """A smooth refinement of a complete simplicial rank-2 fan.

    Cones are subdivided by the lowest lattice point of their fundamental
    parallelogram until every cone is unimodular; this reproduces the
    boundary points of the convex hull, i.e. the minimal resolution.
    """
    if f.rank != 2:
        raise UnsupportedScale("automatic resolution is implemented for rank 2")
    rays = list(f.rays)
    todo = [tuple(c) for c in f.max_cones]
    done = []
    while todo:
        i, j = todo.pop()
        u, v = rays[i], rays[j]
        if abs(u[0] * v[1] - u[1] * v[0]) == 1:
            done.append((i, j))
            continue
        w = _lowest_interior_point(u, v)
        g = math.gcd(*w)
        w = (w[0] // g, w[1] // g)
        if w in rays:
            k = rays.index(w)
        else:
            rays.append(w)
            k = len(rays) - 1
        todo += [(i, k), (k, j)]
    return Fan(2, tuple(rays), tuple(done))


def toric_pair_divisors(fine: Fan, ring: RingModel, alphas: list) -> list:
    """``[(x_k, alpha_k)]`` for every fine ray with nonzero discrepancy."""
    names = ray_names(fine)
    return [(ring.gen(names[i]), a) for i, a in enumerate(alphas) if a != 0]


def toric_singular_genus(coarse: Fan, fine: Fan, q_order, deg: PLFunction | None = None, convention: str = "ell"):
    """Singular elliptic genus of the toric pair ``(coarse, deg)`` via the smooth ``fine``."""
    from .genuscore import ell_singular

    disc = refinement_discrepancies(coarse, deg, fine)
    if disc.has_minus_one:
        raise InvalidInput("a ray has discrepancy -1; that case is not supported")
    ring = stanley_reisner(fine)
    return ell_singular(ring, toric_pair_divisors(fine, ring, disc.all_alpha), q_order, convention)


# ---------------------------------------------------------------- quotients


@dataclass(frozen=True)
class QuotientData:
    sublattice_matrix: tuple

    def __post_init__(self):
        m = tuple(tuple(int(x) for x in r) for r in self.sublattice_matrix)
        object.__setattr__(self, "sublattice_matrix", m)
        if not m or any(len(r) != len(m) for r in m):
            raise InvalidInput("sublattice matrix must be square")
        if _det([list(r) for r in m]) == 0:
            raise InvalidInput("sublattice must have finite index")

    @property
    def rank(self) -> int:
        return len(self.sublattice_matrix)

    @property
    def order(self) -> int:
        return int(abs(_det([list(r) for r in self.sublattice_matrix])))

    def to_N_prime(self, v) -> tuple:
        A = self.sublattice_matrix
        return tuple(sum(A[i][j] * v[j] for j in range(self.rank)) for i in range(self.rank))

    def reduce(self, w) -> tuple:
        """Canonical representative of ``w`` in ``N'/N``."""
        A = self.sublattice_matrix
        cols = [[A[i][j] for i in range(self.rank)] for j in range(self.rank)]
        coords = _solve(cols, w)
        fl = [x.numerator // x.denominator for x in coords]
        return tuple(w[i] - sum(A[i][j] * fl[j] for j in range(self.rank)) for i in range(self.rank))

    def elements(self) -> list[tuple]:
        """Coset representatives of ``N'/N`` (the identity first)."""
        n = self.order
        seen = []
        found = set()
        for w in itertools.product(range(n), repeat=self.rank):
            r = self.reduce(w)
            if r not in found:
                found.add(r)
                seen.append(r)
        seen.sort(key=lambda t: (any(t), t))
        if len(seen) != n:
            raise InvalidInput("could not enumerate the quotient group")
        return seen

    def in_N_coords(self, w) -> list:
        """``w`` in N'-coordinates rewritten in the basis of ``N``."""
        A = self.sublattice_matrix
        cols = [[A[i][j] for i in range(self.rank)] for j in range(self.rank)]
        return _solve(cols, w)

    def to_json(self) -> dict:
        return {"sublattice_matrix": [list(r) for r in self.sublattice_matrix]}

    @classmethod
    def from_json(cls, data: dict) -> "QuotientData":
        extra = set(data) - {"sublattice_matrix", "schema_version"}
        if extra:
            raise InvalidInput(f"unknown quotient fields {sorted(extra)}")
        return cls(tuple(map(tuple, data["sublattice_matrix"])))


@dataclass
class QuotientSetup:
    fan: Fan  # the same cones, rays as primitive vectors of N'
    nu: list
    delta: list  # (nu - 1) / nu per ray
    deg: PLFunction  # 1 / nu on the primitive rays, i.e. 1 on the original n_i


def quotient_setup(f: Fan, q: QuotientData) -> QuotientSetup:
    if f.rank != q.rank:
        raise InvalidInput("quotient rank does not match the fan")
    rays, nus = [], []
    for r in f.rays:
        img = q.to_N_prime(r)
        nu = reduce(math.gcd, (abs(x) for x in img))
        nus.append(nu)
        rays.append(tuple(x // nu for x in img))
    qf = Fan(f.rank, tuple(rays), f.max_cones)
    return QuotientSetup(
        qf,
        nus,
        [Q(nu - 1, nu) for nu in nus],
        PLFunction(tuple(Q(1, nu) for nu in nus)),
    )


def quotient_pair_genus(f: Fan, q: QuotientData, q_order, fine: Fan | None = None, convention: str = "hat"):
    """Genus of the pair ``(X/G, Delta)`` through a smooth fan over ``N'``.

    ``fine`` refines the quotient fan; if omitted a rank-2 quotient fan is
    resolved automatically.
    """
    qs = quotient_setup(f, q)
    if fine is None:
        fine = qs.fan if fan_validate(qs.fan)["smooth"] else resolve_rank2(qs.fan)
    return toric_singular_genus(qs.fan, fine, q_order, qs.deg, convention)


# ---------------------------------------------------------------- fixed-point data


def toric_fixed_data(f: Fan, q: QuotientData):
    """Commuting-pair fixed-point data for ``G = N'/N`` acting on ``X_f``."""
    from .orbifold import ActionData, EigenBundle, FixedComponent, PairEntry

    if f.rank > 2:
        raise UnsupportedScale("toric fixed-point synthesis is implemented for rank <= 2")
    v = fan_validate(f)
    if not (v["smooth"] and v["complete"]):
        raise InvalidInput("fixed-point data needs a smooth complete fan over N")
    ring = stanley_reisner(f)
    names = ray_names(f)
    elems = q.elements()
    coords_N = {g: q.in_N_coords(g) for g in elems}
    cones = sorted(f.cones(), key=lambda c: (len(c), c))

    def coords_in(cone_max, w):
        return dict(zip(cone_max, _solve(f.cone_rays(cone_max), w)))

    def fixes(tau, w):
        sigma = next(c for c in f.max_cones if set(tau) <= set(c))
        cs = coords_in(sigma, w)
        return all(cs[i].denominator == 1 for i in sigma if i not in tau)

    def char(tau, i, w):
        sigma = next(c for c in f.max_cones if set(tau) <= set(c))
        return frac_part(coords_in(sigma, w)[i])

    entries = []
    cache: dict = {}
    for g in elems:
        for h in elems:
            wg, wh = coords_N[g], coords_N[h]
            fixed = [t for t in cones if fixes(t, wg) and fixes(t, wh)]
            minimal = [t for t in fixed if not any(set(s) < set(t) for s in fixed)]
            comps = []
            for tau in minimal:
                key = (tau, tuple(char(tau, i, wg) for i in tau), tuple(char(tau, i, wh) for i in tau))
                if key not in cache:
                    cache[key] = _toric_component(f, ring, names, tau, key[1], key[2])
                comps.append(cache[key])
            entries.append(PairEntry(1, comps, (g, h)))
    return ActionData(q.order, f.rank, entries)


def _toric_component(f: Fan, ring: RingModel, names, tau, lg, lh):
    from .orbifold import EigenBundle, FixedComponent

    dim = f.rank - len(tau)
    if dim == f.rank:
        return FixedComponent(ring, [EigenBundle(ZERO, ZERO, ring.dim, list(ring.tangent_chern))])
    if dim == 0:
        comp = point_model()
        bundles: dict = {}
        for a, b in zip(lg, lh):
            bundles[(a, b)] = bundles.get((a, b), 0) + 1
        return FixedComponent(
            comp, [EigenBundle(a, b, r, [comp.one()]) for (a, b), r in sorted(bundles.items())]
        )
    # rank 2, tau a ray: V(tau) is a projective line with normal degree D_tau^2
    (i,) = tau
    x = ring.gen(names[i])
    self_int = ring.integrate(x * x)
    comp = projective_space(1)
    h = comp.gen("h")
    return FixedComponent(
        comp,
        [
            EigenBundle(ZERO, ZERO, 1, [comp.one(), h.scale(2)]),
            EigenBundle(lg[0], lh[0], 1, [comp.one(), h.scale(self_int)]),
        ],
    )


# ---------------------------------------------------------------- lattice-sum form


def _parallelepiped(gens: list) -> list:
    """Lattice points ``sum c_i v_i`` with ``0 <= c_i < 1``, with their coordinates."""
    r = len(gens[0])
    if len(gens) == 1:
        return [((0,) * r, [ZERO])]
    boxes = []
    for k in range(r):
        corners = [sum(v[k] for v, on in zip(gens, mask) if on) for mask in itertools.product((0, 1), repeat=len(gens))]
        boxes.append(range(min(corners), max(corners) + 1))
    out = []
    for p in itertools.product(*boxes):
        c = _solve(gens, p)
        if c is not None and all(0 <= x < 1 for x in c):
            out.append((p, c))
    return out


def _cone_term(gens: list, values: list, box: list, m, W) -> object:
    """Analytic continuation of ``sum_{n in C} q^(m.n) y^(deg n)`` as a YFrac."""
    from .qyseries import Series, YFrac

    num_terms: dict = {}
    for p, c in box:
        key = (sum((ci * vi for ci, vi in zip(c, values)), ZERO), as_rational(sum(a * b for a, b in zip(m, p))))
        num_terms[key] = num_terms.get(key, ZERO) + ONE
    val = YFrac(Series.from_terms(num_terms))
    for v, a in zip(gens, values):
        e = sum(x * y for x, y in zip(m, v))
        if e == 0:
            val = val * YFrac(Series.monomial(ONE, -a / 2, 0), {a: 1})
            continue
        if e < 0:
            # 1/(1 - t) = -t^-1 / (1 - t^-1)
            val = val * Series.monomial(-ONE, -a, -e)
            e, a = -e, -a
        geo = {(k * a, k * e): ONE for k in range(int(W) // e + 1) if k * e < W}
        val = val * Series.from_terms(geo, q_order=W)
    return val


def lattice_f(f: Fan, deg: PLFunction | None, q_order, max_radius: int = 12):
    """Signed cone sum over ``m`` in the dual lattice, in the hat convention.

    Shells ``max |m_i| = R`` are added until two consecutive shells
    contribute nothing below ``q^Q``; that stopping rule is a heuristic.
    """
    from .errors import StabilizationError
    from .genuscore import make_result
    from .qyseries import Series, YFrac

    if f.rank > 2:
        raise UnsupportedScale("the lattice-sum form is implemented for rank <= 2")
    v = fan_validate(f)
    if not (v["complete"] and v["simplicial"]):
        raise InvalidInput("the lattice-sum form needs a complete simplicial fan")
    if deg is None:
        deg = unit_deg(f)
    if any(x <= 0 for x in deg.values):
        raise InvalidInput("deg must be positive on every ray")
    Qo = as_rational(q_order)
    cones = sorted(f.cones(), key=lambda c: (len(c), c))
    data = []
    for c in cones:
        gens = f.cone_rays(c)
        vals = [deg.values[i] for i in c]
        box = _parallelepiped(gens) if gens else [((0,) * f.rank, [])]
        sign = -1 if (f.rank - len(c)) % 2 else 1
        data.append((gens, vals, box, sign))

    def shell_value(R):
        tot = YFrac(Series.zero(q_order=Qo))
        for m in itertools.product(range(-R, R + 1), repeat=f.rank):
            if max((abs(x) for x in m), default=0) != R:
                continue
            for gens, vals, box, sign in data:
                if not gens:
                    tot = tot + Series.monomial(Q(sign), 0, 0)
                    continue
                low = min(sum(a * b for a, b in zip(m, p)) for p, _ in box)
                low += sum(min(0, sum(a * b for a, b in zip(m, g))) for g in gens)
                term = _cone_term(gens, vals, box, m, Qo - low)
                tot = tot + (term if sign > 0 else -term)
        return tot.truncate(Qo).reduce()

    total = YFrac(Series.zero(q_order=Qo))
    quiet = 0
    for R in range(max_radius + 1):
        sv = shell_value(R)
        total = total + sv
        if R > 0 and not sv.num:
            quiet += 1
            if quiet == 2:
                return make_result(total, f.rank, "hat", Qo)
        else:
            quiet = 0
    raise StabilizationError(f"the dual-lattice sum did not stabilize within radius {max_radius}")
