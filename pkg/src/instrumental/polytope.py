"""Exact polytope computations: hulls, projections, membership.

Polytopes appear in two representations:

* `VPolytope`: a list of vertices (rational vectors).
* `HPolytope`: facet inequalities (sense <=) plus affine-hull equalities.

Conversions run through an incremental double-description cone algorithm over
primitive integer vectors; projections through Fourier-Motzkin elimination
with exact-LP redundancy removal after every eliminated variable.  Membership
tests are LP feasibility problems whose answers carry certificates: explicit
convex weights for inside points, a separating inequality (a facet, found by
maximizing the violation over the polar) for outside points.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import CapacityError
from .linprog import LpStatus, solve_lp
from .rationals import integerize, primitive
from .scenario import Correlation, Kind, Scenario, classical_correlations

__all__ = [
    "LinearInequality",
    "HPolytope",
    "VPolytope",
    "MembershipCertificate",
    "canonicalize",
    "canonicalize_equality",
    "facet_enumeration",
    "vertex_enumeration",
    "fourier_motzkin_project",
    "membership",
    "maximize_linear",
    "no_signalling_polytope",
    "classical_vpolytope",
    "h_implies",
    "h_polytopes_equal",
]

_F0 = Fraction(0)
_F1 = Fraction(1)

Equality = tuple[tuple[Fraction, ...], Fraction]


@dataclass(frozen=True)
class LinearInequality:
    """The half-space coeffs . x <= bound."""

    coeffs: tuple[Fraction, ...]
    bound: Fraction

    def violation(self, point: Sequence[Fraction]) -> Fraction:
        """coeffs . point - bound; positive means the inequality is violated."""
        return sum(c * p for c, p in zip(self.coeffs, point)) - self.bound

    def satisfied_by(self, point: Sequence[Fraction]) -> bool:
        return self.violation(point) <= 0


def canonicalize(ineq: LinearInequality) -> LinearInequality:
    """Scale by a positive rational to primitive integers (gcd 1).

    Only positive scales are allowed: flipping the sign would reverse the
    inequality.  Idempotent.  A row that is identically 0 <= 0 carries no
    information and is rejected.
    """
    if all(c == 0 for c in ineq.coeffs) and ineq.bound == 0:
        raise ValueError("cannot canonicalize the zero inequality")
    ints = integerize(tuple(ineq.coeffs) + (ineq.bound,))
    return LinearInequality(tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1]))


def canonicalize_equality(eq: Equality) -> Equality:
    """Primitive integers with the first nonzero coefficient positive."""
    coeffs, rhs = eq
    if all(c == 0 for c in coeffs):
        raise ValueError("cannot canonicalize an equality with zero coefficients")
    ints = list(integerize(tuple(coeffs) + (Fraction(rhs),)))
    lead = next(v for v in ints[:-1] if v != 0)
    if lead < 0:
        ints = [-v for v in ints]
    return tuple(Fraction(v) for v in ints[:-1]), Fraction(ints[-1])


def reduce_modulo(
    ineq: LinearInequality, equalities: Sequence[Equality]
) -> LinearInequality:
    """The canonical representative of an inequality modulo an equality system.

    Facet inequalities of a lower-dimensional polytope are only defined up to
    multiples of the affine-hull equalities.  Zeroing the coefficients on the
    leading column of each (row-reduced) equality picks a unique
    representative, so two inequalities cut the same face iff they reduce to
    the same canonical form.
    """
    coeffs = list(ineq.coeffs)
    bound = ineq.bound
    for e_coeffs, e_rhs in equalities:
        lead = next(j for j, c in enumerate(e_coeffs) if c != 0)
        if coeffs[lead] != 0:
            f = coeffs[lead] / e_coeffs[lead]
            coeffs = [c - f * e for c, e in zip(coeffs, e_coeffs)]
            bound -= f * e_rhs
    return canonicalize(LinearInequality(tuple(coeffs), bound))


@dataclass(frozen=True)
class HPolytope:
    dim: int
    inequalities: tuple[LinearInequality, ...]
    equalities: tuple[Equality, ...] = ()

    def __post_init__(self) -> None:
        for ineq in self.inequalities:
            if len(ineq.coeffs) != self.dim:
                raise ValueError("inequality length does not match dimension")
        for coeffs, _ in self.equalities:
            if len(coeffs) != self.dim:
                raise ValueError("equality length does not match dimension")

    def contains(self, point: Sequence[Fraction]) -> bool:
        point = _as_point(point, self.dim)
        if any(not ineq.satisfied_by(point) for ineq in self.inequalities):
            return False
        return all(
            sum(c * p for c, p in zip(coeffs, point)) == rhs
            for coeffs, rhs in self.equalities
        )

    def affine_dimension(self) -> int:
        return self.dim - _rank([list(c) for c, _ in self.equalities])


@dataclass(frozen=True)
class VPolytope:
    dim: int
    vertices: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        for v in self.vertices:
            if len(v) != self.dim:
                raise ValueError("vertex length does not match dimension")

    @staticmethod
    def from_points(points: Iterable[Sequence]) -> "VPolytope":
        """Deduplicate and sort points lexicographically."""
        seen = set()
        out = []
        dim = None
        for p in points:
            if isinstance(p, Correlation):
                p = p.entries
            t = tuple(Fraction(v) for v in p)
            dim = len(t) if dim is None else dim
            if t not in seen:
                seen.add(t)
                out.append(t)
        if dim is None:
            raise ValueError("no points given")
        out.sort()
        return VPolytope(dim, tuple(out))


@dataclass(frozen=True)
class MembershipCertificate:
    """Verdict of a membership test, with checkable evidence.

    inside: `weights[i]` is the coefficient of `vertices[i]` in an explicit
    convex combination equal to the query.  outside: `separator` holds on
    every vertex and is violated by the query by `margin` > 0.  Extension
    feasibility tests store the extending point in `extension` instead of
    vertex weights.
    """

    inside: bool
    weights: tuple[Fraction, ...] | None = None
    separator: LinearInequality | None = None
    margin: Fraction | None = None
    extension: tuple[Fraction, ...] | None = None


def _as_point(point, dim: int) -> tuple[Fraction, ...]:
    if isinstance(point, Correlation):
        if not point.exact:
            raise TypeError("exact computations need rational entries")
        point = point.entries
    point = tuple(Fraction(v) for v in point)
    if len(point) != dim:
        raise ValueError(f"expected a point of dimension {dim}, got {len(point)}")
    return point


# ---------------------------------------------------------------------------
# exact Gaussian elimination


def _rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns the nonzero rows and pivot columns."""
    rows = [list(r) for r in rows]
    pivots: list[int] = []
    lead = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pr = next((i for i in range(lead, len(rows)) if rows[i][col] != 0), None)
        if pr is None:
            continue
        rows[lead], rows[pr] = rows[pr], rows[lead]
        piv = rows[lead][col]
        if piv != 1:
            rows[lead] = [v / piv for v in rows[lead]]
        for i, row in enumerate(rows):
            if i != lead and row[col] != 0:
                f = row[col]
                rows[i] = [v - f * pv for v, pv in zip(row, rows[lead])]
        pivots.append(col)
        lead += 1
        if lead == len(rows):
            break
    return rows[:lead], pivots


def _rank(rows: list[list[Fraction]]) -> int:
    if not rows:
        return 0
    return len(_rref(rows)[0])


def _null_space(rows: list[list[Fraction]], ncols: int) -> list[tuple[Fraction, ...]]:
    """A basis of {y : rows . y = 0}."""
    if not rows:
        return [
            tuple(_F1 if j == k else _F0 for j in range(ncols)) for k in range(ncols)
        ]
    rref, pivots = _rref(rows)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        vec = [_F0] * ncols
        vec[f] = _F1
        for row, pc in zip(rref, pivots):
            vec[pc] = -row[f]
        basis.append(tuple(vec))
    return basis


# ---------------------------------------------------------------------------
# double description over primitive integer vectors


def _dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _dd_pointed(
    rows: list[tuple[int, ...]], max_rays: int
) -> list[tuple[int, ...]]:
    """Extreme rays of the pointed cone {u : row . u >= 0 for every row}.

    Incremental insertion in the given row order; adjacency of rays is decided
    combinatorially from tight-constraint bitmasks.  Requires rank(rows) equal
    to the ambient dimension (a pointed cone); the caller arranges this.
    """
    r = len(rows[0])
    # Initial simplicial cone from the first r independent rows.
    chosen: list[int] = []
    echelon: list[list[Fraction]] = []
    for idx, row in enumerate(rows):
        vec = [Fraction(v) for v in row]
        for e in echelon:
            lead = next(j for j, v in enumerate(e) if v != 0)
            if vec[lead] != 0:
                f = vec[lead]
                vec = [v - f * ev for v, ev in zip(vec, e)]
        if any(v != 0 for v in vec):
            piv = next(v for v in vec if v != 0)
            echelon.append([v / piv for v in vec])
            chosen.append(idx)
            if len(chosen) == r:
                break
    if len(chosen) < r:
        raise ValueError("cone is not pointed (rank-deficient constraint matrix)")

    inv = _invert([[Fraction(v) for v in rows[i]] for i in chosen])
    rays: list[tuple[int, ...]] = []
    tight: list[int] = []
    for k in range(r):
        ray = primitive(integerize([inv[j][k] for j in range(r)]))
        mask = 0
        for j, idx in enumerate(chosen):
            if j != k:
                mask |= 1 << idx
        rays.append(ray)
        tight.append(mask)

    chosen_set = set(chosen)
    for idx, row in enumerate(rows):
        if idx in chosen_set:
            continue
        dots = [_dot(row, ray) for ray in rays]
        neg = [i for i, dv in enumerate(dots) if dv < 0]
        if not neg:
            for i, dv in enumerate(dots):
                if dv == 0:
                    tight[i] |= 1 << idx
            continue
        pos = [i for i, dv in enumerate(dots) if dv > 0]
        zero = [i for i, dv in enumerate(dots) if dv == 0]
        bit = 1 << idx
        # Ray bitmask per constraint: which current rays are tight on it.
        # The adjacency test ANDs these columns, which runs at word speed
        # instead of scanning the ray list per candidate pair.
        cols: dict[int, int] = {}
        for i, tm in enumerate(tight):
            ibit = 1 << i
            while tm:
                low = tm & -tm
                j = low.bit_length() - 1
                cols[j] = cols.get(j, 0) | ibit
                tm ^= low
        new_rays: list[tuple[int, ...]] = []
        new_tight: list[int] = []
        for p, n in itertools.product(pos, neg):
            common = tight[p] & tight[n]
            if _popcount(common) < r - 2:
                continue
            # p and n are adjacent iff no third ray is tight on their
            # common constraints.
            pn = (1 << p) | (1 << n)
            cand = (1 << len(rays)) - 1
            t = common
            while t and cand & ~pn:
                low = t & -t
                cand &= cols[low.bit_length() - 1]
                t ^= low
            if cand & ~pn:
                continue
            dp, dn = dots[p], dots[n]
            combo = tuple(
                dp * vn - dn * vp for vp, vn in zip(rays[p], rays[n])
            )
            new_rays.append(primitive(combo))
            new_tight.append(common | bit)
        keep_rays = [rays[i] for i in pos] + [rays[i] for i in zero]
        keep_tight = [tight[i] for i in pos] + [tight[i] | bit for i in zero]
        rays = keep_rays + new_rays
        tight = keep_tight + new_tight
        if len(rays) > max_rays:
            raise CapacityError(
                f"double description exceeded {max_rays} intermediate rays"
            )
        if not rays:
            return []
    # Degenerate duplicates cannot arise from adjacent pairs, but stay safe.
    return list(dict.fromkeys(rays))


def _popcount(v: int) -> int:
    return v.bit_count()


def _invert(mat: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(mat)
    aug = [list(row) + [_F1 if i == j else _F0 for j in range(n)] for i, row in enumerate(mat)]
    rref, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in rref]


# ---------------------------------------------------------------------------
# conversions


def facet_enumeration(v: VPolytope, max_rays: int = 10**6) -> HPolytope:
    """Facets and affine hull of the convex hull of the given vertices.

    Vertices are deduplicated and inserted in lexicographic order.  The valid
    inequalities c0 + c . x >= 0 of the hull form a cone with one constraint
    per vertex; its lineality space is the affine hull and its extreme rays
    are the facets.
    """
    vp = VPolytope.from_points(v.vertices)
    d = vp.dim
    hom = [integerize((_F1,) + vert) for vert in vp.vertices]
    frows = [[Fraction(x) for x in row] for row in hom]

    equalities = []
    for y in _null_space(frows, d + 1):
        # y0 + y . x = 0 on the hull, i.e. y[1:] . x = -y0
        equalities.append(canonicalize_equality((tuple(y[1:]), -y[0])))
    equalities = _reduce_equalities(equalities, d)

    basis_rows, _ = _rref(frows)
    q_cols = [integerize(row) for row in basis_rows]
    restricted = [tuple(_dot(w, q) for q in q_cols) for w in hom]
    rays = _dd_pointed(restricted, max_rays)

    facets = []
    for u in rays:
        y = [sum(q[j] * uk for q, uk in zip(q_cols, u)) for j in range(d + 1)]
        coeffs = tuple(Fraction(-c) for c in y[1:])
        bound = Fraction(y[0])
        if all(c == 0 for c in coeffs):
            # The trivial inequality 0 <= b appears only for 0-dimensional
            # hulls, where the affine hull already pins the point.
            continue
        facets.append(
            reduce_modulo(LinearInequality(coeffs, bound), equalities)
        )
    facets = sorted(set(facets), key=lambda f: (f.coeffs, f.bound))
    return HPolytope(d, tuple(facets), tuple(equalities))


def vertex_enumeration(h: HPolytope, max_rays: int = 10**6) -> VPolytope:
    """Vertices of a bounded H-polytope (errors out on unbounded input)."""
    d = h.dim
    eq_rows = [
        [Fraction(-rhs)] + [Fraction(c) for c in coeffs]
        for coeffs, rhs in h.equalities
    ]
    ineq_rows = [tuple([ineq.bound] + [-c for c in ineq.coeffs]) for ineq in h.inequalities]
    ineq_rows.append(tuple([_F1] + [_F0] * d))  # homogenization: t >= 0
    ineq_rows = [integerize(row) for row in ineq_rows]

    subspace = _null_space(eq_rows, d + 1)
    if not subspace:
        return VPolytope(d, ())
    q_cols = [integerize(vec) for vec in subspace]
    restricted = [tuple(_dot(w, q) for q in q_cols) for w in ineq_rows]
    if _rank([[Fraction(v) for v in row] for row in restricted]) < len(q_cols):
        raise ValueError("polytope contains a line; vertex enumeration undefined")
    restricted.sort()
    rays = _dd_pointed(restricted, max_rays)

    verts = []
    for u in rays:
        y = [sum(q[j] * uk for q, uk in zip(q_cols, u)) for j in range(d + 1)]
        t = y[0]
        if t == 0:
            raise ValueError("polytope is unbounded; vertex enumeration undefined")
        if t < 0:
            raise AssertionError("homogenization constraint violated")
        verts.append(tuple(Fraction(c, t) for c in y[1:]))
    if not verts:
        return VPolytope(d, ())
    return VPolytope.from_points(verts)


def _reduce_equalities(eqs: list[Equality], dim: int) -> tuple[Equality, ...]:
    """Independent, canonicalized presentation via row reduction."""
    if not eqs:
        return ()
    aug = [[*coeffs, rhs] for coeffs, rhs in eqs]
    rref, pivots = _rref(aug)
    out = []
    for row in rref:
        coeffs, rhs = row[:dim], row[dim]
        if all(c == 0 for c in coeffs):
            if rhs != 0:
                raise ValueError("inconsistent equality system")
            continue
        out.append(canonicalize_equality((tuple(coeffs), rhs)))
    return tuple(out)


# ---------------------------------------------------------------------------
# Fourier-Motzkin projection


def fourier_motzkin_project(
    h: HPolytope,
    keep: Iterable[int],
    max_rows: int = 10**6,
    prune: bool = True,
) -> HPolytope:
    """Project onto the coordinates in `keep` (ascending original order).

    Variables are eliminated one at a time: through an equality pivot when one
    is available (exact substitution, no row growth), otherwise by combining
    positive and negative rows.  After every elimination, redundant rows are
    removed with exact LPs so intermediate systems stay minimal.
    """
    keep = sorted(set(keep))
    if any(i < 0 or i >= h.dim for i in keep):
        raise ValueError("keep indices out of range")
    ineqs = [(list(q.coeffs), q.bound) for q in h.inequalities]
    eqs = [(list(c), r) for c, r in h.equalities]
    remaining = [i for i in range(h.dim) if i not in keep]

    while remaining:
        var = None
        pivot_eq = None
        for v in remaining:
            pivot_eq = next((e for e in eqs if e[0][v] != 0), None)
            if pivot_eq is not None:
                var = v
                break
        if var is not None:
            eqs.remove(pivot_eq)
            ineqs = [_substitute(row, pivot_eq, var) for row in ineqs]
            eqs = [_substitute(row, pivot_eq, var) for row in eqs]
        else:
            var = min(
                remaining,
                key=lambda v: sum(1 for c, _ in ineqs if c[v] > 0)
                * sum(1 for c, _ in ineqs if c[v] < 0),
            )
            pos = [row for row in ineqs if row[0][var] > 0]
            neg = [row for row in ineqs if row[0][var] < 0]
            zero = [row for row in ineqs if row[0][var] == 0]
            combined = []
            for (cp, bp), (cn, bn) in itertools.product(pos, neg):
                wp, wn = -cn[var], cp[var]
                coeffs = [wp * a + wn * b for a, b in zip(cp, cn)]
                combined.append((coeffs, wp * bp + wn * bn))
            ineqs = zero + combined
        remaining.remove(var)
        ineqs = _tidy_rows(ineqs)
        if len(ineqs) > max_rows:
            raise CapacityError(f"projection exceeded {max_rows} rows")
        if prune:
            ineqs = _prune_redundant(ineqs, eqs)

    kept_eqs = _reduce_equalities(
        [(tuple(c[i] for i in keep), r) for c, r in eqs], len(keep)
    )
    kept_ineqs = [
        reduce_modulo(
            LinearInequality(tuple(c[i] for i in keep), b), kept_eqs
        )
        for c, b in ineqs
    ]
    kept_ineqs = sorted(set(kept_ineqs), key=lambda f: (f.coeffs, f.bound))
    return HPolytope(len(keep), tuple(kept_ineqs), kept_eqs)


def _substitute(row, eq, var):
    coeffs, rhs = row
    e_coeffs, e_rhs = eq
    f = coeffs[var] / e_coeffs[var]
    if f == 0:
        return (list(coeffs), rhs)
    new_coeffs = [c - f * e for c, e in zip(coeffs, e_coeffs)]
    new_coeffs[var] = _F0
    return (new_coeffs, rhs - f * e_rhs)


def _tidy_rows(rows):
    """Canonicalize, deduplicate, drop trivial rows, detect infeasibility."""
    seen = set()
    out = []
    for coeffs, rhs in rows:
        if all(c == 0 for c in coeffs):
            if rhs < 0:
                raise ValueError("projection of an empty polytope")
            continue
        canon = canonicalize(LinearInequality(tuple(coeffs), rhs))
        key = (canon.coeffs, canon.bound)
        if key not in seen:
            seen.add(key)
            out.append((list(canon.coeffs), canon.bound))
    return out


def _prune_redundant(ineqs, eqs):
    rows = list(ineqs)
    idx = 0
    while idx < len(rows):
        coeffs, rhs = rows[idx]
        others = rows[:idx] + rows[idx + 1 :]
        res = solve_lp(
            coeffs,
            ineqs=[(c, b) for c, b in others],
            eqs=[(c, r) for c, r in eqs],
            nonneg=False,
            maximize=True,
        )
        if res.status is LpStatus.OPTIMAL and res.value <= rhs:
            rows.pop(idx)
        else:
            idx += 1
    return rows


# ---------------------------------------------------------------------------
# membership and optimization


def membership(point, polytope: VPolytope) -> MembershipCertificate:
    """Decide whether a point is a convex combination of the vertices.

    Both answers are certified and the certificates are re-checked before
    being returned: convex weights for inside, a separating facet (maximizing
    the violation, found via the polar with an interior-point normalization)
    for outside.
    """
    q = _as_point(point, polytope.dim)
    verts = polytope.vertices
    if not verts:
        raise ValueError("membership against an empty vertex set")
    d = polytope.dim
    eq_rows = [
        ([v[i] for v in verts], q[i]) for i in range(d)
    ]
    eq_rows.append(([_F1] * len(verts), _F1))
    res = solve_lp(
        [_F0] * len(verts), eqs=eq_rows, nonneg=True, maximize=False
    )
    if res.status is LpStatus.OPTIMAL:
        weights = res.x
        assert all(w >= 0 for w in weights) and sum(weights) == 1
        for i in range(d):
            assert sum(w * v[i] for w, v in zip(weights, verts)) == q[i]
        return MembershipCertificate(inside=True, weights=weights)
    sep = _separating_facet(q, verts)
    margin = sep.violation(q)
    assert margin > 0
    assert all(sep.satisfied_by(v) for v in verts)
    return MembershipCertificate(inside=False, separator=sep, margin=margin)


def _separating_facet(
    q: tuple[Fraction, ...], verts: Sequence[tuple[Fraction, ...]]
) -> LinearInequality:
    """A separating hyperplane for q, supporting the hull along a facet.

    First tries the affine hull: if q violates an equality, that equality
    (suitably oriented) already separates.  Otherwise maximize the violation
    g . q - beta over valid inequalities, normalized by g . c - beta = -1 for
    a relative-interior point c and with g restricted to directions of the
    hull; basic optimal solutions of that LP are facets.
    """
    d = len(q)
    n = len(verts)
    centroid = tuple(sum(v[i] for v in verts) / n for i in range(d))
    centered = [[v[i] - centroid[i] for i in range(d)] for v in verts]
    normals = _null_space(centered, d)
    for nvec in normals:
        # nvec . x is constant on the hull
        rhs = sum(nv * c for nv, c in zip(nvec, centroid))
        val = sum(nv * qi for nv, qi in zip(nvec, q))
        if val > rhs:
            return canonicalize(LinearInequality(tuple(nvec), rhs))
        if val < rhs:
            return canonicalize(
                LinearInequality(tuple(-c for c in nvec), -rhs)
            )
    # variables (g, beta)
    objective = list(q) + [Fraction(-1)]
    ineq_rows = [(list(v) + [Fraction(-1)], _F0) for v in verts]
    eq_rows = [(list(centroid) + [Fraction(-1)], Fraction(-1))]
    for nvec in normals:
        eq_rows.append((list(nvec) + [_F0], _F0))
    res = solve_lp(
        objective, ineqs=ineq_rows, eqs=eq_rows, nonneg=False, maximize=True
    )
    if res.status is not LpStatus.OPTIMAL or res.value <= 0:
        raise AssertionError(
            "separation failed although the membership LP was infeasible"
        )
    g, beta = res.x[:-1], res.x[-1]
    return canonicalize(LinearInequality(tuple(g), beta))


def maximize_linear(
    coeffs: Sequence[Fraction],
    over: VPolytope | HPolytope,
    constant: Fraction = _F0,
    argmax: bool = True,
    lex: bool = True,
):
    """Exact maximum of coeffs . x + constant over a polytope.

    Returns (value, maximizer) or (value, None) when `argmax` is False.  Ties
    are broken toward the lexicographically smallest optimizer (for a
    VPolytope the smallest maximizing vertex; for an HPolytope by iterated
    coordinate minimization over the optimal face), so both representations
    of the same polytope yield the same answer.
    """
    coeffs = [Fraction(c) for c in coeffs]
    constant = Fraction(constant)
    if isinstance(over, VPolytope):
        if not over.vertices:
            raise ValueError("maximizing over an empty polytope")
        best = None
        best_v = None
        for v in over.vertices:
            val = sum(c * x for c, x in zip(coeffs, v))
            if best is None or val > best or (val == best and v < best_v):
                best, best_v = val, v
        return best + constant, (best_v if argmax else None)
    res = solve_lp(
        coeffs,
        ineqs=[(list(q.coeffs), q.bound) for q in over.inequalities],
        eqs=[(list(c), r) for c, r in over.equalities],
        nonneg=False,
        maximize=True,
    )
    if res.status is LpStatus.UNBOUNDED:
        raise ValueError("unbounded LP; the H-polytope is missing constraints")
    if res.status is LpStatus.INFEASIBLE:
        raise ValueError("the H-polytope is empty")
    if not argmax:
        return res.value + constant, None
    point = res.x
    if lex:
        eqs = [(list(c), r) for c, r in over.equalities]
        eqs.append((list(coeffs), res.value))
        ineq_rows = [(list(q.coeffs), q.bound) for q in over.inequalities]
        for j in range(over.dim):
            unit = [_F0] * over.dim
            unit[j] = _F1
            sub = solve_lp(
                unit, ineqs=ineq_rows, eqs=eqs, nonneg=False, maximize=False
            )
            assert sub.status is LpStatus.OPTIMAL
            eqs.append((unit, sub.value))
        point = tuple(r for _, r in eqs[len(over.equalities) + 1 :])
    return res.value + constant, point


# ---------------------------------------------------------------------------
# scenario-specific polytopes


@functools.lru_cache(maxsize=None)
def no_signalling_polytope(s: Scenario) -> HPolytope:
    """H-representation of the no-signalling set of a Bell scenario.

    Positivity inequalities plus one normalization equality per context and
    marginal-consistency equalities across contexts, reduced to an
    independent list.
    """
    if s.kind is not Kind.BELL:
        raise ValueError("no-signalling polytopes live in Bell scenarios")
    d = s.dim
    ineqs = []
    for i in range(d):
        coeffs = [_F0] * d
        coeffs[i] = Fraction(-1)
        ineqs.append(LinearInequality(tuple(coeffs), _F0))
    eqs: list[Equality] = []
    for block in s.input_blocks():
        coeffs = [_F0] * d
        for i in block:
            coeffs[i] = _F1
        eqs.append((tuple(coeffs), _F1))
    # Alice's marginal must not depend on y, Bob's not on x.
    for x in range(s.nX):
        for a in range(s.nA):
            for y in range(s.nY - 1):
                coeffs = [_F0] * d
                for b in range(s.nB):
                    coeffs[s.index(x, y, a, b)] += _F1
                    coeffs[s.index(x, y + 1, a, b)] -= _F1
                eqs.append((tuple(coeffs), _F0))
    for y in range(s.nY):
        for b in range(s.nB):
            for x in range(s.nX - 1):
                coeffs = [_F0] * d
                for a in range(s.nA):
                    coeffs[s.index(x, y, a, b)] += _F1
                    coeffs[s.index(x + 1, y, a, b)] -= _F1
                eqs.append((tuple(coeffs), _F0))
    return HPolytope(d, tuple(ineqs), _reduce_equalities(eqs, d))


def classical_vpolytope(s: Scenario, limit: int = 10**7) -> VPolytope:
    """Vertices of the classical (deterministic-strategy) polytope."""
    return VPolytope.from_points(classical_correlations(s, dedup=True, limit=limit))


# ---------------------------------------------------------------------------
# polytope comparison


def h_implies(h: HPolytope, ineq: LinearInequality) -> bool:
    """Whether every point of h satisfies the inequality (exact LP)."""
    value, _ = maximize_linear(ineq.coeffs, h, argmax=False)
    return value <= ineq.bound


def _h_implies_equality(h: HPolytope, eq: Equality) -> bool:
    coeffs, rhs = eq
    hi, _ = maximize_linear(coeffs, h, argmax=False)
    lo, _ = maximize_linear([-c for c in coeffs], h, argmax=False)
    return hi == rhs and -lo == rhs


def h_polytopes_equal(h1: HPolytope, h2: HPolytope) -> bool:
    """Mutual implication of the two H-representations, checked by exact LPs."""
    if h1.dim != h2.dim:
        return False
    return (
        all(h_implies(h1, q) for q in h2.inequalities)
        and all(_h_implies_equality(h1, e) for e in h2.equalities)
        and all(h_implies(h2, q) for q in h1.inequalities)
        and all(_h_implies_equality(h2, e) for e in h1.equalities)
    )
