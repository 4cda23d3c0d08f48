"""Inequality families, Instrumental-to-Bell lifting, and facet classification.

Expressions are rational coefficient vectors over a scenario's correlation
coordinates plus a constant.  Closed-form bounds are kept in an exact symbolic
form (rational plus one square root or one cosine) so comparisons never go
through floats.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .polytope import (
    Equality,
    LinearInequality,
    MembershipCertificate,
    VPolytope,
    _reduce_equalities,
    _separating_facet,
    canonicalize,
    classical_vpolytope,
    maximize_linear,
    no_signalling_polytope,
    reduce_modulo,
)
from .linprog import LpStatus, solve_lp
from .scenario import (
    Correlation,
    Kind,
    Scenario,
    enumerate_deterministic_strategies,
    postselect,
    strategy_to_correlation,
)

__all__ = [
    "LinearExpression",
    "ExactValue",
    "BoundsTriple",
    "SymmetryGroup",
    "Orbit",
    "pearl_expressions",
    "catalog",
    "bounds",
    "lift_to_bell",
    "identity_check",
    "identity_residual_expression",
    "verify_identity",
    "normalization_equalities",
    "relabel_expression",
    "relabel_correlation",
    "symmetry_group",
    "facet_orbit_classify",
    "extension_membership",
    "classical_maximum",
    "gpt_maximum",
    "CATALOG_KINDS",
]

F0 = Fraction(0)
F1 = Fraction(1)


# ---------------------------------------------------------------------------
# linear expressions over correlation coordinates


@dataclass(frozen=True)
class LinearExpression:
    """coeffs . p + constant over the coordinates of one scenario."""

    scenario: Scenario
    coeffs: tuple[Fraction, ...]
    constant: Fraction = F0

    def __post_init__(self) -> None:
        if len(self.coeffs) != self.scenario.dim:
            raise ValueError("coefficient length does not match the scenario")

    @staticmethod
    def zero(s: Scenario) -> "LinearExpression":
        return LinearExpression(s, (F0,) * s.dim)

    @staticmethod
    def term(s: Scenario, coords: Sequence[int], weight=1) -> "LinearExpression":
        coeffs = [F0] * s.dim
        coeffs[s.index(*coords)] = Fraction(weight)
        return LinearExpression(s, tuple(coeffs))

    def evaluate(self, p: Correlation):
        """Exact Fraction on exact tables, float on Born tables."""
        if p.scenario != self.scenario:
            raise ValueError("correlation scenario does not match the expression")
        total = sum(c * v for c, v in zip(self.coeffs, p.entries) if c != 0)
        if p.exact:
            return self.constant + total
        return float(self.constant) + total

    def as_inequality(self, bound) -> LinearInequality:
        """coeffs . p + constant <= bound, with the constant folded in."""
        return LinearInequality(self.coeffs, Fraction(bound) - self.constant)

    def _binary(self, other: "LinearExpression", sign: int) -> "LinearExpression":
        if self.scenario != other.scenario:
            raise ValueError("expressions live over different scenarios")
        return LinearExpression(
            self.scenario,
            tuple(a + sign * b for a, b in zip(self.coeffs, other.coeffs)),
            self.constant + sign * other.constant,
        )

    def __add__(self, other: "LinearExpression") -> "LinearExpression":
        return self._binary(other, 1)

    def __sub__(self, other: "LinearExpression") -> "LinearExpression":
        return self._binary(other, -1)

    def __neg__(self) -> "LinearExpression":
        return self * -1

    def __mul__(self, scale) -> "LinearExpression":
        q = Fraction(scale)
        return LinearExpression(
            self.scenario, tuple(c * q for c in self.coeffs), self.constant * q
        )

    __rmul__ = __mul__

    def shifted(self, offset) -> "LinearExpression":
        return LinearExpression(
            self.scenario, self.coeffs, self.constant + Fraction(offset)
        )

    def __str__(self) -> str:
        parts = []
        for coords, c in zip(self.scenario.coords(), self.coeffs):
            if c == 0:
                continue
            if self.scenario.kind is Kind.BELL:
                x, y, a, b = coords
                name = f"p({a}{b}|{x}{y})"
            else:
                x, a, b = coords
                name = f"p({a}{b}|{x})"
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c}*{name}")
        if self.constant != 0 or not parts:
            parts.append(str(self.constant))
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out


def _sum_terms(s: Scenario, coords_list: Iterable[tuple]) -> LinearExpression:
    coeffs = [F0] * s.dim
    for coords in coords_list:
        coeffs[s.index(*coords)] += F1
    return LinearExpression(s, tuple(coeffs))


def correlator(s: Scenario, x: int, y: int) -> LinearExpression:
    """<A_x B_y> = sum_ab (-1)^(a+b) p(ab|xy); outcome 0 maps to eigenvalue +1."""
    if s.kind is not Kind.BELL:
        raise ValueError("correlators index Bell contexts")
    if s.nA != 2 or s.nB != 2:
        raise ValueError("correlators need binary outcomes")
    coeffs = [F0] * s.dim
    for a in range(2):
        for b in range(2):
            coeffs[s.index(x, y, a, b)] = Fraction((-1) ** (a + b))
    return LinearExpression(s, tuple(coeffs))


# ---------------------------------------------------------------------------
# exact symbolic bound values


def _square_free(n: int) -> tuple[int, int]:
    """n = m^2 * k with k square-free; returns (m, k)."""
    m, k, d = 1, n, 2
    while d * d <= k:
        while k % (d * d) == 0:
            k //= d * d
            m *= d
        d += 1
    return m, k


@dataclass(frozen=True)
class ExactValue:
    """rational + coefficient * R, with R = sqrt(surd) or cos(pi/divisor).

    Normalized at construction: square factors leave the radical, recognizable
    cosines (pi over 1, 2, 3, 4, 6) fold into rational or surd form, and a zero
    coefficient collapses to the plain rational.  Equal values therefore
    compare equal as dataclasses.
    """

    rational: Fraction
    coefficient: Fraction = F0
    surd: int = 1
    divisor: int | None = None

    def __post_init__(self) -> None:
        rational = Fraction(self.rational)
        coefficient = Fraction(self.coefficient)
        surd = self.surd
        divisor = self.divisor
        if divisor is not None:
            if divisor < 1:
                raise ValueError("cosine divisor must be a positive integer")
            folds = {1: (Fraction(-1), 1), 2: (F0, 1), 3: (Fraction(1, 2), 1),
                     4: (Fraction(1, 2), 2), 6: (Fraction(1, 2), 3)}
            if divisor in folds:
                scale, surd = folds[divisor]
                coefficient *= scale
                divisor = None
        if divisor is None:
            if surd < 0:
                raise ValueError("negative radicand")
            m, k = _square_free(surd)
            coefficient *= m
            surd = k
            if surd == 1 or surd == 0 or coefficient == 0:
                if surd == 1:
                    rational += coefficient
                coefficient = F0
                surd = 1
        elif coefficient == 0:
            divisor = None
            surd = 1
        object.__setattr__(self, "rational", rational)
        object.__setattr__(self, "coefficient", coefficient)
        object.__setattr__(self, "surd", surd)
        object.__setattr__(self, "divisor", divisor)

    @staticmethod
    def of(q) -> "ExactValue":
        return ExactValue(Fraction(q))

    @staticmethod
    def root(radicand, coefficient=1, rational=0) -> "ExactValue":
        """rational + coefficient * sqrt(radicand), radicand a nonneg rational."""
        r = Fraction(radicand)
        if r < 0:
            raise ValueError("negative radicand")
        # sqrt(p/q) = sqrt(p*q)/q
        return ExactValue(
            Fraction(rational),
            Fraction(coefficient) / r.denominator,
            r.numerator * r.denominator,
        )

    @staticmethod
    def cosine(divisor: int, coefficient=1, rational=0) -> "ExactValue":
        """rational + coefficient * cos(pi/divisor)."""
        return ExactValue(
            Fraction(rational), Fraction(coefficient), 1, divisor
        )

    @property
    def is_rational(self) -> bool:
        return self.coefficient == 0

    def __float__(self) -> float:
        if self.coefficient == 0:
            return float(self.rational)
        if self.divisor is not None:
            radical = math.cos(math.pi / self.divisor)
        else:
            radical = math.sqrt(self.surd)
        return float(self.rational) + float(self.coefficient) * radical

    def __add__(self, q) -> "ExactValue":
        return ExactValue(
            self.rational + Fraction(q), self.coefficient, self.surd, self.divisor
        )

    __radd__ = __add__

    def __mul__(self, q) -> "ExactValue":
        q = Fraction(q)
        return ExactValue(
            self.rational * q, self.coefficient * q, self.surd, self.divisor
        )

    __rmul__ = __mul__

    def __str__(self) -> str:
        if self.coefficient == 0:
            return str(self.rational)
        radical = (
            f"cos(pi/{self.divisor})" if self.divisor is not None
            else f"sqrt({self.surd})"
        )
        if self.coefficient == 1:
            tail = radical
        elif self.coefficient == -1:
            tail = f"-{radical}"
        else:
            tail = f"({self.coefficient})*{radical}"
        if self.rational == 0:
            return tail
        sign = "-" if tail.startswith("-") else "+"
        return f"{self.rational} {sign} {tail.lstrip('-')}"


@dataclass(frozen=True)
class BoundsTriple:
    """Tight classical / quantum / GPT values of one expression."""

    classical: ExactValue
    quantum: ExactValue
    gpt: ExactValue

    def __post_init__(self) -> None:
        c, q, g = float(self.classical), float(self.quantum), float(self.gpt)
        if not (c <= q + 1e-12 and q <= g + 1e-12):
            raise ValueError("bounds must be ordered classical <= quantum <= gpt")


# ---------------------------------------------------------------------------
# the inequality catalog


CATALOG_KINDS = ("bonet", "tilted", "chained", "chsh", "tilted_chsh", "chained_bell")


def _check_params(kind: str, alpha, n) -> tuple[Fraction | None, int | None]:
    if kind not in CATALOG_KINDS:
        raise ValueError(f"unknown expression kind {kind!r}")
    if kind in ("tilted", "tilted_chsh"):
        if alpha is None:
            raise ValueError(f"{kind} needs a weight alpha")
        alpha = Fraction(alpha)
        if alpha < 1:
            raise ValueError("the weight alpha must be >= 1")
        return alpha, None
    if kind in ("chained", "chained_bell"):
        if n is None:
            raise ValueError(f"{kind} needs a chain length n")
        n = int(n)
        if n < 2:
            raise ValueError("the chain length must be >= 2")
        return None, n
    if alpha is not None or n is not None:
        raise ValueError(f"{kind} takes no parameters")
    return None, None


def catalog(kind: str, *, alpha=None, n=None) -> LinearExpression:
    """Coefficient vector of a named expression.

    Instrumental families: bonet (three inputs), tilted (weight alpha >= 1,
    equal to bonet at alpha 1), chained (chain length n, wiring y = (x-a) mod
    n).  Bell families: chsh, tilted_chsh, chained_bell, written through the
    correlator expansion.
    """
    alpha, n = _check_params(kind, alpha, n)
    if kind == "bonet":
        return catalog("tilted", alpha=1)
    if kind == "tilted":
        s = Scenario.instrumental(3)
        a_is_0 = _sum_terms(s, [(0, 0, b) for b in range(2)]) + _sum_terms(
            s, [(1, 0, b) for b in range(2)]
        )
        e = (1 - alpha) / 2 * a_is_0
        e = e + alpha * _sum_terms(s, [(0, 0, 0)])
        e = e + _sum_terms(s, [(0, 1, 1)])
        e = e + alpha * _sum_terms(s, [(1, 0, 0)])
        e = e + _sum_terms(s, [(1, 1, 0)])
        e = e + alpha * _sum_terms(s, [(2, 0, 1)])
        return e
    if kind == "chained":
        s = Scenario.chained(n)
        e = _sum_terms(s, [(j, v, v) for j in range(1, n) for v in range(2)])
        e = e + _sum_terms(s, [(0, a, 0) for a in range(2)])
        e = e + _sum_terms(s, [(n, 1, 1)])
        return e
    if kind == "chsh":
        return catalog("tilted_chsh", alpha=1)
    if kind == "tilted_chsh":
        s = Scenario.bell(2, 2)
        return (
            alpha * correlator(s, 0, 0)
            + correlator(s, 0, 1)
            + alpha * correlator(s, 1, 0)
            - correlator(s, 1, 1)
        )
    # chained_bell
    s = Scenario.bell(n, n)
    e = correlator(s, 0, 0) - correlator(s, 0, n - 1)
    for j in range(1, n):
        e = e + correlator(s, j, j) + correlator(s, j, j - 1)
    return e


def bounds(kind: str, *, alpha=None, n=None) -> BoundsTriple:
    """Closed-form tight values for a catalog expression.

    The quantum entries for the Instrumental families follow from the lifting
    identities: a quarter of the Bell quantum value plus the constant shift,
    with the leftover coordinate sent to zero by the dummy-input construction.
    """
    alpha, n = _check_params(kind, alpha, n)
    if kind == "bonet":
        return bounds("tilted", alpha=1)
    if kind == "tilted":
        return BoundsTriple(
            ExactValue.of(1 + alpha),
            ExactValue.root(alpha * alpha + 1, Fraction(1, 2), (2 + alpha) / 2),
            ExactValue.of(Fraction(3, 2) + alpha),
        )
    if kind == "chained":
        return BoundsTriple(
            ExactValue.of(n),
            ExactValue.cosine(2 * n, Fraction(n, 2), Fraction(n + 1, 2)),
            ExactValue.of(Fraction(2 * n + 1, 2)),
        )
    if kind == "chsh":
        return bounds("tilted_chsh", alpha=1)
    if kind == "tilted_chsh":
        return BoundsTriple(
            ExactValue.of(2 * alpha),
            ExactValue.root(alpha * alpha + 1, 2),
            ExactValue.of(2 + 2 * alpha),
        )
    # chained_bell
    return BoundsTriple(
        ExactValue.of(2 * n - 2),
        ExactValue.cosine(2 * n, 2 * n),
        ExactValue.of(2 * n),
    )


def pearl_expressions(s: Scenario) -> list[LinearExpression]:
    """sum_b p(a, b | x_b) for every a and non-constant choice function b -> x.

    Each is bounded by 1 on every post-selected no-signalling box: the b-th
    term is at most Bob's marginal of b on input a, and those marginals sum to
    one.  Constant choice functions reduce to normalization and are omitted.
    Only the plain wiring y = a admits this argument, so other wirings are
    rejected.
    """
    if s.kind is not Kind.INSTRUMENTAL:
        raise ValueError("these expressions need the plain wiring y = a")
    out = []
    for a in range(s.nA):
        for choice in itertools.product(range(s.nX), repeat=s.nB):
            if all(x == choice[0] for x in choice):
                continue
            out.append(_sum_terms(s, [(x, a, b) for b, x in enumerate(choice)]))
    return out


# ---------------------------------------------------------------------------
# lifting and the Bell-side identities


def lift_to_bell(e: LinearExpression) -> LinearExpression:
    """Rewrite over the parent Bell scenario via p(ab|x) -> p(ab|x, y=wire(a,x)).

    Evaluation commutes with post-selection: lift(e)(q) = e(postselect(q)).
    """
    s = e.scenario
    if s.kind is Kind.BELL:
        raise ValueError("the expression is already over a Bell scenario")
    bell = Scenario.bell(s.nX, s.nY, s.nA, s.nB)
    coeffs = [F0] * bell.dim
    for (x, a, b), c in zip(s.coords(), e.coeffs):
        coeffs[bell.index(x, s.wire(a, x), a, b)] += c
    return LinearExpression(bell, tuple(coeffs), e.constant)


def _embed(e: LinearExpression, target: Scenario) -> LinearExpression:
    """The same Bell expression viewed inside a larger Bell scenario."""
    coeffs = [F0] * target.dim
    for coords, c in zip(e.scenario.coords(), e.coeffs):
        coeffs[target.index(*coords)] += c
    return LinearExpression(target, tuple(coeffs), e.constant)


def _identity_rhs(kind: str, alpha, n) -> LinearExpression:
    """The Bell-side closed form equal to the lifted expression on every
    no-signalling box."""
    if kind in ("bonet", "tilted"):
        alpha = F1 if kind == "bonet" else alpha
        bell = Scenario.bell(3, 2)
        chsh = _embed(catalog("tilted_chsh", alpha=alpha), bell)
        e = Fraction(1, 4) * chsh - alpha * LinearExpression.term(
            bell, (2, 0, 1, 1)
        )
        return e.shifted(1 + alpha / 2)
    if kind == "chained":
        bell = Scenario.bell(n + 1, n)
        ch = _embed(catalog("chained_bell", n=n), bell)
        e = Fraction(1, 4) * ch - LinearExpression.term(bell, (n, n - 1, 0, 1))
        return e.shifted(Fraction(n + 1, 2))
    raise ValueError(f"no lifting identity for kind {kind!r}")


@functools.lru_cache(maxsize=None)
def identity_residual_expression(kind: str, *, alpha=None, n=None) -> LinearExpression:
    """lift(catalog(kind)) minus its Bell-side closed form, as one expression."""
    alpha, n = _check_params(kind, alpha, n)
    lifted = lift_to_bell(catalog(kind, alpha=alpha, n=n))
    return lifted - _identity_rhs(kind, alpha, n)


def identity_check(kind: str, p: Correlation, *, alpha=None, n=None) -> Fraction:
    """Exact residual of the lifting identity on one no-signalling box.

    Zero for every no-signalling p; the identity consumes the normalization
    and marginal-consistency equalities, so a signalling input is rejected.
    """
    residual = identity_residual_expression(kind, alpha=alpha, n=n)
    if p.scenario != residual.scenario:
        raise ValueError("correlation scenario does not match the identity")
    if not p.exact:
        raise TypeError("exact residuals need rational entries")
    ns = no_signalling_polytope(p.scenario)
    for coeffs, rhs in ns.equalities:
        if sum(c * v for c, v in zip(coeffs, p.entries)) != rhs:
            raise ValueError("the identity holds only for no-signalling boxes")
    return residual.evaluate(p)


def verify_identity(kind: str, *, alpha=None, n=None) -> bool:
    """Symbolic proof of the lifting identity: the residual expression reduces
    to zero modulo the no-signalling equality system."""
    residual = identity_residual_expression(kind, alpha=alpha, n=n)
    ns = no_signalling_polytope(residual.scenario)
    coeffs = list(residual.coeffs)
    constant = residual.constant
    for e_coeffs, e_rhs in ns.equalities:
        lead = next(j for j, c in enumerate(e_coeffs) if c != 0)
        if coeffs[lead] != 0:
            f = coeffs[lead] / e_coeffs[lead]
            coeffs = [c - f * e for c, e in zip(coeffs, e_coeffs)]
            constant += f * e_rhs
    return all(c == 0 for c in coeffs) and constant == 0


# ---------------------------------------------------------------------------
# relabelling symmetry


def normalization_equalities(s: Scenario) -> tuple[Equality, ...]:
    """One probability-sum equality per input context, row-reduced."""
    eqs = []
    for block in s.input_blocks():
        coeffs = [F0] * s.dim
        for i in block:
            coeffs[i] = F1
        eqs.append((tuple(coeffs), F1))
    return _reduce_equalities(eqs, s.dim)


def _relabelling_map(
    source: Scenario,
    target: Scenario,
    x_perm: Sequence[int],
    a_perms: Sequence[Sequence[int]],
    b_perms: Sequence[Sequence[int]],
) -> tuple[int, ...]:
    """Index permutation for (x, a, b) -> (x_perm[x], a_perms[x][a], b_perms[y][b])
    with y the source wire value; source and target must have equal shapes."""
    if (source.nX, source.nA, source.nB) != (target.nX, target.nA, target.nB):
        raise ValueError("relabelling requires matching cardinalities")
    if sorted(x_perm) != list(range(source.nX)):
        raise ValueError("x relabelling is not a permutation")
    if len(a_perms) != source.nX or any(
        sorted(p) != list(range(source.nA)) for p in a_perms
    ):
        raise ValueError("per-input a relabellings are not permutations")
    if len(b_perms) != source.nY or any(
        sorted(p) != list(range(source.nB)) for p in b_perms
    ):
        raise ValueError("per-wire b relabellings are not permutations")
    out = [0] * source.dim
    for x in range(source.nX):
        for a in range(source.nA):
            y = source.wire(a, x)
            for b in range(source.nB):
                out[source.index(x, a, b)] = target.index(
                    x_perm[x], a_perms[x][a], b_perms[y][b]
                )
    return tuple(out)


def relabel_expression(
    e: LinearExpression,
    target: Scenario,
    x_perm: Sequence[int],
    a_perms: Sequence[Sequence[int]],
    b_perms: Sequence[Sequence[int]],
) -> LinearExpression:
    perm = _relabelling_map(e.scenario, target, x_perm, a_perms, b_perms)
    coeffs = [F0] * target.dim
    for i, c in enumerate(e.coeffs):
        coeffs[perm[i]] = c
    return LinearExpression(target, tuple(coeffs), e.constant)


def relabel_correlation(
    p: Correlation,
    target: Scenario,
    x_perm: Sequence[int],
    a_perms: Sequence[Sequence[int]],
    b_perms: Sequence[Sequence[int]],
) -> Correlation:
    perm = _relabelling_map(p.scenario, target, x_perm, a_perms, b_perms)
    entries = [p.entries[0]] * target.dim
    for i, v in enumerate(p.entries):
        entries[perm[i]] = v
    return Correlation(target, tuple(entries))


@dataclass(frozen=True)
class SymmetryGroup:
    """Generators of the scenario-preserving relabellings, as coordinate
    permutations.  For the plain wiring these are input permutations, global
    output relabellings of a (the b-blocks follow through the wire), and
    b-relabellings done separately for each wire value."""

    scenario: Scenario
    generators: tuple[tuple[int, ...], ...]


def symmetry_group(s: Scenario) -> SymmetryGroup:
    if s.kind is not Kind.INSTRUMENTAL:
        raise ValueError("relabelling generators are defined for the plain wiring")
    identity_a = tuple(range(s.nA))
    identity_b = tuple(range(s.nB))
    gens = []

    def add(x_perm, a_perms, b_perms):
        gens.append(_relabelling_map(s, s, x_perm, a_perms, b_perms))

    for i in range(s.nX - 1):
        x_perm = list(range(s.nX))
        x_perm[i], x_perm[i + 1] = x_perm[i + 1], x_perm[i]
        add(x_perm, [identity_a] * s.nX, [identity_b] * s.nY)
    for i in range(s.nA - 1):
        a_perm = list(range(s.nA))
        a_perm[i], a_perm[i + 1] = a_perm[i + 1], a_perm[i]
        # a must be relabelled globally: a per-input relabelling would give b
        # inconsistent views of its own wire input.
        add(tuple(range(s.nX)), [a_perm] * s.nX, [identity_b] * s.nY)
    for y in range(s.nY):
        for i in range(s.nB - 1):
            b_perm = list(range(s.nB))
            b_perm[i], b_perm[i + 1] = b_perm[i + 1], b_perm[i]
            b_perms = [identity_b] * s.nY
            b_perms[y] = tuple(b_perm)
            add(tuple(range(s.nX)), [identity_a] * s.nX, b_perms)
    return SymmetryGroup(s, tuple(gens))


@dataclass(frozen=True)
class Orbit:
    tag: str
    representative: LinearInequality
    members: tuple[LinearInequality, ...]


def _permute_inequality(
    q: LinearInequality, perm: tuple[int, ...], eqs: Sequence[Equality]
) -> LinearInequality:
    coeffs = [F0] * len(q.coeffs)
    for i, c in enumerate(q.coeffs):
        coeffs[perm[i]] = c
    return reduce_modulo(LinearInequality(tuple(coeffs), q.bound), eqs)


def facet_orbit_classify(
    facets: Sequence[LinearInequality], group: SymmetryGroup
) -> tuple[Orbit, ...]:
    """Partition facets into relabelling orbits and tag each one.

    Tags: positivity (a single coordinate bounded below), pearl (choice-sum
    expressions), bonet (the three-input representative), unknown.  The
    representative is the lexicographically smallest member.  Facets must be
    closed under the group, which holds for any group-invariant polytope.
    """
    s = group.scenario
    eqs = normalization_equalities(s)
    seeds: dict[LinearInequality, str] = {}
    for i in range(s.dim):
        coeffs = [F0] * s.dim
        coeffs[i] = Fraction(-1)
        seeds.setdefault(
            reduce_modulo(LinearInequality(tuple(coeffs), F0), eqs), "positivity"
        )
    if s.kind is Kind.INSTRUMENTAL:
        for e in pearl_expressions(s):
            seeds.setdefault(reduce_modulo(e.as_inequality(1), eqs), "pearl")
        if s.nX == 3 and s.nA == 2 and s.nB == 2:
            seeds.setdefault(
                reduce_modulo(catalog("bonet").as_inequality(2), eqs), "bonet"
            )
    pool = {reduce_modulo(q, eqs) for q in facets}
    orbits = []
    remaining = set(pool)
    while remaining:
        seed = min(remaining, key=lambda q: (q.coeffs, q.bound))
        orbit = {seed}
        frontier = [seed]
        while frontier:
            cur = frontier.pop()
            for perm in group.generators:
                img = _permute_inequality(cur, perm, eqs)
                if img not in orbit:
                    orbit.add(img)
                    frontier.append(img)
        if not orbit <= pool:
            raise AssertionError(
                "orbit escapes the facet list; input not group-closed"
            )
        tags = {seeds[q] for q in orbit if q in seeds}
        if len(tags) > 1:
            raise AssertionError("one orbit matched two different families")
        members = tuple(sorted(orbit, key=lambda q: (q.coeffs, q.bound)))
        orbits.append(Orbit(tags.pop() if tags else "unknown", members[0], members))
        remaining -= orbit
    orbits.sort(key=lambda o: (o.representative.coeffs, o.representative.bound))
    return tuple(orbits)


# ---------------------------------------------------------------------------
# bound computation and extension membership


def classical_maximum(e: LinearExpression, limit: int = 10**7):
    """Exact maximum over the deterministic-strategy polytope, with the
    lexicographically smallest maximizing vertex."""
    v = classical_vpolytope(e.scenario, limit=limit)
    return maximize_linear(e.coeffs, v, constant=e.constant)


def _ns_standard_form(bell: Scenario) -> list[tuple[list[Fraction], Fraction]]:
    ns = no_signalling_polytope(bell)
    return [(list(c), r) for c, r in ns.equalities]


def gpt_maximum(e: LinearExpression):
    """Exact maximum over post-selections of no-signalling boxes.

    Instrumental expressions are lifted first; the maximum over the projected
    set equals the maximum of the lift over the no-signalling polytope because
    post-selection is onto.  Returns (value, witness Bell box).
    """
    if e.scenario.kind is Kind.BELL:
        lifted, bell = e, e.scenario
    else:
        lifted = lift_to_bell(e)
        bell = lifted.scenario
    res = solve_lp(
        list(lifted.coeffs),
        eqs=_ns_standard_form(bell),
        nonneg=True,
        maximize=True,
    )
    if res.status is not LpStatus.OPTIMAL:
        raise AssertionError("the no-signalling polytope is compact and nonempty")
    return res.value + lifted.constant, Correlation(bell, tuple(res.x))


def extension_membership(p: Correlation, theory: str) -> MembershipCertificate:
    """Can p be extended to a Bell box of the given theory?

    theory "classical": weights over Bell deterministic strategies whose
    post-selection mixes to p (the weights certify inside; a separating facet
    of the projected polytope certifies outside).  theory "nosignalling": an
    exact LP over Bell boxes with the wired coordinates pinned to p; inside
    returns the extension, outside a valid inequality separating p from every
    post-selected no-signalling box.
    """
    s = p.scenario
    if s.kind is Kind.BELL:
        raise ValueError("extension tests start from an Instrumental table")
    if not p.exact:
        raise TypeError("exact membership needs rational entries")
    bell = Scenario.bell(s.nX, s.nY, s.nA, s.nB)
    if theory == "classical":
        columns = [
            postselect(strategy_to_correlation(d), s).entries
            for d in enumerate_deterministic_strategies(bell)
        ]
        eq_rows = [
            ([col[i] for col in columns], p.entries[i]) for i in range(s.dim)
        ]
        eq_rows.append(([F1] * len(columns), F1))
        res = solve_lp(
            [F0] * len(columns), eqs=eq_rows, nonneg=True, maximize=False
        )
        if res.status is LpStatus.OPTIMAL:
            mix = [F0] * s.dim
            for w, col in zip(res.x, columns):
                for i in range(s.dim):
                    mix[i] += w * col[i]
            assert tuple(mix) == p.entries
            return MembershipCertificate(inside=True, weights=res.x)
        verts = VPolytope.from_points(columns).vertices
        sep = _separating_facet(p.entries, verts)
        margin = sep.violation(p.entries)
        assert margin > 0 and all(sep.satisfied_by(v) for v in verts)
        return MembershipCertificate(inside=False, separator=sep, margin=margin)
    if theory != "nosignalling":
        raise ValueError("theory must be 'classical' or 'nosignalling'")
    eq_rows = _ns_standard_form(bell)
    pin_rows = []
    for (x, a, b), v in zip(s.coords(), p.entries):
        coeffs = [F0] * bell.dim
        coeffs[bell.index(x, s.wire(a, x), a, b)] = F1
        pin_rows.append((coeffs, v))
    res = solve_lp(
        [F0] * bell.dim,
        eqs=eq_rows + pin_rows,
        nonneg=True,
        maximize=False,
    )
    if res.status is LpStatus.OPTIMAL:
        return MembershipCertificate(
            inside=True, extension=tuple(res.x)
        )
    # Farkas multipliers of the pinned rows give a functional whose
    # no-signalling maximum certifies the separation.
    assert res.farkas is not None
    mult = res.farkas[len(eq_rows):]
    coeffs = [F0] * s.dim
    for i, m in enumerate(mult):
        coeffs[i] = m
    bound, _ = gpt_maximum(LinearExpression(s, tuple(coeffs)))
    sep = canonicalize(LinearInequality(tuple(coeffs), bound))
    margin = sep.violation(p.entries)
    assert margin > 0
    return MembershipCertificate(inside=False, separator=sep, margin=margin)
