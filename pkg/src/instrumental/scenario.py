"""Causal scenarios and their correlations.

Three scenario kinds are supported:

* Bell: two parties with free inputs x, y and outputs a, b; a correlation is
  the table p(ab|xy).
* Instrumental: Bob's input is wired to Alice's output (y = a); a correlation
  is the table p(ab|x).
* f-Instrumental: the wire carries y = f(a, x) for an explicit table f; the
  correlation is again p(ab|x).

Tables are flattened into coordinate vectors with the fixed index order
``((x*nY + y)*nA + a)*nB + b`` for Bell and ``(x*nA + a)*nB + b`` for the
instrumental kinds.  Entries are `Fraction` (exact) or `float` (quantum
output); the two are never mixed inside one table.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError

__all__ = [
    "Kind",
    "Scenario",
    "Correlation",
    "DeterministicStrategy",
    "ValidationReport",
    "enumerate_deterministic_strategies",
    "strategy_to_correlation",
    "classical_correlations",
    "postselect",
    "dummy_input_extension",
    "append_dummy_input",
    "validate",
    "max_signalling_residual",
    "mix_correlations",
    "random_mixture",
    "pr_box",
    "uniform_box",
]

_F0 = Fraction(0)
_F1 = Fraction(1)


class Kind(Enum):
    BELL = "bell"
    INSTRUMENTAL = "instrumental"
    F_INSTRUMENTAL = "f_instrumental"


@dataclass(frozen=True)
class Scenario:
    """Cardinalities (and, for f-Instrumental, the wiring table) of a scenario.

    ``wiring[a][x]`` is the input Bob receives when Alice saw x and output a.
    It is stored explicitly even for wirings with a closed form, so that all
    downstream code treats the wire uniformly.
    """

    kind: Kind
    nX: int
    nY: int
    nA: int
    nB: int
    wiring: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self) -> None:
        if self.nX < 1 or self.nY < 1:
            raise ValueError("input cardinalities must be >= 1")
        if self.nA < 2 or self.nB < 2:
            raise ValueError("output cardinalities must be >= 2")
        if self.kind is Kind.INSTRUMENTAL and self.nY != self.nA:
            raise ValueError("instrumental scenario requires nY == nA")
        if self.kind is Kind.F_INSTRUMENTAL:
            w = self.wiring
            if w is None or len(w) != self.nA or any(len(row) != self.nX for row in w):
                raise ValueError("wiring must be an nA x nX table")
            if any(y < 0 or y >= self.nY for row in w for y in row):
                raise ValueError("wiring entries must lie in range(nY)")
        elif self.wiring is not None:
            raise ValueError("wiring is only meaningful for f-instrumental scenarios")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def bell(nX: int, nY: int, nA: int = 2, nB: int = 2) -> "Scenario":
        return Scenario(Kind.BELL, nX, nY, nA, nB)

    @staticmethod
    def instrumental(nX: int, nA: int = 2, nB: int = 2) -> "Scenario":
        return Scenario(Kind.INSTRUMENTAL, nX, nA, nA, nB)

    @staticmethod
    def f_instrumental(
        nX: int, nY: int, nA: int, nB: int, wiring: Sequence[Sequence[int]]
    ) -> "Scenario":
        table = tuple(tuple(row) for row in wiring)
        return Scenario(Kind.F_INSTRUMENTAL, nX, nY, nA, nB, table)

    @staticmethod
    def chained(n: int) -> "Scenario":
        """The chained wiring y = (x - a) mod n with inputs x in 0..n."""
        if n < 2:
            raise ValueError("chained scenarios need n >= 2")
        wiring = tuple(tuple((x - a) % n for x in range(n + 1)) for a in range(2))
        return Scenario(Kind.F_INSTRUMENTAL, n + 1, n, 2, 2, wiring)

    # -- geometry ----------------------------------------------------------

    @property
    def dim(self) -> int:
        if self.kind is Kind.BELL:
            return self.nX * self.nY * self.nA * self.nB
        return self.nX * self.nA * self.nB

    def wire(self, a: int, x: int) -> int:
        """Bob's input given Alice's output a at input x."""
        if self.kind is Kind.INSTRUMENTAL:
            return a
        if self.kind is Kind.F_INSTRUMENTAL:
            return self.wiring[a][x]  # type: ignore[index]
        raise ValueError("Bell scenarios have a free input, not a wire")

    def index(self, *coords: int) -> int:
        """Flat coordinate index of (x, y, a, b) or (x, a, b)."""
        if self.kind is Kind.BELL:
            x, y, a, b = coords
            self._check(x, self.nX, "x"), self._check(y, self.nY, "y")
            self._check(a, self.nA, "a"), self._check(b, self.nB, "b")
            return ((x * self.nY + y) * self.nA + a) * self.nB + b
        x, a, b = coords
        self._check(x, self.nX, "x")
        self._check(a, self.nA, "a"), self._check(b, self.nB, "b")
        return (x * self.nA + a) * self.nB + b

    @staticmethod
    def _check(v: int, n: int, name: str) -> None:
        if not 0 <= v < n:
            raise IndexError(f"{name}={v} out of range({n})")

    def coords(self) -> Iterator[tuple[int, ...]]:
        """All coordinate tuples in flat index order."""
        if self.kind is Kind.BELL:
            return itertools.product(
                range(self.nX), range(self.nY), range(self.nA), range(self.nB)
            )
        return itertools.product(range(self.nX), range(self.nA), range(self.nB))

    def input_blocks(self) -> list[list[int]]:
        """Coordinate indices grouped by input context (one block per x or xy)."""
        blocks: list[list[int]] = []
        if self.kind is Kind.BELL:
            for x in range(self.nX):
                for y in range(self.nY):
                    blocks.append(
                        [
                            self.index(x, y, a, b)
                            for a in range(self.nA)
                            for b in range(self.nB)
                        ]
                    )
        else:
            for x in range(self.nX):
                blocks.append(
                    [
                        self.index(x, a, b)
                        for a in range(self.nA)
                        for b in range(self.nB)
                    ]
                )
        return blocks


@dataclass(frozen=True)
class Correlation:
    """A flattened probability table over a scenario."""

    scenario: Scenario
    entries: tuple

    def __post_init__(self) -> None:
        if len(self.entries) != self.scenario.dim:
            raise ValueError(
                f"expected {self.scenario.dim} entries, got {len(self.entries)}"
            )
        kinds = {type(e) for e in self.entries}
        if kinds <= {Fraction, int}:
            object.__setattr__(
                self, "entries", tuple(Fraction(e) for e in self.entries)
            )
        elif kinds <= {float}:
            pass
        else:
            raise TypeError("entries must be all rational or all float")

    @property
    def exact(self) -> bool:
        return not self.entries or isinstance(self.entries[0], Fraction)

    def __getitem__(self, coords) -> Fraction | float:
        if isinstance(coords, tuple):
            return self.entries[self.scenario.index(*coords)]
        return self.entries[coords]


@dataclass(frozen=True)
class DeterministicStrategy:
    """A pair of response functions.

    ``alpha[x]`` is Alice's output.  ``beta`` is indexed by Bob's input: y for
    Bell and f-Instrumental, a for Instrumental.
    """

    scenario: Scenario
    alpha: tuple[int, ...]
    beta: tuple[int, ...]

    def __post_init__(self) -> None:
        s = self.scenario
        if len(self.alpha) != s.nX:
            raise ValueError("alpha must assign an output to every x")
        ny = s.nA if s.kind is Kind.INSTRUMENTAL else s.nY
        if len(self.beta) != ny:
            raise ValueError("beta must assign an output to every wire value")
        if any(not 0 <= a < s.nA for a in self.alpha):
            raise ValueError("alpha values out of range")
        if any(not 0 <= b < s.nB for b in self.beta):
            raise ValueError("beta values out of range")


def enumerate_deterministic_strategies(
    s: Scenario, limit: int = 10**7
) -> list[DeterministicStrategy]:
    """All deterministic strategies in lexicographic (alpha, beta) order.

    Raises CapacityError before iterating when the count exceeds `limit`.
    """
    ny = s.nA if s.kind is Kind.INSTRUMENTAL else s.nY
    count = s.nA**s.nX * s.nB**ny
    if count > limit:
        raise CapacityError(
            f"{count} deterministic strategies exceed the limit of {limit}"
        )
    out = []
    for alpha in itertools.product(range(s.nA), repeat=s.nX):
        for beta in itertools.product(range(s.nB), repeat=ny):
            out.append(DeterministicStrategy(s, alpha, beta))
    return out


def strategy_to_correlation(d: DeterministicStrategy) -> Correlation:
    """The 0/1 table induced by a deterministic strategy."""
    s = d.scenario
    entries = [_F0] * s.dim
    if s.kind is Kind.BELL:
        for x in range(s.nX):
            for y in range(s.nY):
                entries[s.index(x, y, d.alpha[x], d.beta[y])] = _F1
    else:
        for x in range(s.nX):
            a = d.alpha[x]
            b = d.beta[a] if s.kind is Kind.INSTRUMENTAL else d.beta[s.wire(a, x)]
            entries[s.index(x, a, b)] = _F1
    return Correlation(s, tuple(entries))


def classical_correlations(
    s: Scenario, dedup: bool = True, limit: int = 10**7
) -> list[Correlation]:
    """Correlations of all deterministic strategies.

    Distinct strategies can induce the same table (an unreachable wire value
    makes part of beta irrelevant); with `dedup` those duplicates are removed,
    keeping first occurrences in enumeration order.
    """
    out: list[Correlation] = []
    seen: set[tuple] = set()
    for d in enumerate_deterministic_strategies(s, limit):
        c = strategy_to_correlation(d)
        if dedup:
            if c.entries in seen:
                continue
            seen.add(c.entries)
        out.append(c)
    return out


def postselect(p: Correlation, target: Scenario) -> Correlation:
    """Restrict a Bell correlation to the slice where Bob's input obeys the wire.

    The result is the instrumental table q(ab|x) = p(ab|x, y=wire(a, x)).  For
    no-signalling p this is a normalized correlation; for signalling p the
    blocks may fail to sum to one, which is reported as an error.
    """
    s = p.scenario
    if s.kind is not Kind.BELL:
        raise ValueError("postselect expects a Bell correlation")
    if target.kind is Kind.BELL:
        raise ValueError("postselect target must be instrumental or f-instrumental")
    if (target.nX, target.nA, target.nB) != (s.nX, s.nA, s.nB):
        raise ValueError("target cardinalities do not match the Bell scenario")
    wire_range = target.nA if target.kind is Kind.INSTRUMENTAL else target.nY
    if wire_range > s.nY:
        raise ValueError("wire values exceed the Bell scenario's nY")
    entries = []
    for x in range(target.nX):
        for a in range(target.nA):
            y = target.wire(a, x)
            for b in range(target.nB):
                entries.append(p.entries[s.index(x, y, a, b)])
    q = Correlation(target, tuple(entries))
    report = validate(q)
    if not report.normalized:
        raise ValueError(
            "post-selected table is not normalized; the input correlation is "
            f"signalling (first bad block at {report.first_violation})"
        )
    return q


def append_dummy_input(p: Correlation, fixed_a: int) -> Correlation:
    """Extend a Bell correlation with one extra input for Alice.

    At the new input x = nX, Alice outputs `fixed_a` deterministically and Bob
    keeps the marginal he had at x = 0.  The extension is no-signalling iff the
    input is.
    """
    s = p.scenario
    if s.kind is not Kind.BELL:
        raise ValueError("dummy inputs apply to Bell correlations")
    if not 0 <= fixed_a < s.nA:
        raise ValueError("fixed output out of range")
    ext = Scenario.bell(s.nX + 1, s.nY, s.nA, s.nB)
    entries = list(p.entries)
    zero = _F0 if p.exact else 0.0
    for y in range(s.nY):
        marg = []
        for b in range(s.nB):
            marg.append(sum(p.entries[s.index(0, y, a, b)] for a in range(s.nA)))
        for a in range(s.nA):
            for b in range(s.nB):
                entries.append(marg[b] if a == fixed_a else zero)
    return Correlation(ext, tuple(entries))


def dummy_input_extension(p: Correlation) -> Correlation:
    """Extend a two-input Bell correlation with a third input where a = 0."""
    if p.scenario.nX != 2:
        raise ValueError("the dummy-input extension starts from nX = 2")
    return append_dummy_input(p, fixed_a=0)


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the probabilistic-consistency checks on a table.

    `no_signalling` is None for instrumental kinds, where the condition has no
    meaning.  `first_violation` names the first failed check and the offending
    coordinate (or block/context indices for the aggregate checks).
    """

    nonnegative: bool
    normalized: bool
    no_signalling: bool | None
    first_violation: tuple[str, tuple] | None

    @property
    def ok(self) -> bool:
        return self.nonnegative and self.normalized and self.no_signalling is not False


def validate(p: Correlation, atol: float = 1e-9) -> ValidationReport:
    """Check nonnegativity, per-context normalization and (Bell) no-signalling.

    Exact tables are checked exactly; float tables within `atol`.
    """
    s = p.scenario
    exact = p.exact
    first: tuple[str, tuple] | None = None

    def bad(value) -> bool:
        return value < 0 if exact else value < -atol

    nonneg = True
    for coords in s.coords():
        if bad(p.entries[s.index(*coords)]):
            nonneg = False
            first = first or ("nonnegative", coords)
            break

    normalized = True
    for bi, block in enumerate(s.input_blocks()):
        total = sum(p.entries[i] for i in block)
        ok = total == 1 if exact else abs(total - 1) <= atol
        if not ok:
            normalized = False
            first = first or ("normalized", (bi,))
            break

    nosig: bool | None = None
    if s.kind is Kind.BELL:
        nosig = True
        residual = max_signalling_residual(p)
        if (residual != 0) if exact else (residual > atol):
            nosig = False
            first = first or ("no_signalling", ())
    return ValidationReport(nonneg, normalized, nosig, first)


def max_signalling_residual(p: Correlation):
    """Largest absolute marginal mismatch across contexts of a Bell table.

    Zero (exactly, or numerically small for float tables) iff no party's
    marginal depends on the other party's input.
    """
    s = p.scenario
    if s.kind is not Kind.BELL:
        raise ValueError("signalling residuals apply to Bell correlations")
    worst = _F0 if p.exact else 0.0
    for x in range(s.nX):
        for a in range(s.nA):
            margs = [
                sum(p.entries[s.index(x, y, a, b)] for b in range(s.nB))
                for y in range(s.nY)
            ]
            for m in margs[1:]:
                worst = max(worst, abs(m - margs[0]))
    for y in range(s.nY):
        for b in range(s.nB):
            margs = [
                sum(p.entries[s.index(x, y, a, b)] for a in range(s.nA))
                for x in range(s.nX)
            ]
            for m in margs[1:]:
                worst = max(worst, abs(m - margs[0]))
    return worst


def mix_correlations(pairs: Iterable[tuple[Fraction, Correlation]]) -> Correlation:
    """Convex (or affine) combination of exact correlations over one scenario."""
    pairs = list(pairs)
    if not pairs:
        raise ValueError("nothing to mix")
    s = pairs[0][1].scenario
    if any(c.scenario != s for _, c in pairs):
        raise ValueError("mixtures must stay within one scenario")
    if any(not c.exact for _, c in pairs):
        raise TypeError("mixtures are defined for exact correlations only")
    entries = [_F0] * s.dim
    for w, c in pairs:
        w = Fraction(w)
        for i, e in enumerate(c.entries):
            entries[i] += w * e
    return Correlation(s, tuple(entries))


def random_mixture(
    s: Scenario,
    rng,
    *,
    parts: int = 4,
    denominator_cap: int = 1000,
    pool: Sequence[Correlation] | None = None,
) -> Correlation:
    """A random rational mixture of extreme points, drawn from `rng`.

    All weights are multiples of 1/d for one denominator d <= the cap, so the
    result has small exact entries.  The default pool is the deterministic
    strategies of `s`; pass a precomputed `pool` to avoid re-enumeration or to
    mix over other extreme points.
    """
    if pool is None:
        pool = [
            strategy_to_correlation(d)
            for d in enumerate_deterministic_strategies(s)
        ]
    d = rng.randint(1, denominator_cap)
    cuts = sorted(rng.randint(0, d) for _ in range(parts - 1))
    weights = [
        Fraction(hi - lo, d) for lo, hi in zip([0, *cuts], [*cuts, d])
    ]
    picks = [rng.choice(pool) for _ in range(parts)]
    return mix_correlations(list(zip(weights, picks)))


def pr_box() -> Correlation:
    """The extremal no-signalling box with a + b = x*y (mod 2), all marginals 1/2."""
    s = Scenario.bell(2, 2)
    half = Fraction(1, 2)
    entries = [_F0] * s.dim
    for x in range(2):
        for y in range(2):
            for a in range(2):
                for b in range(2):
                    if (a + b) % 2 == (x * y) % 2:
                        entries[s.index(x, y, a, b)] = half
    return Correlation(s, tuple(entries))


def uniform_box(s: Scenario) -> Correlation:
    """The maximally mixed table: every outcome pair equally likely."""
    w = Fraction(1, s.nA * s.nB)
    return Correlation(s, tuple([w] * s.dim))
