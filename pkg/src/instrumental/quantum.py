"""Two-qubit measurement strategies and their probability tables.

Floating point lives here and nowhere else: Born probabilities come out as
floats, and `rationalize_correlation` is the only bridge back into the exact
layer.  All observables are restricted to the x-z plane of the Bloch sphere,
which is enough for every extremal two-input/two-output correlation.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import CapacityError, ConvergenceError
from .inequalities import LinearExpression, catalog
from .polytope import no_signalling_polytope, vertex_enumeration
from .scenario import (
    Correlation,
    Kind,
    Scenario,
    dummy_input_extension,
    postselect,
)

__all__ = [
    "Observable2",
    "TwoQubitState",
    "QuantumStrategy",
    "born_table",
    "chsh_strategy",
    "bonet_strategy",
    "chained_strategy",
    "SeeSawResult",
    "tilted_search",
    "gpt_box_search",
    "rationalize_correlation",
]

_SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
_I2 = np.eye(2, dtype=complex)

_UNIT_TOL = 1e-12
_CLIP_TOL = 1e-12


@dataclass(frozen=True)
class Observable2:
    """A binary qubit observable vx*sigma_x + vz*sigma_z.

    The direction (vx, vz) must be a unit vector.  Outcome 0 is the +1
    eigenvalue throughout.
    """

    vx: float
    vz: float

    def __post_init__(self) -> None:
        norm = math.hypot(self.vx, self.vz)
        if abs(norm - 1.0) > _UNIT_TOL:
            raise ValueError(f"direction must have unit length, got {norm!r}")

    @classmethod
    def from_angle(cls, theta: float) -> "Observable2":
        """Direction at angle theta from the z axis, in the x-z plane."""
        return cls(math.sin(theta), math.cos(theta))

    @property
    def angle(self) -> float:
        return math.atan2(self.vx, self.vz)

    def matrix(self) -> np.ndarray:
        return self.vx * _SX + self.vz * _SZ

    def projector(self, outcome: int) -> np.ndarray:
        if outcome not in (0, 1):
            raise ValueError("outcome must be 0 or 1")
        sign = 1.0 if outcome == 0 else -1.0
        return (_I2 + sign * self.matrix()) / 2.0


class TwoQubitState:
    """A validated 4x4 density matrix."""

    __slots__ = ("matrix",)

    def __init__(self, matrix) -> None:
        rho = np.asarray(matrix, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError("a two-qubit state is a 4x4 matrix")
        if np.linalg.norm(rho - rho.conj().T) > 1e-12:
            raise ValueError("density matrix must be hermitian")
        if abs(np.trace(rho) - 1.0) > 1e-12:
            raise ValueError("density matrix must have unit trace")
        if np.linalg.eigvalsh(rho).min() < -1e-12:
            raise ValueError("density matrix must be positive semidefinite")
        self.matrix = rho
        self.matrix.flags.writeable = False

    @classmethod
    def phi_plus(cls) -> "TwoQubitState":
        """The maximally entangled state (|00> + |11>)/sqrt(2)."""
        v = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / math.sqrt(2.0)
        return cls(np.outer(v, v.conj()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TwoQubitState):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    def __repr__(self) -> str:
        return f"TwoQubitState({self.matrix!r})"


@dataclass(frozen=True)
class QuantumStrategy:
    """A shared state with one planar observable per input on each side."""

    state: TwoQubitState
    alice: tuple[Observable2, ...]
    bob: tuple[Observable2, ...]

    def __post_init__(self) -> None:
        if not self.alice or not self.bob:
            raise ValueError("each side needs at least one observable")


def _bell_entries(strategy: QuantumStrategy, nx: int, ny: int) -> list[float]:
    rho = strategy.state.matrix
    entries: list[float] = []
    for x in range(nx):
        pa = [strategy.alice[x].projector(a) for a in (0, 1)]
        for y in range(ny):
            pb = [strategy.bob[y].projector(b) for b in (0, 1)]
            for a in (0, 1):
                for b in (0, 1):
                    val = float(np.trace(rho @ np.kron(pa[a], pb[b])).real)
                    if val < 0.0:
                        if val < -_CLIP_TOL:
                            raise ValueError(
                                f"Born probability {val} below tolerance"
                            )
                        val = 0.0
                    entries.append(val)
    return entries


def born_table(strategy: QuantumStrategy, scenario: Scenario) -> Correlation:
    """The float probability table of a strategy in the given scenario.

    Instrumental tables are produced by measuring the Bell table and feeding
    Alice's outcome down the wire, so Bob needs one observable per wire value.
    """
    if scenario.nA != 2 or scenario.nB != 2:
        raise ValueError("planar qubit strategies produce binary outcomes")
    if scenario.kind is Kind.BELL:
        ny = scenario.nY
    else:
        ny = scenario.nA if scenario.kind is Kind.INSTRUMENTAL else scenario.nY
    if len(strategy.alice) != scenario.nX:
        raise ValueError("need one observable per input x")
    if len(strategy.bob) != ny:
        raise ValueError("need one observable per wire value")
    entries = _bell_entries(strategy, scenario.nX, ny)
    bell = Scenario.bell(scenario.nX, ny)
    q = Correlation(bell, tuple(entries))
    if scenario.kind is Kind.BELL:
        return q
    return postselect(q, scenario)


def chsh_strategy() -> QuantumStrategy:
    """Angles reaching 2*sqrt(2) on the two-input correlator test."""
    return QuantumStrategy(
        TwoQubitState.phi_plus(),
        (Observable2.from_angle(0.0), Observable2.from_angle(math.pi / 2)),
        (Observable2.from_angle(math.pi / 4), Observable2.from_angle(-math.pi / 4)),
    )


def bonet_strategy() -> QuantumStrategy:
    """Three-input strategy whose wired table reaches (3 + sqrt(2))/2.

    The first two inputs play the optimal correlator game; the third points
    opposite Bob's first direction, so the penalized joint outcome never
    occurs.
    """
    r = 1.0 / math.sqrt(2.0)
    return QuantumStrategy(
        TwoQubitState.phi_plus(),
        (Observable2(1.0, 0.0), Observable2(0.0, 1.0), Observable2(-r, -r)),
        (Observable2(r, r), Observable2(r, -r)),
    )


def chained_strategy(n: int) -> QuantumStrategy:
    """Optimal n-input chain over the shared singlet plane.

    Alice's directions sit at angles pi*j/n, Bob's halfway between
    consecutive ones; every chained correlator term then equals
    cos(pi/2n).
    """
    if n < 2:
        raise ValueError("the chain needs n >= 2")
    alice = tuple(Observable2.from_angle(math.pi * j / n) for j in range(n))
    bob = tuple(
        Observable2.from_angle(math.pi * (2 * j + 1) / (2 * n)) for j in range(n)
    )
    return QuantumStrategy(TwoQubitState.phi_plus(), alice, bob)


@dataclass(frozen=True)
class SeeSawResult:
    """Outcome of the alternating closed-form optimization."""

    bell_value: float
    instrumental_value: float
    strategy: QuantumStrategy
    iterations: int


def tilted_search(
    alpha,
    *,
    tol: float = 1e-12,
    max_iterations: int = 10**4,
) -> SeeSawResult:
    """Alternate exact single-party updates on the weighted correlator test.

    Each half step replaces one party's angles by the closed-form argmax
    given the other party's, so the value never decreases.  Stops when an
    iteration improves by less than `tol`; the result must land within 1e-6
    of 2*sqrt(alpha^2 + 1) or a ConvergenceError is raised.
    """
    a = float(alpha)
    if a < 1.0:
        raise ValueError("the weight must satisfy alpha >= 1")

    def value(a0, a1, b0, b1):
        return (
            a * math.cos(a0 - b0)
            + math.cos(a0 - b1)
            + a * math.cos(a1 - b0)
            - math.cos(a1 - b1)
        )

    def arg(z, fallback):
        return cmath.phase(z) if abs(z) > 0.0 else fallback

    a0, a1 = 0.0, math.pi / 2
    b0, b1 = math.pi / 4, -math.pi / 4
    best = value(a0, a1, b0, b1)
    iterations = 0
    while True:
        iterations += 1
        if iterations > max_iterations:
            raise ConvergenceError(
                f"no convergence after {max_iterations} iterations"
            )
        eb0, eb1 = cmath.exp(1j * b0), cmath.exp(1j * b1)
        a0 = arg(a * eb0 + eb1, a0)
        a1 = arg(a * eb0 - eb1, a1)
        ea0, ea1 = cmath.exp(1j * a0), cmath.exp(1j * a1)
        b0 = arg(ea0 + ea1, b0)
        b1 = arg(ea0 - ea1, b1)
        current = value(a0, a1, b0, b1)
        if current - best < tol:
            best = max(best, current)
            break
        best = current

    target = 2.0 * math.sqrt(a * a + 1.0)
    if best < target - 1e-6:
        raise ConvergenceError(
            f"stalled at {best}, expected {target} within 1e-6"
        )
    strategy = QuantumStrategy(
        TwoQubitState.phi_plus(),
        (Observable2.from_angle(a0), Observable2.from_angle(a1)),
        (Observable2.from_angle(b0), Observable2.from_angle(b1)),
    )
    bell = born_table(strategy, Scenario.bell(2, 2))
    extended = dummy_input_extension(bell)
    wired = postselect(extended, Scenario.instrumental(3))
    instrumental_value = catalog("tilted", alpha=alpha).evaluate(wired)
    return SeeSawResult(best, instrumental_value, strategy, iterations)


def gpt_box_search(expression: LinearExpression):
    """Exact maximum of a wired expression over boxes with a no-signalling
    extension, found by scanning the extension polytope's vertices.

    Returns the value and the lexicographically smallest maximizing table.
    The scan enumerates every extremal no-signalling behaviour, so it is
    capped at four inputs.
    """
    s = expression.scenario
    if s.kind is Kind.BELL:
        raise ValueError("the search applies to wired expressions")
    if s.nA != 2 or s.nB != 2:
        raise ValueError("the vertex scan handles binary outcomes only")
    if s.nX > 4:
        raise CapacityError("vertex scan is limited to four inputs")
    ny = s.nA if s.kind is Kind.INSTRUMENTAL else s.nY
    bell = Scenario.bell(s.nX, ny)
    verts = vertex_enumeration(no_signalling_polytope(bell))
    best_value: Fraction | None = None
    best_entries: tuple | None = None
    for v in verts.vertices:
        p = postselect(Correlation(bell, v), s)
        val = expression.evaluate(p)
        if (
            best_value is None
            or val > best_value
            or (val == best_value and p.entries < best_entries)
        ):
            best_value, best_entries = val, p.entries
    return best_value, Correlation(s, best_entries)


def rationalize_correlation(
    p: Correlation, *, max_denominator: int = 10**6, tol: float = 1e-9
) -> Correlation:
    """Snap a float table to nearby small rationals and renormalize exactly.

    Raises if any entry moves by more than `tol`, or if a context's total is
    too far from one for the exact renormalization to be faithful.
    """
    if p.exact:
        return p
    s = p.scenario
    approx = [Fraction(e).limit_denominator(max_denominator) for e in p.entries]
    entries = list(approx)
    for block in s.input_blocks():
        total = sum(entries[i] for i in block)
        if abs(float(total) - 1.0) > tol:
            raise ValueError(f"context total {float(total)} too far from one")
        if total != 1:
            for i in block:
                entries[i] /= total
    drift = max(abs(float(f) - e) for f, e in zip(entries, p.entries))
    if drift > tol:
        raise ValueError(f"rationalization moved an entry by {drift}")
    return Correlation(s, tuple(entries))
