import math
from fractions import Fraction

import numpy as np
import pytest

from instrumental.errors import CapacityError, ConvergenceError
from instrumental.inequalities import catalog, pearl_expressions
from instrumental.quantum import (
    Observable2,
    QuantumStrategy,
    TwoQubitState,
    bonet_strategy,
    born_table,
    chained_strategy,
    chsh_strategy,
    gpt_box_search,
    rationalize_correlation,
    tilted_search,
)
from instrumental.scenario import (
    Correlation,
    Scenario,
    append_dummy_input,
    dummy_input_extension,
    max_signalling_residual,
    postselect,
    pr_box,
    validate,
)

F = Fraction
INSTR3 = Scenario.instrumental(3)


def test_observable_validation():
    with pytest.raises(ValueError):
        Observable2(1.0, 1.0)
    o = Observable2.from_angle(0.3)
    assert o.angle == pytest.approx(0.3)
    assert np.allclose(o.projector(0) + o.projector(1), np.eye(2))
    # outcome 0 is the +1 eigenspace
    z = Observable2(0.0, 1.0)
    assert np.allclose(z.projector(0), np.diag([1.0, 0.0]))
    with pytest.raises(ValueError):
        z.projector(2)


def test_state_validation():
    rho = TwoQubitState.phi_plus().matrix
    assert abs(np.trace(rho) - 1.0) < 1e-15
    assert np.linalg.eigvalsh(rho).min() > -1e-15
    with pytest.raises(ValueError):
        TwoQubitState(np.eye(3))
    with pytest.raises(ValueError):
        TwoQubitState(np.eye(4))  # trace 4
    bad = np.zeros((4, 4), dtype=complex)
    bad[0, 1] = 1.0
    bad[0, 0] = 1.0
    with pytest.raises(ValueError):
        TwoQubitState(bad)
    neg = np.diag([1.5, -0.5, 0.0, 0.0])
    with pytest.raises(ValueError):
        TwoQubitState(neg)
    with pytest.raises(ValueError):
        QuantumStrategy(TwoQubitState.phi_plus(), (), ())


def test_born_table_is_no_signalling():
    t = born_table(chsh_strategy(), Scenario.bell(2, 2))
    assert not t.exact
    report = validate(t, atol=1e-12)
    assert report.nonnegative and report.normalized and report.no_signalling
    assert max_signalling_residual(t) < 1e-12


def test_born_table_shape_checks():
    s = chsh_strategy()
    with pytest.raises(ValueError):
        born_table(s, Scenario.bell(3, 2))
    with pytest.raises(ValueError):
        born_table(s, Scenario.bell(2, 2, 3, 2))
    wired = born_table(s, Scenario.instrumental(2))
    assert validate(wired, atol=1e-12).normalized


def test_chsh_value():
    t = born_table(chsh_strategy(), Scenario.bell(2, 2))
    assert catalog("chsh").evaluate(t) == pytest.approx(2 * math.sqrt(2), abs=1e-12)


def test_bonet_strategy_value():
    t = born_table(bonet_strategy(), INSTR3)
    expected = (3 + math.sqrt(2)) / 2
    assert abs(catalog("bonet").evaluate(t) - expected) < 1e-9


def test_dummy_extension_routes():
    bell = born_table(chsh_strategy(), Scenario.bell(2, 2))
    wired = postselect(dummy_input_extension(bell), INSTR3)
    assert abs(catalog("bonet").evaluate(wired) - (3 + math.sqrt(2)) / 2) < 1e-9
    boxed = postselect(dummy_input_extension(pr_box()), INSTR3)
    assert catalog("bonet").evaluate(boxed) == F(5, 2)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_chained_strategy_values(n):
    t = born_table(chained_strategy(n), Scenario.bell(n, n))
    chain = catalog("chained_bell", n=n).evaluate(t)
    assert abs(chain - 2 * n * math.cos(math.pi / (2 * n))) < 1e-9
    wired = postselect(append_dummy_input(t, fixed_a=1), Scenario.chained(n))
    value = catalog("chained", n=n).evaluate(wired)
    expected = n * (0.5 + 0.5 * math.cos(math.pi / (2 * n))) + 0.5
    assert abs(value - expected) < 1e-9


@pytest.mark.parametrize("alpha", [1, F(3, 2), 2, 5])
def test_tilted_search(alpha):
    r = tilted_search(alpha)
    a = float(alpha)
    assert abs(r.bell_value - 2 * math.sqrt(a * a + 1)) < 1e-6
    induced = (2 + a + math.sqrt(a * a + 1)) / 2
    assert abs(r.instrumental_value - induced) < 1e-6
    assert len(r.strategy.alice) == 2 and len(r.strategy.bob) == 2


def test_tilted_search_guards():
    with pytest.raises(ValueError):
        tilted_search(F(1, 2))
    with pytest.raises(ConvergenceError):
        tilted_search(3, max_iterations=0)


def test_gpt_box_search_bonet():
    val, box = gpt_box_search(catalog("bonet"))
    assert val == F(5, 2)
    assert box.scenario == INSTR3
    assert set(box.entries) <= {F(0), F(1, 2)}
    assert all(e.evaluate(box) <= 1 for e in pearl_expressions(INSTR3))


def test_gpt_box_search_pearl_and_guards():
    e = pearl_expressions(Scenario.instrumental(2))[0]
    val, _ = gpt_box_search(e)
    assert val == 1
    with pytest.raises(CapacityError):
        gpt_box_search(catalog("chained", n=5))
    with pytest.raises(ValueError):
        gpt_box_search(catalog("chsh"))


def test_rationalize_correlation():
    exact = postselect(pr_box(), Scenario.instrumental(2))
    blurred = Correlation(exact.scenario, tuple(float(e) for e in exact.entries))
    snapped = rationalize_correlation(blurred)
    assert snapped.exact and snapped.entries == exact.entries
    assert rationalize_correlation(exact) is exact
    awkward = born_table(chsh_strategy(), Scenario.bell(2, 2))
    with pytest.raises(ValueError):
        rationalize_correlation(awkward, max_denominator=10)
    ok = rationalize_correlation(awkward)
    assert ok.exact
    assert max(abs(float(f) - e) for f, e in zip(ok.entries, awkward.entries)) < 1e-9
