import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import GRID
from qsl2r.coeffalg import CoeffElement
from qsl2r.coideal import StabElement, build_coideal
from qsl2r.qnum import QContext
from qsl2r.relint import (CheckReport, GCharacter, InvariantIntegral, TruncationError,
                          balanced_residuals, character_residuals, check_balanced,
                          check_character_condition, check_delta_phic_factorization,
                          check_relative_invariance, closed_form_weight, compute_weights,
                          delta_phic_factorization_residual, psi, report, solve_weights)

K_INV = GCharacter(-1)


@pytest.fixture
def integral(cd):
    return compute_weights(K_INV, cd, 6)


def test_report_and_repr():
    r = report("x", 1e-12, 1e-9, foo=1)
    assert r.passed and r.as_dict()["status"] == "pass" and "PASS" in str(r)
    assert not report("y", 1.0, 1e-9).passed
    assert report("z", 1.0, 1e-9, expect_pass=False).passed
    assert isinstance(r, CheckReport)


def test_g_character(cd):
    g = GCharacter(-1)
    assert g.inverse() == GCharacter(1)
    assert g.value(CoeffElement.unit(cd.q)) == pytest.approx(1)
    assert g.value(CoeffElement.basis(1, 0, 0, cd.q)) == pytest.approx(1 / cd.q)


def test_balanced_examples(cd):
    assert check_balanced(K_INV, cd).passed
    bad = check_balanced(GCharacter(0), cd)
    assert not bad.passed and bad.residual > 1e-3
    for s in (-1, 0, 1, 0.37):
        assert balanced_residuals(GCharacter(s), cd)[0] == 0


def test_character_examples(cd):
    assert check_character_condition(K_INV, cd).passed
    assert not check_character_condition(GCharacter(1), cd).passed
    assert character_residuals(GCharacter(1), cd)[0] == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("q,a", GRID)
def test_balanced_iff_character(q, a):
    cd = build_coideal(QContext(q, a, 1e-9, 3))
    for s in (-2, -1.5, -1, -0.5, 0, 0.5, 1):
        bal = check_balanced(GCharacter(s), cd).passed
        char = check_character_condition(GCharacter(s), cd, tol=1e-7).passed
        assert bal == char == (s == -1)


def test_weights_examples(integral):
    w = integral.weights
    assert w[0] == 1
    assert w[1] == pytest.approx(1.7, abs=1e-12)
    assert w[-1] == pytest.approx(0.8, abs=1e-12)
    assert integral.truncation == 6


def test_weights_require_balanced(cd):
    with pytest.raises(ValueError):
        compute_weights(GCharacter(0), cd, 2)


@pytest.mark.parametrize("q,a", GRID)
def test_weights_closed_form(q, a):
    ctx = QContext(q, a, 1e-9, 3)
    integral = compute_weights(K_INV, build_coideal(ctx), 6)
    for m, w in integral.weights.items():
        assert w > 0
        assert w == pytest.approx(closed_form_weight(m, ctx), abs=1e-9)


@pytest.mark.parametrize("q,a", [(0.5, 1.0), (0.3, 1.7), (0.8, 0.5)])
def test_solve_weights_unique(q, a):
    cd = build_coideal(QContext(q, a, 1e-9, 3))
    solved, nullity = solve_weights(K_INV, cd, 4)
    assert nullity == 1
    ref = compute_weights(K_INV, cd, 4)
    for m in ref.weights:
        assert solved.weights[m] == pytest.approx(ref.weights[m], rel=1e-8)
    none, nullity0 = solve_weights(GCharacter(0), cd, 4)
    assert none is None and nullity0 == 0


def test_psi(integral):
    assert psi(StabElement.e(0), integral) == pytest.approx(1)
    assert integral.psi(StabElement.e(1)) == pytest.approx(1.7)
    with pytest.raises(TruncationError):
        psi(StabElement.e(7), integral)


@given(st.dictionaries(st.integers(-6, 6), st.floats(-5, 5), max_size=6),
       st.dictionaries(st.integers(-6, 6), st.floats(-5, 5), max_size=6),
       st.floats(-3, 3))
def test_psi_linear(x, y, c):
    integral = InvariantIntegral(K_INV, {m: 1.0 + 0.1 * m * m for m in range(-6, 7)})
    X, Y = StabElement(x), StabElement(y)
    lhs = psi(X + c * Y, integral)
    assert lhs == pytest.approx(psi(X, integral) + c * psi(Y, integral), abs=1e-9)


def test_psi_is_tracial(integral):
    x, y = StabElement({0: 1, 2: 3j}), StabElement({2: 2, -1: 1})
    assert psi(x * y, integral) == psi(y * x, integral)


def test_relative_invariance(cd, integral, rng):
    one = CoeffElement.unit(cd.q)
    x = StabElement({0: 1, 1: -0.5, -2: 2j})
    assert check_relative_invariance(integral, cd, [(x, one)]).residual == pytest.approx(0, abs=1e-12)
    samples = [(StabElement.e(0), CoeffElement.random([2], cd.q, rng)) for _ in range(4)]
    samples += [(x, CoeffElement.random([1, 2], cd.q, rng)) for _ in range(4)]
    assert check_relative_invariance(integral, cd, samples).passed
    wrong = dict(integral.weights)
    wrong[1] *= 1.01
    bad = InvariantIntegral(K_INV, wrong)
    assert not check_relative_invariance(bad, cd, samples).passed
    with pytest.raises(TruncationError):
        check_relative_invariance(integral, cd, [(StabElement.e(6), CoeffElement.random([2], cd.q, rng))])


def test_factorization(cd, integral):
    assert delta_phic_factorization_residual(integral, cd, 0, 0) < 1e-12
    for n in (1, 2):
        assert delta_phic_factorization_residual(integral, cd, n, n) < 1e-9
    assert check_delta_phic_factorization(integral, cd, 4).passed
    wrong = dict(integral.weights)
    wrong[2] *= 1.01
    assert delta_phic_factorization_residual(InvariantIntegral(K_INV, wrong), cd, 2, 2) > 1e-4
