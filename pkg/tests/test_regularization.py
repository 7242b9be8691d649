import math

import numpy as np
import pytest

from fuzzygb.errors import DomainError
from fuzzygb.linalg import identity, operator_norm
from fuzzygb.regularization import (
    SPHERE_RULE,
    TORUS_RULE,
    FourierMode,
    HbarKind,
    HbarRule,
    clock_shift,
    fit_decay_rate,
    pad_nonunital,
    sphere_quantize_monomial,
    torus_axiom_report,
    torus_bracket_defect,
    torus_product_defect,
    torus_quantize,
    torus_quantize_combination,
    trace_functional,
    unitality_defect,
)
from fuzzygb.surfaces import sphere_embedding


def test_hbar_rules():
    assert SPHERE_RULE(10) == pytest.approx(2 / math.sqrt(99))
    assert TORUS_RULE(8) == pytest.approx(math.sin(math.pi / 8))
    assert HbarRule(HbarKind.EXPLICIT, 0.25)(100) == 0.25
    with pytest.raises(DomainError):
        SPHERE_RULE(1)
    with pytest.raises(DomainError):
        HbarRule(HbarKind.EXPLICIT, -1.0)


@pytest.mark.parametrize("rule", [SPHERE_RULE, TORUS_RULE])
def test_hbar_rule_decreasing_and_n_hbar_bounded(rule):
    ns = np.arange(2, 400)
    vals = np.array([rule(n) for n in ns])
    assert np.all(vals > 0)
    assert np.all(np.diff(vals) < 0)
    assert np.max(ns * vals) < 4.0


def test_clock_shift_n2():
    g, h = clock_shift(2)
    np.testing.assert_allclose(g, np.diag([1, -1]), atol=1e-15)
    np.testing.assert_array_equal(h, np.array([[0, 1], [1, 0]]))


def test_clock_n4():
    g, _ = clock_shift(4)
    np.testing.assert_allclose(np.diag(g), [1, 1j, -1, -1j], atol=1e-15)


@pytest.mark.parametrize("n", range(2, 65))
def test_clock_shift_relation(n):
    g, h = clock_shift(n)
    omega = np.exp(2j * np.pi / n)
    assert np.max(np.abs(h @ g - omega * g @ h)) < 1e-14
    np.testing.assert_allclose(g @ g.conj().T, identity(n), atol=1e-14)
    np.testing.assert_allclose(h @ h.conj().T, identity(n), atol=0)


def test_clock_shift_domain():
    with pytest.raises(DomainError):
        clock_shift(1)


def test_torus_quantize_examples():
    np.testing.assert_array_equal(torus_quantize((0, 0), 5), identity(5))
    g, h = clock_shift(4)
    np.testing.assert_allclose(torus_quantize((1, 0), 4), g, atol=1e-15)
    np.testing.assert_allclose(torus_quantize((0, -1), 4), h.conj().T, atol=1e-15)


@pytest.mark.parametrize("n", [2, 3, 8, 31])
def test_torus_fundamental_bracket_cancels(n):
    hbar = math.sin(math.pi / n)
    t10, t01, t11 = (torus_quantize(m, n) for m in ((1, 0), (0, 1), (1, 1)))
    lhs = (t10 @ t01 - t01 @ t10) / (1j * hbar) + 2 * t11
    assert operator_norm(lhs) < 1e-13


def test_torus_bracket_defect_examples():
    assert torus_bracket_defect((1, 0), (0, 1), 8) < 1e-13
    for n in (3, 8, 20):
        assert torus_bracket_defect((1, 1), (1, 1), n) < 1e-13
    assert torus_bracket_defect((2, 0), (0, 1), 8) == pytest.approx(4 * (1 - math.cos(math.pi / 8)), abs=1e-12)
    assert 4 * (1 - math.cos(math.pi / 8)) == pytest.approx(0.304482, abs=1e-6)


def _bracket_closed_form(m, n, N):
    # 2 |c - sin(c theta) / sin(theta)|, c = m x n
    c = m[0] * n[1] - m[1] * n[0]
    th = math.pi / N
    return 2 * abs(c - math.sin(c * th) / math.sin(th))


@pytest.mark.parametrize("m,n", [((1, 2), (-1, 1)), ((3, 0), (1, 2)), ((-2, 1), (2, 3))])
@pytest.mark.parametrize("N", [8, 16, 33])
def test_torus_bracket_defect_matches_closed_form(m, n, N):
    assert torus_bracket_defect(m, n, N) == pytest.approx(_bracket_closed_form(m, n, N), abs=1e-11)


def test_torus_bracket_defect_antisymmetric():
    for m, n in [((1, 2), (3, -1)), ((0, 1), (2, 2)), ((-3, 1), (1, 0))]:
        assert torus_bracket_defect(m, n, 12) == pytest.approx(torus_bracket_defect(n, m, 12), abs=1e-12)


def test_small_mode_bracket_decays_quadratically():
    ns = [8, 16, 32, 64, 128]
    for m, n in [((1, 2), (-1, 1)), ((2, 0), (0, 1)), ((1, -1), (1, 1))]:
        rate = fit_decay_rate(ns, [torus_bracket_defect(m, n, N) for N in ns])
        assert rate <= -1.9


def test_torus_product_defect_closed_form():
    m, n = FourierMode(1, 2), FourierMode(-1, 3)
    c = m.cross(n)
    for N in (8, 16, 64):
        expected = abs(np.exp(-1j * math.pi * c / N) - 1)
        assert torus_product_defect(m, n, N) == pytest.approx(expected, abs=1e-12)


def test_product_defect_decays_like_one_over_n():
    ns = [16, 32, 64, 128]
    rate = fit_decay_rate(ns, [torus_product_defect((1, 1), (2, -1), N) for N in ns])
    assert rate == pytest.approx(-1.0, abs=0.05)


def test_torus_quantization_linear():
    coeffs = {(1, 0): 0.5, (0, 2): -1.25, (2, -1): 3.0}
    combo = torus_quantize_combination(coeffs, 9)
    manual = sum(c * torus_quantize(m, 9) for m, c in coeffs.items())
    np.testing.assert_array_equal(combo, manual)


def test_trace_functional_examples():
    for n in (4, 16, 256):
        h = SPHERE_RULE(n)
        assert trace_functional(identity(n), h) == pytest.approx(4 * math.pi * n / math.sqrt(n * n - 1))
    assert trace_functional(identity(4096), SPHERE_RULE(4096)).real == pytest.approx(4 * math.pi, rel=1e-7)
    assert trace_functional(identity(4096), TORUS_RULE(4096)).real == pytest.approx(2 * math.pi**2, rel=1e-6)
    for n in (3, 8, 50):
        assert abs(trace_functional(torus_quantize((1, 0), n), TORUS_RULE(n))) < 1e-13


@pytest.mark.parametrize("n", [5, 8])
def test_trace_of_torus_modes_vanishes_off_zero(n):
    for a in range(-3, 4):
        for b in range(-3, 4):
            if a % n == 0 and b % n == 0:
                continue
            assert abs(trace_functional(torus_quantize((a, b), n), TORUS_RULE(n))) < 1e-12


def test_unitality_examples():
    assert unitality_defect(identity(6)) == 0
    assert unitality_defect(pad_nonunital(identity(6))) == pytest.approx(1.0)
    n = 10
    e11 = np.zeros((n, n))
    e11[0, 0] = 1
    assert unitality_defect(identity(n) + e11 / n) == pytest.approx(1 / n)


def test_pad_nonunital():
    np.testing.assert_array_equal(pad_nonunital(identity(2)), np.diag([1, 1, 0]))
    a = np.random.default_rng(3).normal(size=(5, 5)) + 0j
    assert operator_norm(pad_nonunital(a)) == pytest.approx(operator_norm(a), rel=1e-13)


def test_axiom_report_small():
    rep = torus_axiom_report(8, 2)
    assert rep.unitality_defect == 0
    assert rep.bracket_defect >= 4 * (1 - math.cos(math.pi / 8))
    assert rep.trace_defect == pytest.approx(abs(2 * math.pi * 8 * math.sin(math.pi / 8) - 2 * math.pi**2))


def test_fit_decay_rate():
    ns = [2, 4, 8, 16]
    assert fit_decay_rate(ns, [3.0 / n**2 for n in ns]) == pytest.approx(-2.0)
    with pytest.raises(ValueError):
        fit_decay_rate([2], [1.0])


def test_sphere_monomials_product_and_trace():
    # symmetrized degree-2 monomials approach products of coordinates
    prev = None
    for n in (8, 32, 128):
        X = sphere_embedding(n).X
        t12 = sphere_quantize_monomial(X, (1, 1, 0))
        np.testing.assert_allclose(t12, (X[0] @ X[1] + X[1] @ X[0]) / 2)
        defect = operator_norm(X[0] @ X[1] - t12)
        if prev is not None:
            assert defect < prev
        prev = defect
        hbar = SPHERE_RULE(n)
        # Tr X^i X^j = delta_ij N / 3 exactly
        t11 = sphere_quantize_monomial(X, (2, 0, 0))
        assert trace_functional(t11, hbar).real == pytest.approx(2 * math.pi * hbar * n / 3)
    assert trace_functional(t11, hbar).real == pytest.approx(4 * math.pi / 3, rel=1e-3)
    t = sphere_quantize_monomial(X, (1, 1, 1))
    assert operator_norm(t - t.conj().T) < 1e-14
    with pytest.raises(ValueError):
        sphere_quantize_monomial(X, (2, 2, 0))
