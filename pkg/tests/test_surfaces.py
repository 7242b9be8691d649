import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from fuzzygb.errors import AdmissibilityError, ClosureError, DomainError
from fuzzygb.linalg import commutator, identity, matfun_diag, operator_norm
from fuzzygb.surfaces import (
    SurfaceKind,
    SurfaceSpec,
    axisym_embedding,
    axisym_representation,
    calibrate_hbar,
    casimir_defect,
    default_domain,
    fhat_sq_closed_form_quartic,
    fhat_squared,
    fsq_mismatch,
    sphere_embedding,
    su2_generators,
    torus_embedding,
    wk_sq_closed_form_quartic,
)

SPHERE_FSQ = SurfaceSpec.axisymmetric([1, 0, -1])
QUARTIC = SurfaceSpec.axisymmetric([1, 0, 0, 0, -1])


def sphere_hbar(n):
    return 2 / math.sqrt(n * n - 1)


def test_su2_n2_is_half_pauli():
    s1, s2, s3 = su2_generators(2)
    np.testing.assert_allclose(s1, [[0, 0.5], [0.5, 0]])
    np.testing.assert_allclose(s2, [[0, -0.5j], [0.5j, 0]])
    np.testing.assert_allclose(s3, np.diag([0.5, -0.5]))


def test_su2_n3():
    s1, s2, s3 = su2_generators(3)
    np.testing.assert_array_equal(s3, np.diag([1, 0, -1]))
    np.testing.assert_allclose(s1 @ s1 + s2 @ s2 + s3 @ s3, 2 * identity(3), atol=1e-15)


@pytest.mark.parametrize("n", range(2, 65))
def test_su2_relations(n):
    s1, s2, s3 = su2_generators(n)
    assert operator_norm(commutator(s1, s2) - 1j * s3) < 1e-12 * n
    assert operator_norm(commutator(s2, s3) - 1j * s1) < 1e-12 * n
    cas = s1 @ s1 + s2 @ s2 + s3 @ s3
    assert operator_norm(cas - (n * n - 1) / 4 * identity(n)) < 1e-12 * n * n


def test_su2_domain():
    with pytest.raises(DomainError):
        su2_generators(1)


def test_sphere_embedding_n2():
    e = sphere_embedding(2)
    pauli = [np.array([[0, 1], [1, 0]]), np.array([[0, -1j], [1j, 0]]), np.diag([1, -1])]
    for x, p in zip(e.X, pauli):
        np.testing.assert_allclose(x, p / math.sqrt(3), atol=1e-15)
    np.testing.assert_allclose(sum(x @ x for x in e.X), identity(2), atol=1e-15)


@pytest.mark.parametrize("n", [2, 5, 10, 40])
def test_sphere_embedding_relations(n):
    e = sphere_embedding(n)
    X1, X2, X3 = e.X
    assert operator_norm(commutator(X1, X2) - 1j * e.hbar * X3) < 1e-13
    assert operator_norm(sum(x @ x for x in e.X) - identity(n)) < 1e-13
    assert e.normals[0] is not None and all(np.array_equal(a, b) for a, b in zip(e.normals[0], e.X))
    assert e.ambient_dim == 3


def test_sphere_hbar_10():
    assert sphere_embedding(10).hbar == pytest.approx(0.2010, abs=5e-5)


@pytest.mark.parametrize("n", [2, 3, 8, 33])
def test_torus_embedding_relations(n):
    e = torus_embedding(n)
    X = e.X
    assert e.ambient_dim == 4 and len(e.normals) == 2
    assert np.max(np.abs(commutator(X[0], X[1]))) < 1e-14
    assert np.max(np.abs(commutator(X[2], X[3]))) < 1e-14
    total = sum(commutator(a, b) @ commutator(a, b) for a in X for b in X)
    assert operator_norm(-total / e.hbar**2 - 2 * identity(n)) < 1e-12
    assert operator_norm(sum(x @ x for x in X) - identity(n)) < 1e-14
    plus, minus = e.normals
    assert np.array_equal(minus[2], -plus[2]) and np.array_equal(minus[0], plus[0])


def test_axisym_quartic_n3_by_hand():
    hbar = 1 / math.sqrt(2)
    rep = axisym_representation(QUARTIC, 3, hbar)
    np.testing.assert_allclose(rep.z, [hbar, 0, -hbar])
    np.testing.assert_allclose(rep.Q, [1, 0, -1], atol=1e-15)
    np.testing.assert_allclose(rep.w_sq, [1, 1, 0], atol=1e-15)
    np.testing.assert_allclose(np.diag(fhat_squared(rep)).real, [0.5, 1, 0.5], atol=1e-15)
    assert casimir_defect(rep) < 1e-14


def test_axisym_z_spectrum():
    for n in (2, 7, 64):
        hbar = sphere_hbar(n)
        rep = axisym_representation(QUARTIC, n, hbar)
        gaps = -np.diff(rep.z)
        assert np.ptp(gaps) < 1e-15
        assert gaps[0] == pytest.approx(hbar)
        assert rep.z[0] - rep.z[-1] == pytest.approx(hbar * (n - 1))
        k = np.arange(1, n + 1)
        np.testing.assert_array_equal(rep.z, hbar / 2 * (n + 1 - 2 * k))


@pytest.mark.parametrize("n", [3, 4, 17, 100])
def test_axisym_sphere_recovers_su2(n):
    hbar = sphere_hbar(n)
    rep = axisym_representation(SPHERE_FSQ, n, hbar)
    X, Y, Z = axisym_embedding(rep).X
    assert operator_norm(X @ X + Y @ Y + Z @ Z - identity(n)) < 1e-12
    # ladder weights: w_k = hbar * sqrt(j(j+1) - m(m-1)) with m = z_k / hbar
    s1, s2, _ = su2_generators(n)
    np.testing.assert_allclose(rep.w, hbar * np.abs(np.diag(s1 + 1j * s2, 1)), atol=1e-13)
    np.testing.assert_allclose(fhat_squared(rep), identity(n) - rep.Z @ rep.Z, atol=1e-13)


@pytest.mark.parametrize("spec", [SPHERE_FSQ, QUARTIC], ids=["sphere", "quartic"])
@pytest.mark.parametrize("n", [2, 5, 32])
def test_axisym_commutation_relations(spec, n):
    rep = axisym_representation(spec, n, sphere_hbar(n))
    X, Y, Z = axisym_embedding(rep).X
    h = rep.hbar
    assert operator_norm(commutator(Z, X) - 1j * h * Y) < 1e-13
    assert operator_norm(commutator(Y, Z) - 1j * h * X) < 1e-13
    assert operator_norm(commutator(X, Y) + 1j * h * matfun_diag(Z, spec.ffprime)) < 1e-13
    W = rep.W
    assert operator_norm(commutator(rep.Z, W) - h * W) < 1e-13


@pytest.mark.parametrize("n", [3, 4, 10, 57, 256])
def test_wk_closed_form(n):
    hbar = sphere_hbar(n)
    rep = axisym_representation(QUARTIC, n, hbar)
    closed = wk_sq_closed_form_quartic(n, hbar)
    assert abs(closed[-1]) < 1e-12
    np.testing.assert_allclose(rep.w_sq[:-1], closed[:-1], rtol=1e-10)
    np.testing.assert_allclose(np.diag(fhat_squared(rep)).real, fhat_sq_closed_form_quartic(n, hbar), rtol=1e-10)


@pytest.mark.parametrize("n", [3, 8, 31, 128])
def test_casimir_quartic(n):
    assert casimir_defect(axisym_representation(QUARTIC, n, sphere_hbar(n))) < 1e-12


def test_casimir_scalar_other_hbar():
    # with another hbar the Casimir is still scalar, equal to hbar^4 (N^2-1)^2 / 16
    n, hbar = 9, 0.05
    assert casimir_defect(axisym_representation(QUARTIC, n, hbar)) < 1e-14


@pytest.mark.parametrize("spec", [SPHERE_FSQ, QUARTIC], ids=["sphere", "quartic"])
def test_closure_automatic_for_odd_ffprime(spec):
    for n in (2, 9, 40):
        rep = axisym_representation(spec, n, sphere_hbar(n))
        assert abs(np.sum(rep.Q)) < 1e-13


def test_fhat_sq_converges_to_fsq():
    for spec in (SPHERE_FSQ, QUARTIC):
        errs = [fsq_mismatch(axisym_representation(spec, n, sphere_hbar(n))) for n in (8, 32, 128)]
        assert errs[-1] < errs[0] / 10 or errs[-1] < 1e-12
    # the quartic shows a genuine finite-N discrepancy
    assert fsq_mismatch(axisym_representation(QUARTIC, 8, sphere_hbar(8))) > 1e-3


def test_closure_error():
    asym = SurfaceSpec.axisymmetric([1, 0.3, -1])
    with pytest.raises(ClosureError):
        axisym_representation(asym, 10, sphere_hbar(10))


def test_admissibility_error():
    spec = SurfaceSpec.axisymmetric([1, 0, 1, 0, -2])
    with pytest.raises(AdmissibilityError):
        axisym_representation(spec, 3, 0.3)


def test_calibration_reproduces_sphere_rule():
    for n in (4, 11, 30):
        assert calibrate_hbar(SPHERE_FSQ, n) == pytest.approx(sphere_hbar(n), rel=1e-6)


def test_calibration_quartic_beats_rule():
    n = 12
    h = calibrate_hbar(QUARTIC, n)
    assert 0 < h <= 2 / (n - 1)
    assert fsq_mismatch(axisym_representation(QUARTIC, n, h)) <= fsq_mismatch(
        axisym_representation(QUARTIC, n, sphere_hbar(n))
    ) + 1e-12


def test_surface_spec_validation():
    assert QUARTIC.domain == pytest.approx((-1.0, 1.0))
    assert default_domain(Polynomial([4, 0, -1])) == pytest.approx((-2.0, 2.0))
    with pytest.raises(DomainError):
        SurfaceSpec.axisymmetric([1, 0, 1])  # no real roots
    with pytest.raises(DomainError):
        SurfaceSpec.axisymmetric([1, 0, -1], domain=(-0.5, 1.0))
    with pytest.raises(DomainError):
        SurfaceSpec(SurfaceKind.ROUND_SPHERE, Polynomial([1]))
    spec = SurfaceSpec.axisymmetric([1, 0, -1], domain=(-1.0, 1.0))
    assert spec.ffprime == Polynomial([0, -1])
