"""Discrete Gauss curvature, the density gamma-hat^2 and the discrete Euler characteristic.

All formulas assume a flat ambient space R^m. The ambient sectional-curvature
term of the general formula is kept as an optional matrix argument that
defaults to zero.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial
from scipy import integrate

from .errors import ConditioningError, ConsistencyError, DomainError, ShapeError
from .linalg import (
    commutator,
    dagger,
    hermitian_function,
    hermitian_part,
    matfun_diag,
    norm_within,
    operator_norm,
    psd_eigh,
    tolerances,
)
from .surfaces import (
    AxisymRepresentation,
    EmbeddingSet,
    SurfaceKind,
    SurfaceSpec,
    axisym_embedding,
    validate_axisym_domain,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class CurvatureReport:
    N: int
    hbar: float
    K_hat: np.ndarray = field(repr=False)
    gamma_sq: np.ndarray = field(repr=False)
    chi_hat: float
    ambient_sectional: np.ndarray = field(repr=False)
    diagnostics: dict = field(default_factory=dict)


def gamma_sq_from_embedding(e: EmbeddingSet) -> np.ndarray:
    """``-(1/hbar^2) sum_{i<j} [X^i, X^j]^2``."""
    X = e.X
    out = np.zeros_like(X[0])
    for i in range(len(X)):
        for j in range(i + 1, len(X)):
            c = commutator(X[i], X[j])
            out -= c @ c
    return out / e.hbar**2


def tr_S_sq_flat(e: EmbeddingSet, A: int) -> np.ndarray:
    """``-(1/hbar^2) sum_{i,j} [X^i, N_A^j][X^j, N_A^i]`` for normal number A (0-based)."""
    if e.normals is None:
        raise ValueError("embedding carries no normals")
    if not 0 <= A < len(e.normals):
        raise IndexError(f"normal index {A} out of range for {len(e.normals)} normals")
    X, NA = e.X, e.normals[A]
    m = len(X)
    c = [[commutator(X[i], NA[j]) for j in range(m)] for i in range(m)]
    out = np.zeros_like(X[0])
    for i in range(m):
        for j in range(m):
            out -= c[i][j] @ c[j][i]
    return out / e.hbar**2


def _inverse_gamma_powers(gamma_sq: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Return (gamma, gamma^-1, gamma^-2) with gamma the hermitian square root of gamma_sq."""
    lam, vec = psd_eigh(gamma_sq, "gamma-hat^2")
    scale = max(float(lam[-1]), np.finfo(float).tiny)
    if lam[0] <= tolerances().psd * scale:
        raise ConditioningError(
            f"gamma-hat^2 is singular: smallest eigenvalue {lam[0]:.3e}, largest {lam[-1]:.3e}"
        )
    return (
        hermitian_function(lam, vec, np.sqrt),
        hermitian_function(lam, vec, lambda x: 1.0 / np.sqrt(x)),
        hermitian_function(lam, vec, lambda x: 1.0 / x),
    )


def discrete_K(e: EmbeddingSet, gamma_sq: np.ndarray, ambient_sectional: np.ndarray | None = None) -> np.ndarray:
    """``K_12 - (1/2) sum_A gamma^-1 (tr S_A^2) gamma^-1`` using the embedding normals."""
    n = e.N
    K = np.zeros((n, n), dtype=np.complex128) if ambient_sectional is None else np.array(ambient_sectional, dtype=np.complex128)
    normals = e.normals or ()
    if not normals:
        return K
    _, g_inv, _ = _inverse_gamma_powers(gamma_sq)
    for A in range(len(normals)):
        K -= 0.5 * g_inv @ tr_S_sq_flat(e, A) @ g_inv
    return K


def _levi_civita_pairs():
    # (index, +1/-1) pairs for eps_{jkl} with j fixed: returns k, l, sign
    return {
        j: [((j + 1) % 3, (j + 2) % 3, 1.0), ((j + 2) % 3, (j + 1) % 3, -1.0)]
        for j in range(3)
    }


def discrete_K_r3(e: EmbeddingSet, gamma_sq: np.ndarray) -> np.ndarray:
    """Normal-free curvature in R^3.

    ``-(1/8 hbar^4) eps_jkl eps_ipq gamma^-2 [X^i,[X^k,X^l]] [X^j,[X^p,X^q]] gamma^-2``
    """
    if e.ambient_dim != 3:
        raise ShapeError(f"the R^3 formula needs three embedding matrices, got {e.ambient_dim}")
    X = e.X
    eps = _levi_civita_pairs()
    # D[i][j] = sum_{k,l} eps_jkl [X^i, [X^k, X^l]]
    inner = {(k, l): commutator(X[k], X[l]) for j in range(3) for k, l, _ in eps[j]}
    D = [
        [sum(s * commutator(X[i], inner[k, l]) for k, l, s in eps[j]) for j in range(3)]
        for i in range(3)
    ]
    S = np.zeros_like(X[0])
    for i in range(3):
        for j in range(3):
            S += D[i][j] @ D[j][i]
    _, _, g_inv2 = _inverse_gamma_powers(gamma_sq)
    return -(g_inv2 @ S @ g_inv2) / (8.0 * e.hbar**4)


def axisym_gamma_sq(rep: AxisymRepresentation) -> np.ndarray:
    """``(W W^dagger + W^dagger W)/2 + (ff')^2(Z)``."""
    W, Wd = rep.W, dagger(rep.W)
    phi = matfun_diag(rep.Z, rep.spec.ffprime)
    return 0.5 * (W @ Wd + Wd @ W) + phi @ phi


def axisym_K(rep: AxisymRepresentation, gamma_sq: np.ndarray | None = None) -> np.ndarray:
    """``gamma^-2 {(ff')^2(Z) + (1/2hbar)([W, ff'(Z)] W^dagger + W^dagger [W, ff'(Z)])} gamma^-2``.

    ``gamma_sq`` defaults to ``gamma_sq_from_embedding(axisym_embedding(rep))``.
    """
    if gamma_sq is None:
        gamma_sq = gamma_sq_from_embedding(axisym_embedding(rep))
    _, _, g_inv2 = _inverse_gamma_powers(gamma_sq)
    W, Wd, hbar = rep.W, dagger(rep.W), rep.hbar
    phi = matfun_diag(rep.Z, rep.spec.ffprime)
    cw = commutator(W, phi)
    inner = phi @ phi + (cw @ Wd + Wd @ cw) / (2.0 * hbar)
    K = g_inv2 @ inner @ g_inv2
    off = K - np.diag(np.diag(K))
    # max |K_kk| is a lower bound for ||K||
    knorm = max(float(np.max(np.abs(np.diag(K)))), np.finfo(float).tiny)
    if not norm_within(off, tolerances().diagonal_K * knorm):
        raise ConsistencyError(
            f"axisymmetric K-hat is not diagonal: off-diagonal norm {operator_norm(off):.3e}"
        )
    return K


def euler_characteristic(K_hat: np.ndarray, gamma_sq: np.ndarray, hbar: float, *, return_residual: bool = False):
    """``hbar Tr(sqrt(gamma^2) K)``; the imaginary part is a rounding residual and is dropped."""
    lam, vec = psd_eigh(gamma_sq, "gamma-hat^2")
    gamma = hermitian_function(lam, vec, np.sqrt)
    val = hbar * np.trace(gamma @ K_hat)
    residual = abs(val.imag)
    n = K_hat.shape[0]
    if residual > tolerances().herm * n:
        log.warning("chi-hat imaginary residual %.3e exceeds %.3e", residual, tolerances().herm * n)
    if return_residual:
        return float(val.real), float(residual)
    return float(val.real)


def _hermiticity_residual(a: np.ndarray) -> float:
    return operator_norm(a - dagger(a))


def curvature_report(
    e: EmbeddingSet,
    *,
    route: str = "auto",
    ambient_sectional: np.ndarray | None = None,
    rep: AxisymRepresentation | None = None,
) -> CurvatureReport:
    """Compute gamma-hat^2, K-hat and chi-hat for one embedding.

    ``route`` is ``"normals"``, ``"r3"``, ``"axisym"`` (needs ``rep``) or
    ``"auto"``: normals when present, else the R^3 formula.
    """
    n = e.N
    gamma_sq = gamma_sq_from_embedding(e)
    if route == "auto":
        route = "normals" if e.normals else "r3"
    if route == "normals":
        K = discrete_K(e, gamma_sq, ambient_sectional)
    elif route == "r3":
        K = discrete_K_r3(e, gamma_sq)
    elif route == "axisym":
        if rep is None:
            raise ValueError("the axisym route needs the AxisymRepresentation")
        K = axisym_K(rep, gamma_sq)
    else:
        raise ValueError(f"unknown curvature route {route!r}")
    if ambient_sectional is not None and route != "normals":
        K = K + ambient_sectional
    chi, residual = euler_characteristic(K, gamma_sq, e.hbar, return_residual=True)
    lam_min = float(np.linalg.eigvalsh(hermitian_part(gamma_sq))[0])
    diagnostics = {
        "route": route,
        "K_hermiticity_residual": _hermiticity_residual(K),
        "gamma_sq_hermiticity_residual": _hermiticity_residual(gamma_sq),
        "gamma_sq_min_eigenvalue": lam_min,
        "chi_imag_residual": residual,
    }
    zero = np.zeros((n, n), dtype=np.complex128)
    return CurvatureReport(
        n,
        e.hbar,
        K,
        gamma_sq,
        chi,
        zero if ambient_sectional is None else np.asarray(ambient_sectional, dtype=np.complex128),
        diagnostics,
    )


# -- classical reference -----------------------------------------------------


@dataclass(frozen=True)
class ClassicalAxisymGeometry:
    """Smooth geometry of ``x^2 + y^2 = f^2(z)``, written in terms of ``f^2`` and ``ff'``."""

    fsq: Polynomial
    domain: tuple[float, float]
    chi_classical: float
    K: Callable[[np.ndarray], np.ndarray]
    sqrt_g: Callable[[np.ndarray], np.ndarray]

    def gauss_bonnet_integrand(self, z):
        """``K sqrt(g)`` per unit z (the v-integral already divided out by 2 pi)."""
        return self.K(z) * self.sqrt_g(z)

    def chi_quadrature(self) -> float:
        """``(1/2pi) integral K sqrt(g) dz dv`` by adaptive quadrature."""
        val, _ = integrate.quad(self.gauss_bonnet_integrand, *self.domain, epsabs=1e-12, epsrel=1e-12, limit=200)
        return float(val)


def classical_axisym(spec: SurfaceSpec) -> ClassicalAxisymGeometry:
    """Classical curvature, area density and Euler characteristic for h(u) = u = z.

    With ``phi = ff' = (f^2)'/2``:
    ``K = (phi^2 - phi' f^2) / (f^2 + phi^2)^2`` and ``sqrt(g) = sqrt(f^2 + phi^2)``.
    The antiderivative of ``K sqrt(g)`` is ``-phi / sqrt(f^2 + phi^2)``, finite
    at the poles even though f' diverges there.
    """
    if spec.kind is not SurfaceKind.AXISYMMETRIC:
        raise DomainError("classical_axisym needs an axisymmetric surface spec")
    fsq = spec.fsq
    validate_axisym_domain(fsq, spec.domain)
    phi = fsq.deriv() / 2
    dphi = phi.deriv()

    def K(z):
        z = np.asarray(z, dtype=float)
        return (phi(z) ** 2 - dphi(z) * fsq(z)) / (fsq(z) + phi(z) ** 2) ** 2

    def sqrt_g(z):
        z = np.asarray(z, dtype=float)
        return np.sqrt(fsq(z) + phi(z) ** 2)

    def antiderivative(z):
        return -phi(z) / math.sqrt(fsq(z) + phi(z) ** 2)

    lo, hi = spec.domain
    for end in (lo, hi):
        if phi(end) == 0:
            raise DomainError(f"f^2 has a multiple root at {end}; pole is not smooth")
    chi = antiderivative(hi) - antiderivative(lo)
    return ClassicalAxisymGeometry(fsq, (lo, hi), float(chi), K, sqrt_g)
