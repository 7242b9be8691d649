"""Dense complex matrix kernels.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``. Every
function here is pure: inputs are never modified and results are fresh arrays.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import numpy.linalg as npl
from numpy.polynomial import Polynomial

from .errors import CertificationError, DefinitenessError, NumericError, ShapeError

TOL_SCALE_ENV = "FUZZYGB_TOL_SCALE"


@dataclass(frozen=True)
class Tolerances:
    herm: float = 1e-10
    eig: float = 1e-10
    psd: float = 1e-8
    closure: float = 1e-9
    commutation: float = 1e-9
    diagonal_K: float = 1e-8

    def scaled(self, factor: float) -> "Tolerances":
        return Tolerances(**{k: v * factor for k, v in self.__dict__.items()})


def tolerances() -> Tolerances:
    """Default tolerances multiplied by ``$FUZZYGB_TOL_SCALE`` (read on every call)."""
    raw = os.environ.get(TOL_SCALE_ENV)
    if raw is None or raw.strip() == "":
        return Tolerances()
    try:
        factor = float(raw)
    except ValueError:
        raise ValueError(f"{TOL_SCALE_ENV} must be a positive float, got {raw!r}") from None
    if not np.isfinite(factor) or factor <= 0:
        raise ValueError(f"{TOL_SCALE_ENV} must be a positive float, got {raw!r}")
    return Tolerances().scaled(factor)


def as_cmatrix(a) -> np.ndarray:
    """Validate and convert ``a`` to a square, finite complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ShapeError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeError("matrix has NaN or infinite entries")
    return m


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.complex128)


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``ab - ba``."""
    if a.shape != b.shape:
        raise ShapeError(f"commutator of mismatched shapes {a.shape} and {b.shape}")
    return a @ b - b @ a


def anticommutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise ShapeError(f"anticommutator of mismatched shapes {a.shape} and {b.shape}")
    return a @ b + b @ a


def dagger(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T.copy()


def _solver_failure(exc: Exception) -> NumericError:
    # LAPACK reports the failing iteration through `info`, which numpy only
    # surfaces inside the message text.
    iterations = None
    for token in str(exc).replace(",", " ").split():
        if token.isdigit():
            iterations = int(token)
            break
    return NumericError(f"eigensolver did not converge: {exc}", iterations=iterations)


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value of ``a``."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    if not np.all(np.isfinite(a)):
        raise NumericError("operator norm of a matrix with non-finite entries")
    try:
        return float(npl.norm(a, 2))
    except npl.LinAlgError as exc:
        raise _solver_failure(exc) from exc


def norm_within(a: np.ndarray, bound: float) -> bool:
    """``||a|| <= bound`` in operator norm; the Frobenius norm is tried first as a cheap upper bound."""
    if npl.norm(a, "fro") <= bound:
        return True
    return operator_norm(a) <= bound


@dataclass(frozen=True)
class HermitianCertificate:
    """Record of how far ``subject`` is from hermitian, in operator norm."""

    subject: np.ndarray
    max_asymmetry: float

    @cached_property
    def scale(self) -> float:
        return operator_norm(self.subject)

    def passes(self, tol: float | None = None) -> bool:
        if self.max_asymmetry == 0.0:
            return True
        if tol is None:
            tol = tolerances().herm
        return self.max_asymmetry <= tol * max(self.scale, np.finfo(float).tiny)


def certify_hermitian(a: np.ndarray) -> HermitianCertificate:
    a = as_cmatrix(a)
    skew = a - dagger(a)
    asym = 0.0 if not np.any(skew) else operator_norm(skew)
    return HermitianCertificate(a, asym)


def require_hermitian(a: np.ndarray, what: str = "matrix") -> np.ndarray:
    cert = certify_hermitian(a)
    if not cert.passes():
        raise CertificationError(
            f"{what} is not hermitian: ||A - A^dagger|| = {cert.max_asymmetry:.3e} "
            f"with ||A|| = {cert.scale:.3e}"
        )
    return cert.subject


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + dagger(a))


def _eigh(a: np.ndarray, vectors: bool):
    try:
        if vectors:
            return npl.eigh(hermitian_part(a))
        return npl.eigvalsh(hermitian_part(a))
    except npl.LinAlgError as exc:
        raise _solver_failure(exc) from exc


def hermitian_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a certified hermitian matrix."""
    a = require_hermitian(a)
    return _eigh(a, vectors=False)


def hermitian_eigh(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = require_hermitian(a)
    return _eigh(a, vectors=True)


def hermitian_function(eigvals: np.ndarray, eigvecs: np.ndarray, fn) -> np.ndarray:
    """Rebuild ``V diag(fn(eigvals)) V^dagger``."""
    return (eigvecs * fn(eigvals)) @ dagger(eigvecs)


def psd_eigh(a: np.ndarray, what: str = "matrix") -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a PSD matrix with small negative eigenvalues clamped to zero.

    Raises DefinitenessError when some eigenvalue is below ``-tol_psd * ||a||``.
    """
    lam, vec = hermitian_eigh(a)
    scale = max(float(np.max(np.abs(lam))), np.finfo(float).tiny)
    floor = -tolerances().psd * scale
    if lam[0] < floor:
        raise DefinitenessError(
            f"{what} has eigenvalue {lam[0]:.6e} below the PSD floor {floor:.3e}"
        )
    return np.clip(lam, 0.0, None), vec


def hermitian_sqrt(a: np.ndarray) -> np.ndarray:
    """Principal square root of a hermitian positive semidefinite matrix."""
    lam, vec = psd_eigh(a)
    return hermitian_function(lam, vec, np.sqrt)


def trace(a: np.ndarray) -> complex:
    return complex(np.trace(a))


def matfun_diag(z: np.ndarray, p: Polynomial) -> np.ndarray:
    """Apply the real polynomial ``p`` to a diagonal matrix ``z``."""
    z = as_cmatrix(z)
    off = z - np.diag(np.diag(z))
    scale = max(float(np.max(np.abs(z))), 1.0)
    if np.max(np.abs(off), initial=0.0) > tolerances().herm * scale:
        raise ShapeError("matfun_diag requires a diagonal matrix")
    return np.diag(p(np.diag(z).real).astype(np.complex128))
