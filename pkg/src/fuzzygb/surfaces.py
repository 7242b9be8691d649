"""Fuzzy sphere, fuzzy Clifford torus and axially symmetric fuzzy surfaces."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import Polynomial

from .errors import (
    AdmissibilityError,
    ClosureError,
    ConstructionError,
    DomainError,
    ShapeError,
)
from .linalg import (
    commutator,
    dagger,
    identity,
    matfun_diag,
    norm_within,
    operator_norm,
    require_hermitian,
    tolerances,
)
from .regularization import clock_shift, sphere_hbar, torus_hbar


class SurfaceKind(enum.Enum):
    ROUND_SPHERE = "sphere"
    CLIFFORD_TORUS = "torus"
    AXISYMMETRIC = "axisym"


@dataclass(frozen=True)
class SurfaceSpec:
    """Which surface to build.

    For ``AXISYMMETRIC`` the surface is ``x^2 + y^2 = fsq(z)`` with ``fsq`` a
    real polynomial (ascending coefficients) and ``domain = (z_minus, z_plus)``.
    """

    kind: SurfaceKind
    fsq: Polynomial | None = None
    domain: tuple[float, float] | None = None

    def __post_init__(self):
        if self.kind is SurfaceKind.AXISYMMETRIC:
            if self.fsq is None:
                raise DomainError("axisymmetric surfaces need an f^2 polynomial")
            if self.domain is None:
                object.__setattr__(self, "domain", default_domain(self.fsq))
            validate_axisym_domain(self.fsq, self.domain)
        elif self.fsq is not None:
            raise DomainError(f"{self.kind.value} surfaces take no f^2 polynomial")

    @classmethod
    def axisymmetric(cls, coeffs, domain=None) -> "SurfaceSpec":
        return cls(SurfaceKind.AXISYMMETRIC, Polynomial(np.asarray(coeffs, dtype=float)), domain)

    @property
    def ffprime(self) -> Polynomial:
        """``f f' = (f^2)' / 2``."""
        return self.fsq.deriv() / 2


ROUND_SPHERE = SurfaceSpec(SurfaceKind.ROUND_SPHERE)
CLIFFORD_TORUS = SurfaceSpec(SurfaceKind.CLIFFORD_TORUS)


def default_domain(fsq: Polynomial) -> tuple[float, float]:
    """Real roots of ``fsq`` bounding the surface, when there are exactly two simple ones."""
    roots = fsq.roots()
    real = np.sort(roots[np.abs(roots.imag) <= 1e-9 * max(1.0, np.max(np.abs(roots)))].real)
    deriv = fsq.deriv()
    simple = [r for r in real if abs(deriv(r)) > 1e-9]
    if len(real) != 2 or len(simple) != 2:
        raise DomainError(
            f"cannot infer the z-domain: f^2 has real roots {real.tolist()}; pass it explicitly"
        )
    lo = min(simple, key=lambda r: abs(r + 1.0))
    hi = max(simple, key=lambda r: -abs(r - 1.0))
    return float(lo), float(hi)


def validate_axisym_domain(fsq: Polynomial, domain: tuple[float, float], samples: int = 1000):
    lo, hi = domain
    if not lo < hi:
        raise DomainError(f"empty domain [{lo}, {hi}]")
    scale = max(1.0, float(np.max(np.abs(fsq.coef))))
    z = np.linspace(lo, hi, samples + 2)[1:-1]
    if np.any(fsq(z) <= 0):
        raise DomainError("f^2 must be positive on the open domain")
    for end in (lo, hi):
        if abs(fsq(end)) > 1e-9 * scale:
            raise DomainError(f"f^2 must vanish at the domain end {end} (got {fsq(end):.3e})")


@dataclass(frozen=True)
class EmbeddingSet:
    """Hermitian embedding matrices X^1..X^m, optionally with normals N_A^i."""

    X: tuple[np.ndarray, ...]
    hbar: float
    normals: tuple[tuple[np.ndarray, ...], ...] | None = None

    def __post_init__(self):
        X = tuple(require_hermitian(x, f"X^{i + 1}") for i, x in enumerate(self.X))
        object.__setattr__(self, "X", X)
        if len({x.shape for x in X}) != 1:
            raise ShapeError("embedding matrices must share a dimension")
        if self.normals is not None:
            normals = tuple(tuple(np.asarray(v, dtype=np.complex128) for v in nA) for nA in self.normals)
            for nA in normals:
                if len(nA) != len(X):
                    raise ShapeError("each normal needs one matrix per ambient coordinate")
            object.__setattr__(self, "normals", normals)
        if not self.hbar > 0:
            raise DomainError("hbar must be positive")

    @property
    def ambient_dim(self) -> int:
        return len(self.X)

    @property
    def N(self) -> int:
        return self.X[0].shape[0]

    def conjugated(self, u: np.ndarray) -> "EmbeddingSet":
        """Apply ``A -> U A U^dagger`` to every matrix."""
        ud = dagger(u)
        X = tuple(u @ x @ ud for x in self.X)
        normals = None
        if self.normals is not None:
            normals = tuple(tuple(u @ v @ ud for v in nA) for nA in self.normals)
        return EmbeddingSet(X, self.hbar, normals)


# -- round sphere ------------------------------------------------------------


def su2_generators(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Spin-(N-1)/2 generators; S3 = diag(j, j-1, ..., -j)."""
    if n < 2:
        raise DomainError(f"su(2) irrep needs N >= 2, got {n}")
    j = (n - 1) / 2
    m = j - np.arange(n)
    # <m+1| S+ |m> sits at (row of m+1, column of m) = (k-1, k)
    raise_amp = np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    s_plus = np.diag(raise_amp, 1).astype(np.complex128)
    s_minus = dagger(s_plus)
    s1 = (s_plus + s_minus) / 2
    s2 = (s_plus - s_minus) / 2j
    s3 = np.diag(m).astype(np.complex128)
    return s1, s2, s3


def sphere_embedding(n: int) -> EmbeddingSet:
    hbar = sphere_hbar(n)
    X = tuple(hbar * s for s in su2_generators(n))
    return EmbeddingSet(X, hbar, normals=(X,))


def torus_embedding(n: int) -> EmbeddingSet:
    g, h = clock_shift(n)
    c = 1.0 / (2.0 * math.sqrt(2.0))
    gd, hd = dagger(g), dagger(h)
    X = (c * (gd + g), 1j * c * (gd - g), c * (hd + h), 1j * c * (hd - h))
    X = tuple(0.5 * (x + dagger(x)) for x in X)
    plus = X
    minus = (X[0], X[1], -X[2], -X[3])
    return EmbeddingSet(X, torus_hbar(n), normals=(plus, minus))


# -- axially symmetric surfaces ----------------------------------------------


@dataclass(frozen=True)
class AxisymRepresentation:
    """Diagonal Z and upper-bidiagonal W with ``[Z, W] = hbar W``."""

    spec: SurfaceSpec
    hbar: float
    z: np.ndarray
    w_sq: np.ndarray  # w_1^2 .. w_N^2 (the last entry is the closure residual)
    Q: np.ndarray
    W: np.ndarray = field(repr=False)
    Z: np.ndarray = field(repr=False)

    @property
    def N(self) -> int:
        return len(self.z)

    @property
    def w(self) -> np.ndarray:
        return np.sqrt(np.clip(self.w_sq[:-1], 0.0, None))


def axisym_z(n: int, hbar: float) -> np.ndarray:
    k = np.arange(1, n + 1)
    return 0.5 * hbar * (n + 1 - 2 * k)


def axisym_representation(spec: SurfaceSpec, n: int, hbar: float) -> AxisymRepresentation:
    if spec.kind is not SurfaceKind.AXISYMMETRIC:
        raise DomainError("axisym_representation needs an axisymmetric surface spec")
    if n < 2:
        raise DomainError(f"need N >= 2, got {n}")
    if not hbar > 0:
        raise DomainError("hbar must be positive")

    z = axisym_z(n, hbar)
    Q = -2.0 * hbar * spec.ffprime(z)
    w_sq = np.cumsum(Q)
    tol = tolerances().closure * max(float(np.max(np.abs(w_sq))), np.finfo(float).tiny)
    if abs(w_sq[-1]) > tol:
        raise ClosureError(f"w_N^2 = {w_sq[-1]:.3e} exceeds closure tolerance {tol:.3e}")
    w_sq[-1] = 0.0
    if np.any(w_sq[:-1] < -tol):
        k = int(np.argmin(w_sq[:-1])) + 1
        raise AdmissibilityError(
            f"w_{k}^2 = {w_sq[k - 1]:.3e} < 0 for N={n}, hbar={hbar:.6g}"
        )
    w = np.sqrt(np.clip(w_sq[:-1], 0.0, None))
    W = np.diag(w, 1).astype(np.complex128)
    Z = np.diag(z).astype(np.complex128)
    return AxisymRepresentation(spec, float(hbar), z, w_sq, Q, W, Z)


def axisym_embedding(rep: AxisymRepresentation) -> EmbeddingSet:
    """X = (W + W^dagger)/2, Y = (W - W^dagger)/2i, Z; the three commutators are checked.

    The relations enforced are ``[X,Y] = i hbar {x,y} = -i hbar ff'(Z)``,
    ``[Y,Z] = i hbar X`` and ``[Z,X] = i hbar Y``.
    """
    W, Z, hbar = rep.W, rep.Z, rep.hbar
    Wd = dagger(W)
    X = (W + Wd) / 2
    Y = (W - Wd) / 2j
    # ||Z|| is its largest |z_k|; ||X||, ||Y|| <= ||W|| = max w_k
    scale = max(float(np.max(np.abs(rep.z))), float(np.max(rep.w, initial=0.0)), 1e-300)
    tol = tolerances().commutation * hbar * scale
    checks = {
        "[X,Y] + i hbar ff'(Z)": commutator(X, Y) + 1j * hbar * matfun_diag(Z, rep.spec.ffprime),
        "[Y,Z] - i hbar X": commutator(Y, Z) - 1j * hbar * X,
        "[Z,X] - i hbar Y": commutator(Z, X) - 1j * hbar * Y,
    }
    for name, residual in checks.items():
        if not norm_within(residual, tol):
            raise ConstructionError(f"{name} has norm {operator_norm(residual):.3e} > {tol:.3e}")
    return EmbeddingSet((X, Y, Z), hbar)


def fhat_squared(rep: AxisymRepresentation) -> np.ndarray:
    """``X^2 + Y^2 = (W W^dagger + W^dagger W) / 2`` as a diagonal matrix."""
    padded = np.concatenate([[0.0], rep.w_sq[:-1], [0.0]])
    return np.diag(0.5 * (padded[1:] + padded[:-1])).astype(np.complex128)


def casimir_defect(rep: AxisymRepresentation) -> float:
    """``||X^2 + Y^2 + Z^4 + hbar^2 Z^2 - hbar^4 (N^2-1)^2/16||`` for ``f^2 = 1 - z^4``."""
    e = axisym_embedding(rep)
    X, Y, Z = e.X
    n, hbar = rep.N, rep.hbar
    Z2 = Z @ Z
    Qm = X @ X + Y @ Y + Z2 @ Z2 + hbar**2 * Z2
    return operator_norm(Qm - hbar**4 * (n * n - 1) ** 2 / 16 * identity(n))


def fsq_mismatch(rep: AxisymRepresentation) -> float:
    """``||fhat^2 - f^2(Z)||``."""
    return operator_norm(fhat_squared(rep) - matfun_diag(rep.Z, rep.spec.fsq))


def calibrate_hbar(spec: SurfaceSpec, n: int, iters: int = 200, xtol: float = 1e-14) -> float:
    """Golden-section search for hbar in (0, 2/(N-1)] minimizing ``||fhat^2 - f^2(Z)||``.

    hbar values whose representation is inadmissible score +inf.
    """
    if n < 2:
        raise DomainError(f"need N >= 2, got {n}")

    def cost(hbar: float) -> float:
        try:
            return fsq_mismatch(axisym_representation(spec, n, hbar))
        except (AdmissibilityError, ClosureError):
            return math.inf

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = 0.0, 2.0 / (n - 1)
    c, d = b - inv_phi * (b - a), a + inv_phi * (b - a)
    fc, fd = cost(c), cost(d)
    for _ in range(iters):
        if b - a <= xtol * b:
            break
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = cost(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = cost(d)
    best = 0.5 * (a + b)
    if not math.isfinite(cost(best)):
        raise AdmissibilityError(f"no admissible hbar found for N={n}")
    return best


def wk_sq_closed_form_quartic(n: int, hbar: float) -> np.ndarray:
    """Closed form of w_k^2 (k = 1..N) for ``f^2 = 1 - z^4``."""
    k = np.arange(1, n + 1, dtype=float)
    M = n + 1.0
    return hbar**4 / 2 * (
        M**3 * k - 3 * M**2 * k * (k + 1) + 2 * M * k * (k + 1) * (2 * k + 1) - 2 * k**2 * (k + 1) ** 2
    )


def fhat_sq_closed_form_quartic(n: int, hbar: float) -> np.ndarray:
    k = np.arange(1, n + 1, dtype=float)
    M = n + 1.0
    return hbar**4 / 4 * (
        M**3 * (2 * k - 1) - 6 * M**2 * k**2 + 4 * M * k * (2 * k**2 + 1) - 4 * k**2 * (k**2 + 1)
    )
