"""Quantization maps and numerical meters for the matrix-regularization axioms.

The fuzzy torus has an explicit map on Fourier modes,
``T(Y_m) = omega^(m1 m2 / 2) g^m1 h^m2``, so all four axioms (norm, product,
bracket, trace) can be measured directly. The sphere only gets coordinate
monomials up to degree 3, Weyl-symmetrized.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DomainError
from .linalg import commutator, dagger, identity, operator_norm, trace


class HbarKind(enum.Enum):
    SPHERE = "sphere_rule"
    TORUS = "torus_rule"
    EXPLICIT = "explicit"


@dataclass(frozen=True)
class HbarRule:
    """hbar as a function of the matrix dimension N."""

    kind: HbarKind
    explicit_value: float | None = None

    def __post_init__(self):
        if self.kind is HbarKind.EXPLICIT:
            if self.explicit_value is None or not self.explicit_value > 0:
                raise DomainError("explicit hbar must be a positive number")

    def value(self, n: int) -> float:
        if self.kind is HbarKind.EXPLICIT:
            return float(self.explicit_value)
        if n < 2:
            raise DomainError(f"hbar rule needs N >= 2, got {n}")
        if self.kind is HbarKind.SPHERE:
            return sphere_hbar(n)
        return torus_hbar(n)

    __call__ = value


def sphere_hbar(n: int) -> float:
    if n < 2:
        raise DomainError(f"sphere hbar needs N >= 2, got {n}")
    return 2.0 / math.sqrt(n * n - 1)


def torus_hbar(n: int) -> float:
    if n < 2:
        raise DomainError(f"torus hbar needs N >= 2, got {n}")
    return math.sin(math.pi / n)


SPHERE_RULE = HbarRule(HbarKind.SPHERE)
TORUS_RULE = HbarRule(HbarKind.TORUS)


@dataclass(frozen=True)
class FourierMode:
    m1: int
    m2: int

    def __add__(self, other: "FourierMode") -> "FourierMode":
        return FourierMode(self.m1 + other.m1, self.m2 + other.m2)

    def cross(self, other: "FourierMode") -> int:
        return self.m1 * other.m2 - self.m2 * other.m1

    @property
    def is_zero(self) -> bool:
        return self.m1 == 0 and self.m2 == 0


def _mode(m) -> FourierMode:
    if isinstance(m, FourierMode):
        return m
    m1, m2 = m
    return FourierMode(int(m1), int(m2))


@dataclass(frozen=True)
class AxiomDefectReport:
    N: int
    hbar: float
    bracket_defect: float
    product_defect: float
    trace_defect: float
    unitality_defect: float


# -- torus -------------------------------------------------------------------


def clock_shift(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Clock matrix g and shift matrix h with ``h g = omega g h``, ``omega = exp(2 pi i / N)``."""
    if n < 2:
        raise DomainError(f"clock/shift matrices need N >= 2, got {n}")
    k = np.arange(n)
    g = np.diag(np.exp(2j * np.pi * k / n))
    h = np.zeros((n, n), dtype=np.complex128)
    h[k[:-1], k[:-1] + 1] = 1.0
    h[n - 1, 0] = 1.0
    return g, h


def _unitary_power(u: np.ndarray, p: int) -> np.ndarray:
    if p < 0:
        u, p = dagger(u), -p
    return np.linalg.matrix_power(u, p)


def torus_quantize(mode, n: int) -> np.ndarray:
    """``T(Y_m)`` for the fuzzy Clifford torus; the phase uses ``omega^(1/2) = exp(i pi / N)``."""
    m = _mode(mode)
    g, h = clock_shift(n)
    phase = np.exp(1j * np.pi * m.m1 * m.m2 / n)
    return phase * (_unitary_power(g, m.m1) @ _unitary_power(h, m.m2))


def torus_quantize_combination(coeffs: dict, n: int) -> np.ndarray:
    """Quantize ``sum_m c_m Y_m`` by linearity."""
    out = np.zeros((n, n), dtype=np.complex128)
    for mode, c in coeffs.items():
        out += c * torus_quantize(mode, n)
    return out


def torus_bracket_coefficient(m, n) -> int:
    """``{Y_m, Y_n} = c * Y_(m+n)`` for the constant density 1/2; returns c."""
    return -2 * _mode(m).cross(_mode(n))


def torus_bracket_defect(m, n, N: int) -> float:
    """``||(1/i hbar)[T(Y_m), T(Y_n)] - T({Y_m, Y_n})||`` at dimension N."""
    m, n = _mode(m), _mode(n)
    hbar = torus_hbar(N)
    lhs = commutator(torus_quantize(m, N), torus_quantize(n, N)) / (1j * hbar)
    rhs = torus_bracket_coefficient(m, n) * torus_quantize(m + n, N)
    return operator_norm(lhs - rhs)


def torus_product_defect(m, n, N: int) -> float:
    """``||T(Y_m) T(Y_n) - T(Y_m Y_n)||`` with ``Y_m Y_n = Y_(m+n)``."""
    m, n = _mode(m), _mode(n)
    return operator_norm(torus_quantize(m, N) @ torus_quantize(n, N) - torus_quantize(m + n, N))


def torus_mode_integral(mode) -> complex:
    """``integral of Y_m`` against ``omega = (1/2) dphi1 dphi2`` over the torus."""
    return 2.0 * math.pi**2 if _mode(mode).is_zero else 0.0


def torus_modes(cutoff: int) -> list[FourierMode]:
    r = range(-cutoff, cutoff + 1)
    return [FourierMode(a, b) for a in r for b in r]


# -- generic meters ----------------------------------------------------------


def trace_functional(a: np.ndarray, hbar: float) -> complex:
    """``2 pi hbar Tr(a)``, the matrix-side estimate of ``integral f omega``."""
    return 2.0 * math.pi * hbar * trace(a)


def unitality_defect(t_of_one: np.ndarray) -> float:
    return operator_norm(identity(t_of_one.shape[0]) - t_of_one)


def pad_nonunital(a: np.ndarray) -> np.ndarray:
    """Embed ``a`` in the top-left block of an (N+1)x(N+1) zero matrix."""
    n = a.shape[0]
    out = np.zeros((n + 1, n + 1), dtype=np.complex128)
    out[:n, :n] = a
    return out


def fit_decay_rate(ns: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of ``log(value)`` against ``log(N)``.

    Points with a non-positive value are dropped; at least two must remain.
    """
    pts = [(n, v) for n, v in zip(ns, values) if v > 0 and np.isfinite(v)]
    if len(pts) < 2:
        raise ValueError("need at least two positive values to fit a decay rate")
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)


def torus_axiom_report(N: int, cutoff: int) -> AxiomDefectReport:
    """Worst-case axiom defects over all mode pairs with ``|m1|, |m2| <= cutoff``."""
    hbar = torus_hbar(N)
    modes = torus_modes(cutoff)
    quantized = {m: torus_quantize(m, N) for m in modes}
    for m, n in itertools.product(modes, repeat=2):
        s = m + n
        if s not in quantized:
            quantized[s] = torus_quantize(s, N)

    bracket = product = 0.0
    for m, n in itertools.product(modes, repeat=2):
        tm, tn, ts = quantized[m], quantized[n], quantized[m + n]
        c = torus_bracket_coefficient(m, n)
        bracket = max(bracket, operator_norm(commutator(tm, tn) / (1j * hbar) - c * ts))
        product = max(product, operator_norm(tm @ tn - ts))

    trace_def = max(
        abs(trace_functional(quantized[m], hbar) - torus_mode_integral(m)) for m in modes
    )
    unital = unitality_defect(quantized[FourierMode(0, 0)])
    return AxiomDefectReport(N, hbar, bracket, product, trace_def, unital)


# -- sphere ------------------------------------------------------------------


def sphere_quantize_monomial(coords: Iterable[np.ndarray], exponents: Sequence[int]) -> np.ndarray:
    """Weyl-symmetrized image of ``x1^a x2^b x3^c`` (total degree <= 3).

    ``coords`` are the fuzzy-sphere matrices X^1, X^2, X^3; the result is the
    average of all distinct orderings of the factor word.
    """
    coords = list(coords)
    if len(exponents) != len(coords):
        raise ValueError("one exponent per coordinate matrix is required")
    if any(e < 0 for e in exponents):
        raise ValueError("exponents must be non-negative")
    if sum(exponents) > 3:
        raise ValueError("only monomials of total degree <= 3 are supported")
    n = coords[0].shape[0]
    word = [i for i, e in enumerate(exponents) for _ in range(e)]
    if not word:
        return identity(n)
    orderings = set(itertools.permutations(word))
    out = np.zeros((n, n), dtype=np.complex128)
    for order in orderings:
        prod = identity(n)
        for i in order:
            prod = prod @ coords[i]
        out += prod
    return out / len(orderings)
