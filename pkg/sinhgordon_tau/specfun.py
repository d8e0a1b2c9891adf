# sinhgordon_tau/specfun.py
"""
Real-argument special functions behind every closed-form connection formula.

ln Gamma and digamma come from scipy.special. ln G (Barnes) uses its
large-argument expansion above a shift threshold and downward recurrence
G(x) = G(x + 1) / Gamma(x) below it.

All functions accept a float or an array and return the same shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Final, Union

import numpy as np
from scipy.special import digamma as _psi
from scipy.special import gammaln

from .errors import DomainError

ArrayLike = Union[float, np.ndarray]


@dataclass(frozen=True)
class SpecialConstants:
    euler_gamma: float
    zeta_prime_m1: float
    ln2: float
    ln_pi: float


# zeta'(-1) = 1/12 - ln A (Glaisher); checked against glaisher_log() in tests.
ZETA_PRIME_M1: Final[float] = -0.16542114370045092

CONSTANTS: Final[SpecialConstants] = SpecialConstants(
    euler_gamma=float(np.euler_gamma),
    zeta_prime_m1=ZETA_PRIME_M1,
    ln2=math.log(2.0),
    ln_pi=math.log(math.pi),
)

_LN_2PI: Final[float] = math.log(2.0 * math.pi)

# below this the Barnes G expansion is reached by recurrence
_G_SHIFT: Final[float] = 20.0

# B_{2k+2} / (4k(k+1)) for k = 1..6
_G_SERIES: Final[tuple[float, ...]] = tuple(
    b / (4.0 * k * (k + 1))
    for k, b in enumerate(
        (-1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0, 5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0),
        start=1,
    )
)


def _positive(x: ArrayLike, name: str, lower: float = 0.0) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.size == 0:
        return arr
    if not np.all(np.isfinite(arr)) or np.any(arr <= lower):
        bad = arr[~(np.isfinite(arr) & (arr > lower))].ravel()[0]
        raise DomainError(f"{name}: argument must be > {lower:g}, got {bad}")
    return arr


def _shape_like(out: np.ndarray, x: ArrayLike) -> ArrayLike:
    return float(out) if np.ndim(x) == 0 else out


def ln_gamma(x: ArrayLike) -> ArrayLike:
    """ln Gamma(x) for x > 0."""
    arr = _positive(x, "ln_gamma")
    return _shape_like(gammaln(arr), x)


def digamma(x: ArrayLike) -> ArrayLike:
    """psi_0(x) = Gamma'(x) / Gamma(x) for x > 0."""
    arr = _positive(x, "digamma")
    return _shape_like(_psi(arr), x)


def _ln_g_asymptotic(y: np.ndarray) -> np.ndarray:
    """ln G(y) from the large-argument expansion of ln G(1 + z), z = y - 1."""
    z = y - 1.0
    lz = np.log(z)
    inv2 = 1.0 / (z * z)
    tail = np.zeros_like(z)
    for c in reversed(_G_SERIES):
        tail = (tail + c) * inv2
    return (
        0.5 * z * z * lz
        - 0.75 * z * z
        + 0.5 * z * _LN_2PI
        - lz / 12.0
        + ZETA_PRIME_M1
        + tail
    )


def ln_barnes_g(x: ArrayLike) -> ArrayLike:
    """ln G(x) for x > 0, G the Barnes double-Gamma function with G(1) = 1."""
    arr = _positive(x, "ln_barnes_g")
    shift = np.maximum(0.0, np.ceil(_G_SHIFT - arr)).astype(int)
    out = _ln_g_asymptotic(arr + shift)
    for j in range(int(shift.max(initial=0))):
        out = out - np.where(j < shift, gammaln(arr + j), 0.0)
    return _shape_like(out, x)


def barnes_g_log_derivative(x: ArrayLike) -> ArrayLike:
    """d/dx ln G(x) = (x - 1) psi_0(x) - x + ln(2 pi)/2 + 1/2."""
    arr = _positive(x, "barnes_g_log_derivative")
    return _shape_like((arr - 1.0) * _psi(arr) - arr + 0.5 * _LN_2PI + 0.5, x)


def lngamma_antiderivative(z: ArrayLike) -> ArrayLike:
    """
    Closed form of int_0^z ln Gamma(1 + x) dx for z > -1:

        (z/2) ln(2 pi) - (z/2)(z + 1) + z ln Gamma(1 + z) - ln G(1 + z)
    """
    arr = _positive(z, "lngamma_antiderivative", lower=-1.0)
    zp1 = arr + 1.0
    out = (
        0.5 * arr * _LN_2PI
        - 0.5 * arr * zp1
        + arr * gammaln(zp1)
        - np.asarray(ln_barnes_g(zp1))
    )
    return _shape_like(out, z)


def glaisher_log(n_terms: int = 40) -> float:
    """
    ln A (Glaisher-Kinkelin) from the hyperfactorial limit

        ln A = sum_{k<=n} k ln k - (n^2/2 + n/2 + 1/12) ln n + n^2/4 + O(n^-2)

    with the O(n^-2 .. n^-6) Euler-Maclaurin terms removed. Independent of
    ZETA_PRIME_M1, which it is used to check.
    """
    if n_terms < 10:
        raise DomainError(f"glaisher_log: n_terms must be >= 10, got {n_terms}")
    n = float(n_terms)
    ln_n = math.log(n)
    head = math.fsum(k * math.log(k) for k in range(2, n_terms + 1))
    return math.fsum(
        (
            head,
            -(0.5 * n * n + 0.5 * n + 1.0 / 12.0) * ln_n,
            0.25 * n * n,
            -1.0 / (720.0 * n**2),
            1.0 / (5040.0 * n**4),
            -1.0 / (10080.0 * n**6),
        )
    )
