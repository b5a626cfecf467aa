"""Scalar standing-wave superpositions with fivefold symmetry.

Evaluates the five-wave field s5, its single-product counterpart p5, the
two-wave checkerboard field s2, their analytic first and second
derivatives, the golden-ratio series approximant of s5, and the
closed-form bound on the series truncation error.

Conventions:
    Directions e_i = (cos(2*pi*i/5), sin(2*pi*i/5)) for i = 0..4.
    Projections a_i = p . e_i.
    s5(k, p) = sum_i sin(k * a_i)
    p5(k, p) = prod_i sin(k * a_i)
    s2(k, p) = sin(k*x) + sin(k*y)
    Fibonacci numbers use the shifted convention F0 = F1 = 1, one index
    ahead of the common F0 = 0 convention.

All field evaluators broadcast: points may be a single (2,) pair or any
(..., 2) batch, and k may be a scalar or an array broadcastable against
the batch shape. Scalar inputs produce plain Python floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

GOLDEN_RATIO = (1.0 + math.sqrt(5.0)) / 2.0

_ANGLES = 2.0 * np.pi * np.arange(5) / 5.0
_DIRECTIONS = np.column_stack([np.cos(_ANGLES), np.sin(_ANGLES)])
_DIRECTIONS.setflags(write=False)
_OUTER = np.einsum("ia,ib->iab", _DIRECTIONS, _DIRECTIONS)
_OUTER.setflags(write=False)

# Shifted Fibonacci numbers stay exactly representable as doubles up to
# n = 77 (F_77 < 2**53); the series switches to the closed form before that.
_FIB_FLOAT_SWITCH = 70


def _as_points(p):
    arr = np.asarray(p, dtype=float)
    if arr.ndim == 0 or arr.shape[-1] != 2:
        raise ValueError("expected point(s) with a trailing dimension of 2")
    if not np.isfinite(arr).all():
        raise ValueError("point coordinates must be finite")
    return arr


def _as_wavenumber(k):
    arr = np.asarray(k, dtype=float)
    if not np.isfinite(arr).all() or not (arr > 0).all():
        raise ValueError("wavenumber must be finite and positive")
    return arr


def _maybe_scalar(arr):
    return float(arr) if arr.ndim == 0 else arr


def direction_basis():
    """The five unit direction vectors e_i = (cos(2*pi*i/5), sin(2*pi*i/5))."""
    return _DIRECTIONS.copy()


def project(p):
    """Projections a_i = p . e_i onto the five directions, shape (..., 5)."""
    return _as_points(p) @ _DIRECTIONS.T


def s5(k, p):
    """Sum of the five standing waves: sum_i sin(k * a_i)."""
    kk = _as_wavenumber(k)
    a = project(p)
    return _maybe_scalar(np.sin(kk[..., None] * a).sum(axis=-1))


def p5(k, p):
    """Product of the five standing waves: prod_i sin(k * a_i)."""
    kk = _as_wavenumber(k)
    a = project(p)
    return _maybe_scalar(np.prod(np.sin(kk[..., None] * a), axis=-1))


def s2(k, p):
    """Two perpendicular standing waves: sin(k*x) + sin(k*y)."""
    kk = _as_wavenumber(k)
    arr = _as_points(p)
    return _maybe_scalar(np.sin(kk * arr[..., 0]) + np.sin(kk * arr[..., 1]))


def grad_s5(k, p):
    """Analytic gradient of s5: sum_i k * cos(k * a_i) * e_i, shape (..., 2)."""
    kk = _as_wavenumber(k)
    a = project(p)
    w = kk[..., None] * np.cos(kk[..., None] * a)
    return w @ _DIRECTIONS


def hess_s5(k, p):
    """Analytic Hessian of s5: -k^2 * sum_i sin(k * a_i) e_i e_i^T, shape (..., 2, 2)."""
    kk = _as_wavenumber(k)
    a = project(p)
    s = np.sin(kk[..., None] * a)
    return -((kk ** 2)[..., None, None]) * np.einsum("...i,iab->...ab", s, _OUTER)


def grad_s2(k, p):
    """Analytic gradient of s2: (k cos(k*x), k cos(k*y))."""
    kk = _as_wavenumber(k)
    arr = _as_points(p)
    gx = kk * np.cos(kk * arr[..., 0])
    gy = kk * np.cos(kk * arr[..., 1])
    return np.stack(np.broadcast_arrays(gx, gy), axis=-1)


def hess_s2(k, p):
    """Analytic Hessian of s2: -k^2 diag(sin(k*x), sin(k*y))."""
    kk = _as_wavenumber(k)
    arr = _as_points(p)
    d0, d1 = np.broadcast_arrays(
        -(kk ** 2) * np.sin(kk * arr[..., 0]),
        -(kk ** 2) * np.sin(kk * arr[..., 1]),
    )
    out = np.zeros(d0.shape + (2, 2))
    out[..., 0, 0] = d0
    out[..., 1, 1] = d1
    return out


def fib(n):
    """Shifted-convention Fibonacci number: F0 = F1 = 1, exact integer."""
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ValueError("n must be an integer")
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, b = 1, 1
    for _ in range(int(n)):
        a, b = b, a + b
    return a


def fib_closed_form(n):
    """Closed form (tau^(n+1) - (-1/tau)^(n+1)) / sqrt(5) as a float."""
    tau = GOLDEN_RATIO
    return (tau ** (n + 1) - (-1.0 / tau) ** (n + 1)) / math.sqrt(5.0)


@dataclass(frozen=True)
class SeriesSpec:
    """Wavenumber and number of retained series terms (indices 0..num_terms-1)."""

    k: float
    num_terms: int

    def __post_init__(self):
        if not (math.isfinite(self.k) and self.k > 0):
            raise ValueError("k must be finite and positive")
        if isinstance(self.num_terms, bool) or not isinstance(
            self.num_terms, (int, np.integer)
        ):
            raise ValueError("num_terms must be an integer")
        if self.num_terms < 0:
            raise ValueError("num_terms must be nonnegative")


def series_partial(spec, p):
    """Partial sum of the golden-ratio series approximating s5.

    Evaluates 16 * sum_{n=0}^{num_terms-1} (-1)^n F_n prod_i sin(k a_i / (2 tau^(n+1))).
    Terms are added smallest first (n descending) to limit cancellation;
    num_terms = 0 returns 0.
    """
    a = project(p)
    total = np.zeros(a.shape[:-1])
    for n in range(spec.num_terms - 1, -1, -1):
        coeff = float(fib(n)) if n <= _FIB_FLOAT_SWITCH else fib_closed_form(n)
        kn = spec.k / (2.0 * GOLDEN_RATIO ** (n + 1))
        term = coeff * np.prod(np.sin(kn * a), axis=-1)
        total = total + (term if n % 2 == 0 else -term)
    return _maybe_scalar(16.0 * total)


@dataclass(frozen=True)
class TailBound:
    """Truncation-error bound over a disk.

    raw_bound bounds the tail of the unscaled alternating sum; scaled_bound
    is 16 * raw_bound and bounds |s5 - series_partial| for every point with
    norm <= radius. raw_bound is monotone nonincreasing in the term count.
    """

    radius: float
    C: float
    raw_bound: float
    scaled_bound: float


def tail_bound(k, radius, num_terms):
    """Closed-form bound on the series tail after num_terms retained terms.

    C = (1/sqrt(5)) (k*radius/2)^5 and the tail is bounded by
    C * (tau^-(4N+4)/(1 - tau^-4) + tau^-(5N+5)/(1 - tau^-5)) with N = num_terms.
    """
    if not (math.isfinite(k) and k > 0):
        raise ValueError("k must be finite and positive")
    if not (math.isfinite(radius) and radius >= 0):
        raise ValueError("radius must be finite and nonnegative")
    if num_terms < 0:
        raise ValueError("num_terms must be nonnegative")
    tau = GOLDEN_RATIO
    n = int(num_terms)
    big_c = (k * radius / 2.0) ** 5 / math.sqrt(5.0)
    raw = big_c * (
        tau ** -(4 * n + 4) / (1.0 - tau ** -4)
        + tau ** -(5 * n + 5) / (1.0 - tau ** -5)
    )
    return TailBound(radius=float(radius), C=big_c, raw_bound=raw, scaled_bound=16.0 * raw)


def terms_for_tolerance(k, radius, eps):
    """Smallest term count whose scaled bound does not exceed eps."""
    if not (eps > 0):
        raise ValueError("eps must be positive")
    n = 0
    while tail_bound(k, radius, n).scaled_bound > eps:
        n += 1
    return n
