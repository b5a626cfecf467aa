"""Residual checks for the algebraic identities behind the series.

Every identity the series construction relies on is exposed as a residual
that vanishes in exact arithmetic: the 16-term sine expansion of the
five-wave product, the functional equation tying s5 at three wavenumbers
to p5, the eleven linear relations among the five projections, and the
two-wave product factorization. A seeded suite runner sweeps random
points and wavenumbers and reports the worst absolute residual.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .wavefield import GOLDEN_RATIO, _as_points, _as_wavenumber, _maybe_scalar, p5, project, s5

# Sign table of the 16-term expansion of 16*p5, transcribed literally:
# the all-plus sine, minus the five single-flip sines, plus the ten
# double-flip sines. even_flip_terms() below rebuilds the same sum from
# first principles as a transcription guard.
_EXPANSION_TERMS = (
    (1.0, (1, 1, 1, 1, 1)),
    (-1.0, (-1, 1, 1, 1, 1)),
    (-1.0, (1, -1, 1, 1, 1)),
    (-1.0, (1, 1, -1, 1, 1)),
    (-1.0, (1, 1, 1, -1, 1)),
    (-1.0, (1, 1, 1, 1, -1)),
    (1.0, (-1, -1, 1, 1, 1)),
    (1.0, (-1, 1, -1, 1, 1)),
    (1.0, (-1, 1, 1, -1, 1)),
    (1.0, (-1, 1, 1, 1, -1)),
    (1.0, (1, -1, -1, 1, 1)),
    (1.0, (1, -1, 1, -1, 1)),
    (1.0, (1, -1, 1, 1, -1)),
    (1.0, (1, 1, -1, -1, 1)),
    (1.0, (1, 1, -1, 1, -1)),
    (1.0, (1, 1, 1, -1, -1)),
)
_EXP_COEFFS = np.array([c for c, _ in _EXPANSION_TERMS])
_EXP_SIGNS = np.array([s for _, s in _EXPANSION_TERMS], dtype=float)


def expansion_terms():
    """The hard-coded (coefficient, sign-vector) table of the 16-term expansion."""
    return _EXPANSION_TERMS


def even_flip_terms():
    """Equivalent all-plus-coefficient form of the expansion.

    Because sine is odd, a term (c, sigma) equals (-c, -sigma); canonicalizing
    every term to an even number of flipped signs makes all 16 coefficients +1.
    Kept independent of the table above so the two derivations cross-check.
    """
    out = []
    subsets = itertools.chain.from_iterable(
        itertools.combinations(range(5), r) for r in (0, 2, 4)
    )
    for flips in subsets:
        signs = [1] * 5
        for i in flips:
            signs[i] = -1
        out.append((1.0, tuple(signs)))
    return out


def expansion_lhs(k, p):
    """Signed sum of the sixteen sines of the +-a_0 +- a_1 ... +- a_4 combinations.

    Equals 16 * p5(k, p) identically.
    """
    kk = _as_wavenumber(k)
    a = project(p)
    phases = a @ _EXP_SIGNS.T
    return _maybe_scalar(np.sin(kk[..., None] * phases) @ _EXP_COEFFS)


def functional_residual(k, p):
    """s5 at 2k, plus s5 at 2k*tau, minus s5 at 2k/tau, minus 16*p5 at k."""
    kk = _as_wavenumber(k)
    tau = GOLDEN_RATIO
    return _maybe_scalar(
        np.asarray(
            s5(2.0 * kk, p) + s5(2.0 * tau * kk, p) - s5(2.0 * kk / tau, p)
            - 16.0 * p5(kk, p)
        )
    )


def direction_sum_residuals(p):
    """The eleven linear relations among the five projections, last axis length 11.

    Order: the total sum a_0+..+a_4, the five cyclic a_i + a_{i+1} + tau*a_{i+3},
    and the five cyclic a_i + a_{i+2} - a_{i+1}/tau.
    """
    a = project(p)
    i = np.arange(5)
    total = a.sum(axis=-1, keepdims=True)
    adjacent = a + a[..., (i + 1) % 5] + GOLDEN_RATIO * a[..., (i + 3) % 5]
    skipping = a + a[..., (i + 2) % 5] - a[..., (i + 1) % 5] / GOLDEN_RATIO
    return np.concatenate([total, adjacent, skipping], axis=-1)


def two_wave_residual(k, p):
    """sin(kx) + sin(ky) minus the product form 2 sin(k(x+y)/2) cos(k(x-y)/2)."""
    kk = _as_wavenumber(k)
    arr = _as_points(p)
    x, y = arr[..., 0], arr[..., 1]
    lhs = np.sin(kk * x) + np.sin(kk * y)
    rhs = 2.0 * np.sin(kk * (x + y) / 2.0) * np.cos(kk * (x - y) / 2.0)
    return _maybe_scalar(np.asarray(lhs - rhs))


@dataclass(frozen=True)
class ResidualReport:
    """Worst absolute residual over a seeded random sweep."""

    max_abs_residual: float
    num_points: int
    rng_seed: int


def _sample_sweep(num_points, seed, k_range, radius):
    if num_points < 1:
        raise ValueError("num_points must be at least 1")
    lo, hi = float(k_range[0]), float(k_range[1])
    if not (0.0 < lo <= hi):
        raise ValueError("k_range must be a nonempty positive interval")
    if not (radius >= 0):
        raise ValueError("radius must be nonnegative")
    rng = np.random.default_rng(seed)
    r = radius * np.sqrt(rng.random(num_points))
    theta = 2.0 * np.pi * rng.random(num_points)
    pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    ks = rng.uniform(lo, hi, num_points)
    return pts, ks


def suite_residual_breakdown(num_points, seed, k_range, radius):
    """Per-identity worst absolute residuals over one seeded sweep."""
    pts, ks = _sample_sweep(num_points, seed, k_range, radius)
    return {
        "expansion": float(np.abs(expansion_lhs(ks, pts) - 16.0 * p5(ks, pts)).max()),
        "functional": float(np.abs(functional_residual(ks, pts)).max()),
        "direction_sums": float(np.abs(direction_sum_residuals(pts)).max()),
        "two_wave": float(np.abs(two_wave_residual(ks, pts)).max()),
    }


def run_identity_suite(num_points, seed, k_range, radius):
    """Sweep seeded random disk points and wavenumbers over all four checks.

    Points are uniform in the disk of the given radius, wavenumbers uniform
    in k_range; the same seed always reproduces the same report.
    """
    breakdown = suite_residual_breakdown(num_points, seed, k_range, radius)
    return ResidualReport(
        max_abs_residual=max(breakdown.values()),
        num_points=int(num_points),
        rng_seed=int(seed),
    )
