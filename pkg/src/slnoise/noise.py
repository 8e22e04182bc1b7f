"""White-noise sampling, coloured-noise synthesis and correlation checks.

Coloured realizations are built by frequency-domain filtering of real white
Gaussian channels: each component is inverse-DFT(filter * DFT(white)).
With white noise of discrete variance 1/dt and filters defined against the
continuous Fourier convention (forward transform carries dt, inverse
carries 1/(n dt)), the dt factors cancel and the composition reduces to
``fft(filter * ifft(x))``.  Synthesis runs on a padded grid and only the
physical window [0, t_max] is exposed, which suppresses the circular
wrap-around of DFT convolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
from scipy.signal import fftconvolve

from .exceptions import GridMismatch, InsufficientSample, ZeroComponent
from .grids import TimeGrid
from .schemes import FilterSet, FilterStructure, SchemeId, rescale_factor

__all__ = [
    "NoisePair",
    "CorrelationEstimate",
    "sample_white",
    "synthesize",
    "synthesize_from_white",
    "estimate_correlations",
]

SeedLike = Union[int, np.random.SeedSequence]


@dataclass(frozen=True)
class NoisePair:
    """One coloured realization on the physical window [0, t_max].

    ``eta0_t``/``nu0_t`` are the cross-correlative components (the ones a
    dynamical rescaling acts on); for schemes without such a component
    pair they are all-zero and ``lambda_applied`` is 1.
    """

    eta_t: np.ndarray
    nu_t: np.ndarray
    eta0_t: np.ndarray
    nu0_t: np.ndarray
    dt: float
    scheme: SchemeId
    seed: object
    lambda_applied: float = 1.0


def _generator(seed: SeedLike) -> np.random.Generator:
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return np.random.Generator(np.random.Philox(ss))


def sample_white(grid: TimeGrid, seed: SeedLike, channels: int) -> np.ndarray:
    """Independent real white Gaussian channels, shape (channels, n).

    Discrete variance is 1/dt so that sums over samples approximate
    delta-correlated continuous noise integrals.  Deterministic function
    of the seed (counter-based Philox stream).
    """
    rng = _generator(seed)
    return rng.standard_normal((channels, grid.n)) / np.sqrt(grid.dt)


def _filtered(filter_w: np.ndarray, series: np.ndarray) -> np.ndarray:
    """Apply a frequency-domain filter; dt scalings cancel (see module doc)."""
    return np.fft.fft(filter_w * np.fft.ifft(series, axis=-1), axis=-1)


def synthesize_from_white(fs: FilterSet, grid: TimeGrid, white: np.ndarray,
                          lam: Optional[float] = None,
                          seed: object = None) -> NoisePair:
    """Assemble a NoisePair from pre-drawn white channels.

    Orthogonal wiring: eta = f1*x1 + f2*(x2 + i x3),
    nu = g1*(i x1 + x4) + g2*(x3 + i x2); the f2/g2 pair is the
    cross-correlative component subject to rescaling.  Convex wiring:
    eta = f1*x1 + i f2*x2, nu = g1*(x1 + i x2); there is no orthogonal
    component pair, so rescaling is undefined.
    """
    np_phys = grid.n_phys
    if fs.structure is FilterStructure.CONVEX:
        if lam is not None:
            raise ZeroComponent(
                "convex-structure schemes have no separable cross-correlative "
                "pair; rescaling is undefined"
            )
        x1, x2 = white
        eta = _filtered(fs.f1_w, x1) + 1j * _filtered(fs.f2_w, x2)
        nu = _filtered(fs.g1_w, x1 + 1j * x2)
        zeros = np.zeros(np_phys, dtype=complex)
        return NoisePair(eta[:np_phys], nu[:np_phys], zeros, zeros.copy(),
                         grid.dt, fs.scheme, seed)
    x1, x2, x3, x4 = white
    eta_main = _filtered(fs.f1_w, x1)[:np_phys]
    eta0 = _filtered(fs.f2_w, x2 + 1j * x3)[:np_phys]
    nu_main = _filtered(fs.g1_w, 1j * x1 + x4)[:np_phys]
    nu0 = _filtered(fs.g2_w, x3 + 1j * x2)[:np_phys]
    lam_applied = 1.0
    if lam is not None:
        factor = rescale_factor(eta0, nu0, lam)
        eta0 = factor * eta0
        nu0 = nu0 / factor
        lam_applied = lam
    return NoisePair(eta_main + eta0, nu_main + nu0, eta0, nu0,
                     grid.dt, fs.scheme, seed, lam_applied)


def synthesize(fs: FilterSet, grid: TimeGrid, seed: SeedLike,
               lam: Optional[float] = None) -> NoisePair:
    """Draw white channels for `seed` and colour them with the filter set."""
    fg = grid.freq()
    if fg.n != fs.grid.n or fg.dt != fs.grid.dt:
        raise GridMismatch(
            f"filter grid (n={fs.grid.n}, dt={fs.grid.dt}) does not match "
            f"time grid (n={fg.n}, dt={fg.dt})"
        )
    white = sample_white(grid, seed, fs.n_channels)
    return synthesize_from_white(fs, grid, white, lam, seed)


@dataclass(frozen=True)
class CorrelationEstimate:
    """Empirical two-time correlations averaged over realizations and
    over the stationary time origin."""

    lags: np.ndarray
    est_etaeta: np.ndarray
    est_etanu: np.ndarray
    est_nunu: np.ndarray
    se_etaeta: np.ndarray
    se_etanu: np.ndarray
    se_nunu: np.ndarray
    n_realizations: int


def _lagged_products(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """Unbiased estimate of <a(t+tau) b(t)> for tau in [-m*dt, m*dt].

    No complex conjugation: the target correlations are of the bare
    products.  Averages over all admissible time origins at each lag.
    """
    t = a.shape[-1]
    full = fftconvolve(a, b[::-1])
    sums = full[t - 1 - m:t + m]
    counts = t - np.abs(np.arange(-m, m + 1))
    return sums / counts


def estimate_correlations(pairs: Sequence[NoisePair],
                          max_lag: float) -> CorrelationEstimate:
    """Estimate eta-eta, eta-nu and nu-nu correlations from realizations.

    Lag resolution equals the sampling step; both signs of the lag are
    returned (the eta-nu correlation is causal, so its negative-lag values
    measure acausal leakage).  Standard errors are the realization-to-
    realization scatter of the per-realization estimates.
    """
    if len(pairs) < 2:
        raise InsufficientSample("need at least 2 realizations")
    dt = pairs[0].dt
    scheme = pairs[0].scheme
    n = pairs[0].eta_t.shape[-1]
    for p in pairs:
        if p.dt != dt or p.scheme is not scheme or p.eta_t.shape[-1] != n:
            raise GridMismatch("all realizations must share grid and scheme")
    m = int(round(max_lag / dt))
    if m >= n:
        raise ValueError("max_lag exceeds the physical window")
    per = {key: [] for key in ("etaeta", "etanu", "nunu")}
    for p in pairs:
        per["etaeta"].append(_lagged_products(p.eta_t, p.eta_t, m))
        per["etanu"].append(_lagged_products(p.eta_t, p.nu_t, m))
        per["nunu"].append(_lagged_products(p.nu_t, p.nu_t, m))
    est, se = {}, {}
    nreal = len(pairs)
    for key, rows in per.items():
        arr = np.array(rows)
        est[key] = arr.mean(axis=0)
        var = np.sum(np.abs(arr - est[key]) ** 2, axis=0) / (nreal - 1)
        se[key] = np.sqrt(var / nreal)
    lags = dt * np.arange(-m, m + 1)
    return CorrelationEstimate(
        lags=lags,
        est_etaeta=est["etaeta"],
        est_etanu=est["etanu"],
        est_nunu=est["nunu"],
        se_etaeta=se["etaeta"],
        se_etanu=se["etanu"],
        se_nunu=se["nunu"],
        n_realizations=nreal,
    )
