"""Ensemble runs: batched trajectory averaging and the lambda scan.

Realizations are independent; each gets its own counter-based RNG stream
derived from the master seed so results are bit-reproducible regardless
of batching.  Statistics are accumulated in fixed realization order.

The trace variance and standard error are pooled over sliding windows of
time steps (default 100): every step inside a window is treated as a
sample alongside the realizations, which stabilises the estimate exactly
where single-step scatter would dominate.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .dynamics import SystemModel, integrate_batch
from .exceptions import ZeroComponent
from .grids import TimeGrid
from .kernels import BathParams, CustomKernel, KernelTable, build_kernel_table
from .noise import sample_white, synthesize_from_white
from .schemes import FilterSet, FilterStructure, SchemeId, make_filters

__all__ = [
    "RunConfig",
    "EnsembleStats",
    "LambdaScan",
    "seed_for",
    "run_ensemble",
    "run_coherence",
    "windowed_stats",
    "scan_lambda",
]


def seed_for(master_seed: int, index: int,
             group: Tuple[int, ...] = ()) -> np.random.SeedSequence:
    """Independent, platform-stable stream seed for one realization.

    The optional group prefix keeps whole sub-ensembles (e.g. the points
    of a parameter scan) on disjoint streams.
    """
    return np.random.SeedSequence(master_seed, spawn_key=(*group, index))


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one ensemble run."""

    scheme: SchemeId
    model: SystemModel
    grid: TimeGrid
    n_realizations: int
    master_seed: int
    bath: Optional[BathParams] = None
    kernel: Optional[CustomKernel] = None
    gamma: float = 0.01
    lam: Optional[float] = None
    stats_window: int = 100
    seed_group: Tuple[int, ...] = ()

    def __post_init__(self):
        if self.n_realizations < 2:
            raise ValueError("n_realizations must be >= 2")
        if self.stats_window < 1:
            raise ValueError("stats_window must be >= 1")
        if (self.bath is None) == (self.kernel is None):
            raise ValueError("exactly one of bath or kernel must be given")

    def noise_grid(self) -> TimeGrid:
        """Noise is sampled at half the integration step for RK4 stages."""
        return TimeGrid(self.grid.dt / 2.0, self.grid.t_max,
                        self.grid.pad_factor)

    def kernel_table(self) -> KernelTable:
        source = self.bath if self.bath is not None else self.kernel
        return build_kernel_table(self.noise_grid().freq(), source)

    def filters(self) -> FilterSet:
        return make_filters(self.scheme, self.kernel_table(), self.gamma)


@dataclass(frozen=True)
class EnsembleStats:
    """Per-time-step ensemble statistics of one run.

    var_tr/se_tr are pooled over the stats window containing each step;
    diverged counts how many trajectories have crossed the divergence
    threshold by each step (they remain in the averages).
    """

    t: np.ndarray
    mean_tr: np.ndarray
    abs_mean_tr: np.ndarray
    var_tr: np.ndarray
    se_tr: np.ndarray
    mean_sx: np.ndarray
    mean_sy: np.ndarray
    mean_sz: np.ndarray
    diverged: np.ndarray
    n_realizations: int
    stats_window: int


def _window_slices(n_steps: int, window: int):
    for start in range(0, n_steps, window):
        yield slice(start, min(start + window, n_steps))


def _pooled_window_stats(sum_tr: np.ndarray, sum_abs2: np.ndarray,
                         nreal: int, window: int):
    """Windowed pooled variance/SE series from per-step accumulators."""
    n_steps = sum_tr.shape[0]
    var = np.empty(n_steps)
    for sl in _window_slices(n_steps, window):
        m = (sl.stop - sl.start) * nreal
        s1 = np.sum(sum_tr[sl])
        s2 = np.sum(sum_abs2[sl])
        v = (s2 - np.abs(s1) ** 2 / m) / max(m - 1, 1)
        var[sl] = max(v, 0.0)
    se = np.sqrt(var / nreal)
    return var, se


def windowed_stats(traces: np.ndarray, window: int):
    """Windowed pooled variance and SE of a (realizations, steps) trace
    array; every step in a window shares the pooled value."""
    traces = np.asarray(traces)
    if window > traces.shape[1]:
        raise ValueError("window exceeds series length")
    sum_tr = traces.sum(axis=0)
    sum_abs2 = (np.abs(traces) ** 2).sum(axis=0)
    return _pooled_window_stats(sum_tr, sum_abs2, traces.shape[0], window)


def run_ensemble(cfg: RunConfig, batch_size: int = 256,
                 force_nu_zero: bool = False) -> EnsembleStats:
    """Synthesize, integrate and average an ensemble of trajectories.

    Deterministic for a fixed config: per-realization seeds come from
    seed_for and reduction order follows the realization index.
    force_nu_zero is a test hook that zeroes the trace-driving noise.
    """
    ngrid = cfg.noise_grid()
    fs = cfg.filters()
    n_half = ngrid.n_phys
    n_steps = cfg.grid.n_phys
    sum_tr = np.zeros(n_steps, dtype=complex)
    sum_abs2 = np.zeros(n_steps)
    sum_sx = np.zeros(n_steps, dtype=complex)
    sum_sy = np.zeros(n_steps, dtype=complex)
    sum_sz = np.zeros(n_steps, dtype=complex)
    div_counts = np.zeros(n_steps, dtype=int)
    nreal = cfg.n_realizations
    for start in range(0, nreal, batch_size):
        stop = min(start + batch_size, nreal)
        nb = stop - start
        eta = np.empty((nb, n_half), dtype=complex)
        nu = np.empty((nb, n_half), dtype=complex)
        for j, idx in enumerate(range(start, stop)):
            seed = seed_for(cfg.master_seed, idx, cfg.seed_group)
            white = sample_white(ngrid, seed, fs.n_channels)
            pair = synthesize_from_white(fs, ngrid, white, cfg.lam, seed)
            eta[j] = pair.eta_t
            nu[j] = pair.nu_t
        if force_nu_zero:
            nu[:] = 0.0
        states, first_div = integrate_batch(cfg.model, eta, nu,
                                            ngrid.dt)
        tr = states[:, :, 3]
        with np.errstate(over="ignore", invalid="ignore"):
            sum_tr += tr.sum(axis=0)
            sum_abs2 += (np.abs(tr) ** 2).sum(axis=0)
            sum_sx += states[:, :, 0].sum(axis=0)
            sum_sy += states[:, :, 1].sum(axis=0)
            sum_sz += states[:, :, 2].sum(axis=0)
        for d in first_div:
            if d >= 0:
                div_counts[d:] += 1
    var, se = _pooled_window_stats(sum_tr, sum_abs2, nreal, cfg.stats_window)
    mean_tr = sum_tr / nreal
    t = cfg.model.t0 + cfg.grid.dt * np.arange(n_steps)
    return EnsembleStats(
        t=t,
        mean_tr=mean_tr,
        abs_mean_tr=np.abs(mean_tr),
        var_tr=var,
        se_tr=se,
        mean_sx=sum_sx / nreal,
        mean_sy=sum_sy / nreal,
        mean_sz=sum_sz / nreal,
        diverged=div_counts,
        n_realizations=nreal,
        stats_window=cfg.stats_window,
    )


def run_coherence(cfg: RunConfig, batch_size: int = 256):
    """Ensemble mean and standard error of the off-diagonal element
    rho01 = (sx - i*sy)/2 at every step.

    Used to compare the stochastic average against an exact dephasing
    solution; the SE here is per step (not windowed) since the coherence
    is smooth.
    """
    ngrid = cfg.noise_grid()
    fs = cfg.filters()
    n_steps = cfg.grid.n_phys
    sum_r = np.zeros(n_steps, dtype=complex)
    sum_abs2 = np.zeros(n_steps)
    nreal = cfg.n_realizations
    for start in range(0, nreal, batch_size):
        stop = min(start + batch_size, nreal)
        nb = stop - start
        eta = np.empty((nb, ngrid.n_phys), dtype=complex)
        nu = np.empty((nb, ngrid.n_phys), dtype=complex)
        for j, idx in enumerate(range(start, stop)):
            seed = seed_for(cfg.master_seed, idx, cfg.seed_group)
            white = sample_white(ngrid, seed, fs.n_channels)
            pair = synthesize_from_white(fs, ngrid, white, cfg.lam, seed)
            eta[j] = pair.eta_t
            nu[j] = pair.nu_t
        states, _ = integrate_batch(cfg.model, eta, nu, ngrid.dt)
        r01 = 0.5 * (states[:, :, 0] - 1j * states[:, :, 1])
        sum_r += r01.sum(axis=0)
        sum_abs2 += (np.abs(r01) ** 2).sum(axis=0)
    mean = sum_r / nreal
    var = np.maximum(sum_abs2 / nreal - np.abs(mean) ** 2, 0.0) * nreal / max(nreal - 1, 1)
    se = np.sqrt(var / nreal)
    t = cfg.model.t0 + cfg.grid.dt * np.arange(n_steps)
    return t, mean, se


@dataclass(frozen=True)
class LambdaScan:
    """Final-window trace standard error per rescaling strength."""

    lambdas: np.ndarray
    se_final: np.ndarray
    best_lambda: float


def scan_lambda(cfg: RunConfig, lambdas: Sequence[float],
                runs_per_point: int, batch_size: int = 256) -> LambdaScan:
    """Standard error of the mean trace at the end of the run as a
    function of the rescaling strength lambda.

    Every grid point runs on the same realization streams (common random
    numbers), so repeated lambda values give identical results and the
    comparison between points is not blurred by independent sampling
    noise.  The reported figure of merit is the SE pooled over the final
    stats window.
    """
    fs = cfg.filters()
    if fs.structure is FilterStructure.CONVEX or not fs.has_cross_pair:
        raise ZeroComponent(
            "lambda scan requires a scheme with a cross-correlative pair"
        )
    lambdas = np.asarray(list(lambdas), dtype=float)
    if lambdas.size == 0 or np.any(lambdas <= 0):
        raise ValueError("lambdas must be positive and non-empty")
    se_final = np.empty(lambdas.size)
    for j, lam in enumerate(lambdas):
        sub = RunConfig(
            scheme=cfg.scheme,
            model=cfg.model,
            grid=cfg.grid,
            n_realizations=runs_per_point,
            master_seed=cfg.master_seed,
            bath=cfg.bath,
            kernel=cfg.kernel,
            gamma=cfg.gamma,
            lam=float(lam),
            stats_window=cfg.stats_window,
            seed_group=cfg.seed_group,
        )
        stats = run_ensemble(sub, batch_size=batch_size)
        se_final[j] = stats.se_tr[-1]
    best = float(lambdas[int(np.argmin(se_final))])
    return LambdaScan(lambdas=lambdas, se_final=se_final, best_lambda=best)
