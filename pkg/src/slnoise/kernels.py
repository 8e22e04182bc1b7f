"""Bath spectral density and noise correlation kernels.

The eta autocorrelation and the causal eta-nu cross-correlation are needed
both in the time domain (by quadrature over the spectral density, or from
a user-supplied kernel) and on the DFT frequency grid (by discrete
transform of the time samples, keeping the table's transform pair exactly
self-consistent).  Pointwise analytic transforms are also provided; the
imaginary part of the cross-correlation transform is a Cauchy principal
value integral evaluated with a singularity-subtraction technique whose
residual integrand is smooth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .exceptions import AsymmetryExceeded, SingularPoint
from .grids import FrequencyGrid, flip_freq

__all__ = [
    "BathParams",
    "CustomKernel",
    "KernelTable",
    "spectral_density",
    "k_etaeta_freq",
    "k_etanu_freq",
    "kernel_time",
    "build_kernel_table",
]


@dataclass(frozen=True)
class BathParams:
    """Drude bath with a hard frequency cutoff; hbar = k_B = 1."""

    beta: float
    omega_c: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be positive, got {self.beta}")
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")


@dataclass(frozen=True)
class CustomKernel:
    """User-supplied complex correlation kernel K(t).

    The convention is ``K_etaeta(t) = Re K(t)`` and
    ``K_etanu(t) = 2i * Theta(t) * Im K(t)`` with ``Theta(0) = 1/2``.
    """

    func: Callable[[np.ndarray], np.ndarray]


KernelSource = Union[BathParams, CustomKernel]


def spectral_density(omega, params: BathParams):
    """Drude spectral density with a hard cutoff at omega_c.

    Returns ``omega * (1 + (omega/omega_c)^2)^-2`` on (0, omega_c],
    exactly zero for omega <= 0 and omega > omega_c.
    """
    w = np.asarray(omega, dtype=float)
    wc = params.omega_c
    inside = (w > 0) & (w <= wc)
    j = np.where(inside, w * (1.0 + (w / wc) ** 2) ** -2, 0.0)
    return j if j.ndim else float(j)


def k_etaeta_freq(omega, params: BathParams):
    """Frequency-domain eta autocorrelation J(|w|) coth(beta |w| / 2).

    Even in omega, zero beyond the hard cutoff, with the finite
    2/beta limit at omega = 0.
    """
    w = np.abs(np.asarray(omega, dtype=float))
    wc, beta = params.omega_c, params.beta
    shape = np.where(w <= wc, (1.0 + (w / wc) ** 2) ** -2, 0.0)
    # w * coth(beta*w/2) -> 2/beta as w -> 0; division below is stable for
    # any w > 0 so only the exact zero needs the limit.
    with np.errstate(divide="ignore", invalid="ignore"):
        wcoth = np.where(w > 0, w / np.tanh(0.5 * beta * w), 2.0 / beta)
    out = shape * wcoth
    return out if out.ndim else float(out)


def _gauss_panels(a: float, b: float, npanels: int, order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(a, b, npanels + 1)
    half = 0.5 * (edges[1] - edges[0])
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half * x[None, :]).ravel()
    wts = np.tile(w * half, npanels)
    return nodes, wts


def _pv_cutoff_integral(w: np.ndarray, params: BathParams,
                        npanels: int = 64, order: int = 16) -> np.ndarray:
    """PV integral of x^2 f(x) / (x^2 - w^2) over [0, omega_c], w >= 0.

    Subtracts f(w) so the remaining integrand is smooth; the subtracted
    piece integrates to ``omega_c + (w/2) ln|(omega_c-w)/(omega_c+w)|``.
    """
    wc = params.omega_c

    def f(x):
        return (1.0 + (x / wc) ** 2) ** -2

    nodes, wts = _gauss_panels(0.0, wc, npanels, order)
    x = nodes[None, :]
    smooth = np.empty(w.size)
    chunk = max(1, int(2**21 // max(nodes.size, 1)))
    for s in range(0, w.size, chunk):
        ww = w[s:s + chunk, None]
        fw = f(ww)
        num = f(x) - fw
        den = x * x - ww * ww
        close = np.abs(x - ww) < 1e-9 * wc
        fprime = -4.0 * ww / wc**2 * (1.0 + (ww / wc) ** 2) ** -3
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(close, 0.0, num) / np.where(close, 1.0, den)
            limit = np.where(ww > 0, fprime / (2.0 * np.where(ww > 0, ww, 1.0)), 0.0)
        ratio = np.where(close, limit, ratio)
        smooth[s:s + chunk] = (x * x * ratio) @ wts
    with np.errstate(divide="ignore"):
        log_term = np.log(np.abs((wc - w) / (wc + w)))
    analytic = f(w) * (wc + 0.5 * w * log_term)
    return smooth + analytic


def _check_cutoff(w: np.ndarray, params: BathParams):
    hit = np.abs(np.abs(w) - params.omega_c) < 1e-12 * params.omega_c
    if np.any(hit):
        raise SingularPoint(
            "frequency coincides with the hard cutoff omega_c, where the "
            "cross-correlation transform diverges logarithmically; offset "
            "the grid by a fraction of a bin"
        )


def k_etanu_freq(omega, params: BathParams):
    """Frequency-domain eta-nu cross-correlation.

    Transform convention e^{+i w t} (matching the synthesis filters), in
    which causality of the time-domain kernel gives real part
    ``+sgn(w) J(|w|)`` and an imaginary part equal to the principal-value
    transform of the sine kernel, evaluated by singularity subtraction.
    Raises :class:`SingularPoint` at |omega| = omega_c.
    """
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    _check_cutoff(w, params)
    real = np.sign(w) * spectral_density(np.abs(w), params)
    imag = -(2.0 / np.pi) * _pv_cutoff_integral(np.abs(w), params)
    out = real + 1j * imag
    return out if np.asarray(omega).ndim else complex(out[0])


def kernel_time(t, params: BathParams, which: str,
                order: int = 12, min_panels: int = 40):
    """Time-domain kernels by composite Gauss-Legendre quadrature.

    ``which='etaeta'``: ``(1/pi) int_0^wc J coth(beta w/2) cos(w t) dw``
    (real, even).  ``which='etanu'``:
    ``-2i Theta(t) (1/pi) int_0^wc J sin(w t) dw`` with Theta(0)=1/2, so
    the kernel vanishes exactly for t < 0.  Panel count scales with the
    oscillation period of the largest requested |t|.
    """
    tt = np.atleast_1d(np.asarray(t, dtype=float))
    wc = params.omega_c
    tmax = float(np.max(np.abs(tt))) if tt.size else 0.0
    npanels = max(min_panels, int(np.ceil(4.0 * wc * tmax / (2.0 * np.pi))))
    nodes, wts = _gauss_panels(0.0, wc, npanels, order)
    j = spectral_density(nodes, params)
    # evaluate in chunks: the (times x nodes) outer product would otherwise
    # grow to gigabytes on long padded grids
    chunk = max(1, int(2**22 // max(nodes.size, 1)))
    if which == "etaeta":
        lam = wts * j / np.tanh(0.5 * params.beta * nodes)
        out = np.empty(tt.size, dtype=complex)
        for s in range(0, tt.size, chunk):
            block = tt[s:s + chunk]
            out[s:s + chunk] = np.cos(np.outer(block, nodes)) @ lam / np.pi
    elif which == "etanu":
        theta = np.where(tt > 0, 1.0, np.where(tt == 0, 0.5, 0.0))
        wj = wts * j
        sine = np.empty(tt.size)
        for s in range(0, tt.size, chunk):
            block = tt[s:s + chunk]
            sine[s:s + chunk] = np.sin(np.outer(block, nodes)) @ wj / np.pi
        out = -2j * theta * sine
    else:
        raise ValueError(f"unknown kernel {which!r}")
    return out if np.asarray(t).ndim else complex(out[0])


@dataclass(frozen=True)
class KernelTable:
    """Correlation kernels sampled on a common frequency/time grid.

    Frequency arrays approximate the continuous transforms (DFT scaled by
    dt); ``r_w = -i * k_etanu_w``.  Time arrays are in fft ordering.
    """

    grid: FrequencyGrid
    k_etaeta_w: np.ndarray
    k_etanu_w: np.ndarray
    r_w: np.ndarray
    k_etaeta_t: np.ndarray
    k_etanu_t: np.ndarray
    source: KernelSource
    max_asymmetry: float = 0.0


def build_kernel_table(grid: FrequencyGrid, source: KernelSource) -> KernelTable:
    """Construct a :class:`KernelTable` from a Drude bath or custom kernel.

    Symmetries (K_etaeta even; Re K_etanu odd, Im K_etanu even) are
    enforced numerically; a correction beyond 1e-6 relative raises
    :class:`AsymmetryExceeded`.
    """
    times = grid.times
    if isinstance(source, BathParams):
        # the sampled transforms are still singular at the hard cutoff:
        # reject grids whose bins land on it
        _check_cutoff(grid.omega, source)
        keta_t = kernel_time(times, source, "etaeta").real.astype(float)
        ketanu_t = kernel_time(times, source, "etanu")
    elif isinstance(source, CustomKernel):
        kt = np.asarray(source.func(times), dtype=complex)
        theta = np.where(times > 0, 1.0, np.where(times == 0, 0.5, 0.0))
        keta_t = kt.real.astype(float)
        ketanu_t = 2j * theta * kt.imag
    else:
        raise TypeError(f"unsupported kernel source {source!r}")
    # frequency arrays are the DFT approximants of the sampled time
    # kernels (scaled to the continuous transform), so the transform pair
    # in the table is self-consistent; the leakage of the slowly decaying
    # kernel tails is then carried in the spectrum rather than silently
    # broken between the two representations
    scale = grid.n * grid.dt
    keta_w_raw = scale * np.fft.ifft(keta_t)
    ketanu_w_raw = scale * np.fft.ifft(ketanu_t)
    # K_etaeta even real; K_etanu(-w) = -conj(K_etanu(w))
    keta_w = 0.5 * (keta_w_raw + flip_freq(keta_w_raw)).real
    ketanu_w = 0.5 * (ketanu_w_raw - np.conj(flip_freq(ketanu_w_raw)))
    ref = max(np.max(np.abs(keta_w_raw)), np.max(np.abs(ketanu_w_raw)))
    asym = max(
        np.max(np.abs(keta_w_raw - keta_w)),
        np.max(np.abs(ketanu_w_raw - ketanu_w)),
    ) / ref
    if asym > 1e-6:
        raise AsymmetryExceeded(
            f"symmetry correction {asym:.2e} relative exceeds 1e-6; "
            "the grid is too coarse for this kernel"
        )
    # DFT leakage can leave tiny negative spectral values
    keta_w = np.maximum(keta_w, 0.0)
    return KernelTable(
        grid=grid,
        k_etaeta_w=keta_w,
        k_etanu_w=ketanu_w,
        r_w=-1j * ketanu_w,
        k_etaeta_t=keta_t,
        k_etanu_t=ketanu_t,
        source=source,
        max_asymmetry=float(asym),
    )
