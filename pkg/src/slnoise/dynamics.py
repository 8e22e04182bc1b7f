"""Stochastic trajectory integration for a driven two-level system.

The density matrix is carried as the four complex components
(sx, sy, sz, tr) of rho = (tr*I + sx*sigma_x + sy*sigma_y + sz*sigma_z)/2
and evolves under

    dsx/dt = -[eps - 2*alpha*eta] sy
    dsy/dt = -delta*sz + [eps - 2*alpha*eta] sx
    dsz/dt =  delta*sy + i*alpha*nu*tr
    dtr/dt =  i*alpha*nu*sz

integrated with classical RK4.  The noise is pre-sampled on a half-step
grid so the midpoint stages use exact samples rather than interpolants
(the coloured noise is band-limited, hence smooth on the step scale).

The module also provides the exact solution of a pure-dephasing
(quantum-non-demolition) model with kernel K(t) = (1/2) e^{-2|t|+i t},
used as an oracle for the stochastic average.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from .grids import FrequencyGrid
from .kernels import CustomKernel, build_kernel_table

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SystemModel",
    "Trajectory",
    "rho_to_state",
    "state_to_rho",
    "integrate_trajectory",
    "integrate_batch",
    "lz_asymptote",
    "LZ_FINITE_WINDOW",
    "QndModel",
    "qnd_kernel",
    "qnd_model",
    "qnd_exact",
    "qnd_sln_config",
    "DIVERGENCE_THRESHOLD",
]

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)

DIVERGENCE_THRESHOLD = 1e12

Drive = Union[float, Callable[[np.ndarray], np.ndarray]]


def rho_to_state(rho: np.ndarray) -> np.ndarray:
    """(sx, sy, sz, tr) components of a 2x2 matrix."""
    rho = np.asarray(rho, dtype=complex)
    sx = rho[0, 1] + rho[1, 0]
    sy = 1j * (rho[0, 1] - rho[1, 0])
    sz = rho[0, 0] - rho[1, 1]
    tr = rho[0, 0] + rho[1, 1]
    return np.array([sx, sy, sz, tr])


def state_to_rho(state: np.ndarray) -> np.ndarray:
    """Inverse of :func:`rho_to_state`; accepts trailing state axis."""
    sx, sy, sz, tr = np.moveaxis(np.asarray(state, dtype=complex), -1, 0)
    out = 0.5 * (
        np.multiply.outer(tr, np.eye(2, dtype=complex))
        + np.multiply.outer(sx, SIGMA_X)
        + np.multiply.outer(sy, SIGMA_Y)
        + np.multiply.outer(sz, SIGMA_Z)
    )
    return out


@dataclass(frozen=True)
class SystemModel:
    """Two-level system parameters; drives may be constants or callables
    of time (e.g. ``lambda t: kappa * t`` for a linear sweep)."""

    delta: Drive
    epsilon: Drive
    alpha: float
    rho0: np.ndarray
    t0: float = 0.0


@dataclass(frozen=True)
class Trajectory:
    """State series on the integration grid; diverged trajectories are
    flagged but kept (the blow-up itself is data)."""

    t: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    tr: np.ndarray
    diverged: bool
    diverged_step: int  # first step index past threshold, or -1


def _eval_drive(drive: Drive, t: np.ndarray) -> np.ndarray:
    if callable(drive):
        return np.asarray(drive(t), dtype=float) * np.ones_like(t)
    return float(drive) * np.ones_like(t)


def integrate_batch(model: SystemModel, eta_half: np.ndarray,
                    nu_half: np.ndarray, dt_half: float):
    """RK4 integration of a batch of trajectories.

    ``eta_half``/``nu_half`` have shape (batch, 2*n_steps + 1) sampled at
    half the integration step.  Returns (states, first_div) where states
    has shape (batch, n_steps + 1, 4) ordered (sx, sy, sz, tr) and
    first_div is the first diverged step per trajectory (-1 if none).
    """
    eta_half = np.atleast_2d(eta_half)
    nu_half = np.atleast_2d(nu_half)
    nb, nh = eta_half.shape
    if nh % 2 == 0 or nh < 3:
        raise ValueError("half-step series must have odd length >= 3")
    n_steps = (nh - 1) // 2
    h = 2.0 * dt_half
    t_half = model.t0 + dt_half * np.arange(nh)
    eps = _eval_drive(model.epsilon, t_half)
    delta = _eval_drive(model.delta, t_half)
    alpha = model.alpha
    # effective precession rate and trace drive at every half step
    w = eps[None, :] - 2.0 * alpha * eta_half
    v = 1j * alpha * nu_half

    state0 = rho_to_state(model.rho0)
    y = np.broadcast_to(state0, (nb, 4)).copy()
    states = np.empty((nb, n_steps + 1, 4), dtype=complex)
    states[:, 0] = y
    first_div = np.full(nb, -1, dtype=int)

    def rhs(y, k):
        sx, sy_, sz, tr = y[:, 0], y[:, 1], y[:, 2], y[:, 3]
        wk = w[:, k]
        vk = v[:, k]
        dk = delta[k]
        return np.stack(
            [
                -wk * sy_,
                -dk * sz + wk * sx,
                dk * sy_ + vk * tr,
                vk * sz,
            ],
            axis=1,
        )

    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(n_steps):
            k0, k1, k2 = 2 * i, 2 * i + 1, 2 * i + 2
            f1 = rhs(y, k0)
            f2 = rhs(y + 0.5 * h * f1, k1)
            f3 = rhs(y + 0.5 * h * f2, k1)
            f4 = rhs(y + h * f3, k2)
            y = y + (h / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4)
            states[:, i + 1] = y
            bad = ~np.isfinite(y).all(axis=1) | (
                np.abs(y).max(axis=1) > DIVERGENCE_THRESHOLD
            )
            newly = bad & (first_div < 0)
            first_div[newly] = i + 1
    return states, first_div


def integrate_trajectory(model: SystemModel, eta_half: np.ndarray,
                         nu_half: np.ndarray, dt_half: float) -> Trajectory:
    """Integrate a single trajectory (see :func:`integrate_batch`)."""
    states, first_div = integrate_batch(model, eta_half, nu_half, dt_half)
    n_steps = states.shape[1] - 1
    t = model.t0 + 2.0 * dt_half * np.arange(n_steps + 1)
    return Trajectory(
        t=t,
        sx=states[0, :, 0],
        sy=states[0, :, 1],
        sz=states[0, :, 2],
        tr=states[0, :, 3],
        diverged=bool(first_div[0] >= 0),
        diverged_step=int(first_div[0]),
    )


def lz_asymptote(delta: float, kappa: float) -> float:
    """Zero-temperature infinite-time limit of <sigma_z> under a linear
    sweep epsilon(t) = kappa*t: 2*exp(-pi*delta^2/(2*kappa)) - 1."""
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    return 2.0 * np.exp(-np.pi * delta**2 / (2.0 * kappa)) - 1.0


# Reference value of <sigma_z> for the sweep run on the finite window used
# throughout (start t = -5, kappa = 5, delta = 1): the finite-time value
# differs from the infinite-time asymptote.
LZ_FINITE_WINDOW = 0.516


def qnd_kernel(t):
    """Pure-dephasing bath correlation K(t) = (1/2) exp(-2|t| + i t)."""
    t = np.asarray(t, dtype=float)
    return 0.5 * np.exp(-2.0 * np.abs(t) + 1j * t)


@dataclass(frozen=True)
class QndModel:
    """Dephasing model solved exactly: H = -sigma_z/2, coupling operator
    sigma_z, and the kernel above.  c_r/c_i are the cumulative integrals
    of the kernel's real and imaginary parts from 0 to t."""

    kernel: Callable[[np.ndarray], np.ndarray] = qnd_kernel
    rho0: np.ndarray = field(
        default_factory=lambda: np.array(
            [[0.5, 0.5 - 0.6j], [0.5 + 0.6j, 0.5]], dtype=complex
        )
    )

    @staticmethod
    def c_r(t):
        t = np.asarray(t, dtype=float)
        return (2.0 + np.exp(-2.0 * t) * (np.sin(t) - 2.0 * np.cos(t))) / 10.0

    @staticmethod
    def c_i(t):
        t = np.asarray(t, dtype=float)
        return (1.0 - np.exp(-2.0 * t) * (np.cos(t) + 2.0 * np.sin(t))) / 10.0

    @staticmethod
    def d_r(t):
        """Double integral int_0^t c_r(s) ds."""
        t = np.asarray(t, dtype=float)
        return t / 5.0 + (
            np.exp(-2.0 * t) * (3.0 * np.cos(t) - 4.0 * np.sin(t)) - 3.0
        ) / 50.0


def qnd_model() -> QndModel:
    return QndModel()


def qnd_exact(model: QndModel, t) -> np.ndarray:
    """Exact averaged density matrix of the dephasing model.

    The diagonal is frozen; the coherence obeys the scalar ODE
    d rho01/dt = (i - 4 c_r(t)) rho01 (the kernel's imaginary part drops
    out because the coupling squares to the identity), giving
    rho01(t) = rho01(0) * exp(i t - 4 * int_0^t c_r).
    Returns shape t.shape + (2, 2).
    """
    t = np.asarray(t, dtype=float)
    r01 = model.rho0[0, 1] * np.exp(1j * t - 4.0 * QndModel.d_r(t))
    out = np.zeros(t.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = model.rho0[0, 0]
    out[..., 1, 1] = model.rho0[1, 1]
    out[..., 0, 1] = r01
    out[..., 1, 0] = np.conj(r01)
    return out


def qnd_sln_config(grid: FrequencyGrid):
    """Kernel table and system model for the stochastic run of the
    dephasing model: delta = 0, epsilon = -1 (H = -sigma_z/2), alpha = 1,
    and the written initial matrix (deliberately not positive
    semidefinite; the dynamics is linear so this is well-posed)."""
    table = build_kernel_table(grid, CustomKernel(qnd_kernel))
    model = SystemModel(
        delta=0.0, epsilon=-1.0, alpha=1.0, rho0=QndModel().rho0
    )
    return table, model
