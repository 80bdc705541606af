"""Underdamped Langevin dynamics with per-trajectory work/heat bookkeeping."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..qcore import InvalidInputError, Schedule
from ._streams import chunked, normal_block

CHUNK = 20_000


class StochasticInstability(RuntimeError):
    """Energy blow-up detected during trajectory integration."""


@dataclass(frozen=True)
class Potential:
    """V(x, lam) with its two partial derivatives."""

    v: Callable[[np.ndarray, float], np.ndarray]
    dv_dx: Callable[[np.ndarray, float], np.ndarray]
    dv_dlam: Callable[[np.ndarray, float], np.ndarray]

    @staticmethod
    def harmonic(stiffness: float = 1.0) -> "Potential":
        """V = k(lam) x^2 / 2 with lam scaling the stiffness."""
        return Potential(
            v=lambda x, lam: 0.5 * stiffness * lam * x * x,
            dv_dx=lambda x, lam: stiffness * lam * x,
            dv_dlam=lambda x, lam: 0.5 * stiffness * x * x,
        )

    @staticmethod
    def dragged(stiffness: float = 1.0) -> "Potential":
        """V = k (x - lam)^2 / 2 with lam the trap center."""
        return Potential(
            v=lambda x, lam: 0.5 * stiffness * (x - lam) ** 2,
            dv_dx=lambda x, lam: stiffness * (x - lam),
            dv_dlam=lambda x, lam: -stiffness * (x - lam),
        )

    @staticmethod
    def free() -> "Potential":
        return Potential(v=lambda x, lam: np.zeros_like(x),
                         dv_dx=lambda x, lam: np.zeros_like(x),
                         dv_dlam=lambda x, lam: np.zeros_like(x))


@dataclass(frozen=True)
class LangevinParams:
    mass: float
    damping: float
    beta: float
    potential: Potential
    diffusion: float | None = None     # defaults to the FDT value m gamma / beta

    def __post_init__(self):
        if min(self.mass, self.damping, self.beta) <= 0.0:
            raise InvalidInputError("mass, damping, and beta must be positive")
        if self.diffusion is not None and self.diffusion <= 0.0:
            raise InvalidInputError("diffusion override must be positive")

    @property
    def d_noise(self) -> float:
        return self.diffusion if self.diffusion is not None \
            else self.mass * self.damping / self.beta

    @property
    def velocity_variance(self) -> float:
        """Stationary <v^2> = D / (gamma m^2)."""
        return self.d_noise / (self.damping * self.mass**2)


@dataclass(frozen=True)
class TrajectoryEnsemble:
    seed: int
    count: int
    work: np.ndarray
    heat: np.ndarray
    first_law_residual: np.ndarray      # per-trajectory |dE - w - q|
    final_x: np.ndarray
    final_v: np.ndarray
    mean_square_velocity: float         # time-averaged over the run
    vacf: np.ndarray | None = None      # ensemble <v(0) v(t)> on the grid
    vacf_times: np.ndarray | None = None
    vacf_samples: np.ndarray | None = None  # per-trajectory integral of v0 v(t)

    def work_mean_and_se(self) -> tuple[float, float]:
        return float(self.work.mean()), float(self.work.std(ddof=1)
                                               / math.sqrt(self.count))


def _check_step(params: LangevinParams, dt: float, omega_char: float):
    if params.damping * dt > 0.1:
        raise InvalidInputError("unstable step: gamma * dt must stay below 0.1")
    if omega_char > 0.0 and dt > 0.1 / omega_char:
        raise InvalidInputError("unstable step: dt must resolve the potential frequency")


def langevin_simulate(params: LangevinParams, schedule: Schedule, n_traj: int,
                      seed: int, dt: float, omega_char: float = 1.0,
                      record_vacf: bool = False,
                      equilibrated_start: bool = True) -> TrajectoryEnsemble:
    """BAOAB integration of m xdd + m gamma xd + V'(x, lam) = xi(t).

    Work accumulates through the parameter updates (exact potential-energy
    differences at fixed x); heat is the kinetic-energy exchange in the
    exact Ornstein-Uhlenbeck thermostat substep.  Trajectories are seeded
    per index, so any worker partition reproduces identical ensembles.
    """
    steps = int(round(schedule.duration / dt))
    if steps < 1:
        raise InvalidInputError("schedule shorter than one step")
    _check_step(params, dt, omega_char)
    m, gamma = params.mass, params.damping
    c1 = math.exp(-gamma * dt)
    v_var = params.velocity_variance
    noise_scale = math.sqrt((1.0 - c1 * c1) * v_var)
    lam_grid = np.array([schedule(k * dt) for k in range(steps + 1)])

    work = np.empty(n_traj)
    heat = np.empty(n_traj)
    resid = np.empty(n_traj)
    fx = np.empty(n_traj)
    fv = np.empty(n_traj)
    msv_accum = 0.0
    vacf = np.zeros(steps + 1) if record_vacf else None
    vacf_samples = np.empty(n_traj) if record_vacf else None

    for start, stop in chunked(n_traj, CHUNK):
        n = stop - start
        init = normal_block(seed, start, stop, (2,))
        noise = normal_block(seed + 2**32, start, stop, (steps,))
        if equilibrated_start:
            v = init[:, 0] * math.sqrt(v_var)
            x = init[:, 1] / math.sqrt(params.beta * omega_char**2 * m) \
                if omega_char > 0 else init[:, 1]
        else:
            v = np.zeros(n)
            x = np.zeros(n)
        lam = lam_grid[0]
        w = np.zeros(n)
        q = np.zeros(n)
        e0 = params.potential.v(x, lam) + 0.5 * m * v * v
        v0 = v.copy()
        if record_vacf:
            vacf[0] += float(np.sum(v0 * v))
            running = np.zeros(n)
        msv_local = np.zeros(n)
        for k in range(steps):
            lam_next = lam_grid[k + 1]
            w += params.potential.v(x, lam_next) - params.potential.v(x, lam)
            lam = lam_next
            # BAOAB at fixed lam
            v += -params.potential.dv_dx(x, lam) / m * (0.5 * dt)
            x += v * (0.5 * dt)
            v_new = c1 * v + noise_scale * noise[:, k]
            q += 0.5 * m * (v_new * v_new - v * v)
            v = v_new
            x += v * (0.5 * dt)
            v += -params.potential.dv_dx(x, lam) / m * (0.5 * dt)
            msv_local += v * v
            if record_vacf:
                c = v0 * v
                vacf[k + 1] += float(np.sum(c))
                running += 0.5 * dt * (c + (v0 * v0 if k == 0 else prev_c))
                prev_c = c
            if k % 256 == 0 and np.max(np.abs(v)) > 1e6:
                raise StochasticInstability("velocity blow-up; reduce dt")
        e1 = params.potential.v(x, lam) + 0.5 * m * v * v
        work[start:stop] = w
        heat[start:stop] = q
        resid[start:stop] = np.abs(e1 - e0 - w - q)
        fx[start:stop] = x
        fv[start:stop] = v
        msv_accum += float(np.sum(msv_local)) / steps
        if record_vacf:
            vacf_samples[start:stop] = running

    return TrajectoryEnsemble(
        seed=seed, count=n_traj, work=work, heat=heat,
        first_law_residual=resid, final_x=fx, final_v=fv,
        mean_square_velocity=msv_accum / n_traj,
        vacf=(vacf / n_traj if record_vacf else None),
        vacf_times=(np.arange(steps + 1) * dt if record_vacf else None),
        vacf_samples=vacf_samples,
    )


@dataclass(frozen=True)
class FdtReport:
    d_measured: float
    d_se: float
    d_fdt: float                     # m gamma / beta
    ratio: float
    msv: float
    msv_expected: float


def fdt_check(params: LangevinParams, n_traj: int, seed: int, dt: float = 0.01,
              horizon: float | None = None) -> FdtReport:
    """Estimate the noise strength from the velocity autocorrelation integral.

    D = (m gamma)^2 * integral of <v(0) v(t)> over a free-particle run; the
    result matches m gamma / beta when the FDT holds.
    """
    free = LangevinParams(mass=params.mass, damping=params.damping,
                          beta=params.beta, potential=Potential.free(),
                          diffusion=params.diffusion)
    if horizon is None:
        horizon = 10.0 / params.damping
    sched = Schedule.constant(0.0, duration=horizon)
    ens = langevin_simulate(free, sched, n_traj, seed, dt, omega_char=0.0,
                            record_vacf=True)
    factor = (params.mass * params.damping) ** 2
    samples = factor * ens.vacf_samples
    d_measured = float(samples.mean())
    d_se = float(samples.std(ddof=1) / math.sqrt(n_traj))
    d_fdt = params.mass * params.damping / params.beta
    return FdtReport(d_measured=d_measured, d_se=d_se, d_fdt=d_fdt,
                     ratio=d_measured / params.d_noise,
                     msv=ens.mean_square_velocity,
                     msv_expected=params.velocity_variance)
