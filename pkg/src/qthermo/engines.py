"""Endoreversible Carnot and Otto cycles with power maximization.

Temperatures are reservoir temperatures; the working medium carries its own
local temperatures T_A..T_D fixed by the isentrope condition T ~ omega and
Fourier-law relaxation during the isochores.  k_B = hbar = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import minimize

from .qcore import InvalidInputError


class InfeasibleCycleError(RuntimeError):
    """No positive local-temperature solution for the requested cycle."""


@dataclass(frozen=True)
class BathPair:
    """Hot/cold reservoirs with their transport coefficients.

    kappa_h/kappa_c are the Carnot-type conductances, alpha_h/alpha_c the
    Otto-type relaxation rates; zeta >= 1 models adiabatic-stroke overhead
    as a multiplicative stretch of the cycle time.
    """

    t_hot: float
    t_cold: float
    kappa_h: float = 1.0
    kappa_c: float = 1.0
    alpha_h: float = 1.0
    alpha_c: float = 1.0
    zeta: float = 1.0

    def __post_init__(self):
        if not (self.t_hot > self.t_cold > 0.0):
            raise InvalidInputError("need t_hot > t_cold > 0")
        for name in ("kappa_h", "kappa_c", "alpha_h", "alpha_c"):
            if getattr(self, name) <= 0.0:
                raise InvalidInputError(f"{name} must be positive")
        if self.zeta < 1.0:
            raise InvalidInputError("zeta must be >= 1")

    @property
    def carnot_efficiency(self) -> float:
        return 1.0 - self.t_cold / self.t_hot

    @property
    def curzon_ahlborn_efficiency(self) -> float:
        return 1.0 - math.sqrt(self.t_cold / self.t_hot)


# ---------------------------------------------------------------------------
# Endoreversible Carnot (Curzon-Ahlborn)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CurzonAhlbornResult:
    p_max: float
    delta_t_hot: float
    delta_t_cold: float
    eta_ca: float
    eta_at_max: float


def carnot_power(bath: BathPair, delta_t_hot: float, delta_t_cold: float) -> float:
    """Cycle-averaged power at given working-medium temperature offsets.

    The entropy balance of the two isotherms fixes the stroke-time ratio,
    so the power depends only on the offsets.
    """
    t_hw = bath.t_hot - delta_t_hot
    t_cw = bath.t_cold + delta_t_cold
    if t_hw <= t_cw or delta_t_hot <= 0.0 or delta_t_cold <= 0.0:
        return 0.0
    q_h_rate = bath.kappa_h * delta_t_hot
    q_c_rate = bath.kappa_c * delta_t_cold
    # Q_h tau_h / T_hw = Q_c tau_c / T_cw  =>  tau_c / tau_h fixed
    ratio = (q_h_rate * t_cw) / (q_c_rate * t_hw)
    return (q_h_rate - q_c_rate * ratio) / (bath.zeta * (1.0 + ratio))


def curzon_ahlborn(bath: BathPair) -> CurzonAhlbornResult:
    """Closed-form endoreversible Carnot optimum."""
    th, tc = bath.t_hot, bath.t_cold
    kh, kc = bath.kappa_h, bath.kappa_c
    p_max = (kh * kc / bath.zeta) * ((math.sqrt(th) - math.sqrt(tc))
                                     / (math.sqrt(kh) + math.sqrt(kc))) ** 2
    d_th = th * (1.0 - math.sqrt(tc / th)) / (1.0 + math.sqrt(kh / kc))
    d_tc = tc * (math.sqrt(th / tc) - 1.0) / (1.0 + math.sqrt(kc / kh))
    t_hw = th - d_th
    t_cw = tc + d_tc
    return CurzonAhlbornResult(p_max=p_max, delta_t_hot=d_th, delta_t_cold=d_tc,
                               eta_ca=bath.curzon_ahlborn_efficiency,
                               eta_at_max=1.0 - t_cw / t_hw)


# ---------------------------------------------------------------------------
# Two-level Otto cycle (reversible strokes, thermalizing isochores)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CyclePerformance:
    work_compression: float      # work done on the medium, A -> B
    heat_in: float               # Q absorbed from the hot bath, B -> C
    work_expansion: float        # work done on the medium, C -> D (negative)
    heat_out: float              # Q rejected to the cold bath, D -> A (positive)
    net_work: float              # extracted per cycle
    efficiency: float
    power: float
    t_a: float
    t_b: float
    t_c: float
    t_d: float
    positive_work: bool = True

    def __post_init__(self):
        closure = self.net_work - (self.heat_in - self.heat_out)
        if abs(closure) > 1e-10 * max(1.0, abs(self.heat_in)):
            raise InvalidInputError(f"energy bookkeeping violated by {closure}")


def otto_tls(delta_i: float, delta_f: float, t_cold: float, t_hot: float) -> CyclePerformance:
    """Two-level Otto cycle between gaps delta_i <= delta_f."""
    if not (0.0 < delta_i <= delta_f):
        raise InvalidInputError("need 0 < delta_i <= delta_f")
    if not (t_hot > t_cold > 0.0):
        raise InvalidInputError("need t_hot > t_cold > 0")
    bc, bh = 1.0 / t_cold, 1.0 / t_hot
    th_i = math.tanh(bc * delta_i / 2.0)
    th_f = math.tanh(bh * delta_f / 2.0)
    w_ab = 0.5 * (delta_f - delta_i) * (1.0 - th_i)
    q_bc = 0.5 * delta_f * (th_i - th_f)
    w_cd = 0.5 * (delta_i - delta_f) * (1.0 - th_f)
    q_da = 0.5 * delta_i * (th_i - th_f)
    net = q_bc - q_da
    pwc = delta_f / delta_i < t_hot / t_cold
    eta = 1.0 - delta_i / delta_f
    return CyclePerformance(
        work_compression=w_ab, heat_in=q_bc, work_expansion=w_cd, heat_out=q_da,
        net_work=net, efficiency=eta, power=math.nan,
        t_a=t_cold, t_b=(delta_f / delta_i) * t_cold,
        t_c=t_hot, t_d=(delta_i / delta_f) * t_hot,
        positive_work=pwc,
    )


# ---------------------------------------------------------------------------
# Endoreversible Otto cycle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OttoSpec:
    medium: str                  # "classical-ho" | "quantum-ho" | "tls"
    omega_i: float
    omega_f: float
    tau_h: float
    tau_c: float

    def __post_init__(self):
        if self.medium not in ("classical-ho", "quantum-ho", "tls"):
            raise InvalidInputError(f"unknown working medium {self.medium!r}")
        if not (0.0 < self.omega_i < self.omega_f):
            raise InvalidInputError("need 0 < omega_i < omega_f")
        if self.tau_h <= 0.0 or self.tau_c <= 0.0:
            raise InvalidInputError("stroke times must be positive")

    @property
    def kappa(self) -> float:
        return self.omega_i / self.omega_f


def _medium_energy(medium: str, temperature: float, omega: float) -> float:
    if medium == "classical-ho":
        return temperature
    if medium == "quantum-ho":
        return 0.5 * omega / math.tanh(0.5 * omega / temperature)
    if medium == "tls":
        # gap omega, zero ground energy
        return 0.5 * omega * (1.0 - math.tanh(0.5 * omega / temperature))
    raise InvalidInputError(f"unknown working medium {medium!r}")


def quantum_ho_entropy(temperature: float, omega: float) -> float:
    x = 0.5 * omega / temperature
    return x / math.tanh(x) - math.log(0.5 * math.sinh(x))


def local_temperatures(spec: OttoSpec, bath: BathPair) -> tuple[float, float, float, float]:
    """Solve the isentrope (T ~ omega) plus Fourier-relaxation constraints.

    The linear system is medium independent as long as the isentropes give
    T proportional to omega, which holds for both harmonic media.
    """
    kappa = spec.kappa
    a = math.exp(-bath.alpha_h * spec.tau_h)
    b = math.exp(-bath.alpha_c * spec.tau_c)
    denom = kappa * (1.0 - a * b)
    if denom <= 0.0:
        raise InfeasibleCycleError("no positive local-temperature fixed point")
    t_b = (bath.t_cold * (1.0 - b) + kappa * bath.t_hot * b * (1.0 - a)) / denom
    if t_b <= 0.0:
        raise InfeasibleCycleError("no positive local-temperature fixed point")
    t_a = kappa * t_b
    t_c = bath.t_hot + (t_b - bath.t_hot) * a
    t_d = kappa * t_c
    return t_a, t_b, t_c, t_d


def endoreversible_otto(spec: OttoSpec, bath: BathPair) -> CyclePerformance:
    if spec.medium == "tls":
        raise InvalidInputError("endoreversible cycle is defined for the harmonic media")
    t_a, t_b, t_c, t_d = local_temperatures(spec, bath)
    e = lambda temp, om: _medium_energy(spec.medium, temp, om)  # noqa: E731
    w_comp = e(t_b, spec.omega_f) - e(t_a, spec.omega_i)
    q_h = e(t_c, spec.omega_f) - e(t_b, spec.omega_f)
    w_exp = e(t_d, spec.omega_i) - e(t_c, spec.omega_f)
    q_c = e(t_a, spec.omega_i) - e(t_d, spec.omega_i)   # negative when heat leaves
    net = -(w_comp + w_exp)
    power = net / (bath.zeta * (spec.tau_h + spec.tau_c))
    return CyclePerformance(
        work_compression=w_comp, heat_in=q_h, work_expansion=w_exp, heat_out=-q_c,
        net_work=net, efficiency=1.0 - spec.kappa, power=power,
        t_a=t_a, t_b=t_b, t_c=t_c, t_d=t_d,
        positive_work=net > 0.0,
    )


def endo_power(medium: str, bath: BathPair, kappa: float, tau_h: float,
               tau_c: float, omega_f: float = 1.0) -> float:
    """Power output as a function of the compression ratio and stroke times."""
    if not (0.0 < kappa < 1.0):
        return -math.inf
    spec = OttoSpec(medium=medium, omega_i=kappa * omega_f, omega_f=omega_f,
                    tau_h=tau_h, tau_c=tau_c)
    return endoreversible_otto(spec, bath).power


# ---------------------------------------------------------------------------
# Power maximization
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerOptimum:
    params: dict
    p_max: float
    efficiency: float
    degenerate: bool = False


def _two_stage_maximize(fn: Callable[[np.ndarray], float],
                        bounds: Sequence[tuple[float, float]],
                        grid_points: int = 12) -> tuple[np.ndarray, float, bool]:
    axes = [np.linspace(lo + 1e-9 * (hi - lo), hi - 1e-9 * (hi - lo), grid_points)
            for lo, hi in bounds]
    best_x, best_v = None, -math.inf
    values = []
    for point in np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, len(bounds)):
        v = fn(point)
        values.append(v)
        if v > best_v:
            best_v, best_x = v, point
    degenerate = (max(values) - min(values)) < 1e-14

    def neg(x):
        for xi, (lo, hi) in zip(x, bounds):
            if not (lo <= xi <= hi):
                return math.inf
        return -fn(x)

    res = minimize(neg, best_x, method="Nelder-Mead",
                   options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 20000,
                            "maxfev": 40000})
    x, v = (res.x, -res.fun) if -res.fun >= best_v else (best_x, best_v)
    x = np.asarray(x, dtype=float)
    # parabolic polish: the surface is flat to machine precision near the
    # optimum, so locate the stationary point coordinate-wise instead of
    # trusting the last simplex position
    for _ in range(3):
        for i, (lo, hi) in enumerate(bounds):
            h = 1e-5 * (hi - lo)
            if x[i] - h < lo or x[i] + h > hi:
                continue
            xm, xp = x.copy(), x.copy()
            xm[i] -= h
            xp[i] += h
            fm, f0, fp = fn(xm), fn(x), fn(xp)
            curv = fm - 2.0 * f0 + fp
            if curv < 0.0:
                step = 0.5 * h * (fm - fp) / curv
                if abs(step) < h:
                    x[i] += step
    v = max(v, fn(x))
    return x, float(v), degenerate


def maximize_carnot_power(bath: BathPair) -> PowerOptimum:
    """Numeric 2-D maximization of the Curzon-Ahlborn power surface."""
    span_h = bath.t_hot - bath.t_cold

    def fn(x):
        return carnot_power(bath, x[0], x[1])

    bounds = [(1e-9 * span_h, 0.999 * span_h), (1e-9 * span_h, 10.0 * bath.t_hot)]
    x, v, degen = _two_stage_maximize(fn, bounds, grid_points=24)
    t_hw = bath.t_hot - x[0]
    t_cw = bath.t_cold + x[1]
    return PowerOptimum(params={"delta_t_hot": x[0], "delta_t_cold": x[1]},
                        p_max=v, efficiency=1.0 - t_cw / t_hw, degenerate=degen)


def maximize_power(medium: str, bath: BathPair,
                   vary: Iterable[str] = ("kappa",),
                   fixed: dict | None = None,
                   bounds: dict | None = None,
                   omega_f: float = 1.0,
                   grid_points: int = 12) -> PowerOptimum:
    """Deterministic coarse-grid + Nelder-Mead maximization of the Otto power.

    `vary` selects a subset of {"kappa", "tau_h", "tau_c"}; the remaining
    parameters are taken from `fixed`.
    """
    vary = list(vary)
    fixed = dict(fixed or {})
    defaults = {"kappa": math.sqrt(bath.t_cold / bath.t_hot), "tau_h": 1.0, "tau_c": 1.0}
    default_bounds = {
        "kappa": (bath.t_cold / bath.t_hot + 1e-6, 1.0 - 1e-6),
        "tau_h": (0.05, 25.0),
        "tau_c": (0.05, 25.0),
    }
    bounds = {**default_bounds, **(bounds or {})}
    for name in vary:
        if name not in defaults:
            raise InvalidInputError(f"cannot vary unknown parameter {name!r}")

    def fn(x):
        params = {**defaults, **fixed}
        params.update(dict(zip(vary, x)))
        return endo_power(medium, bath, params["kappa"], params["tau_h"],
                          params["tau_c"], omega_f=omega_f)

    x, v, degen = _two_stage_maximize(fn, [bounds[n] for n in vary],
                                      grid_points=grid_points)
    params = {**defaults, **fixed}
    params.update(dict(zip(vary, x)))
    return PowerOptimum(params=params, p_max=v,
                        efficiency=1.0 - params["kappa"], degenerate=degen)
