import math
import logging
from dataclasses import dataclass, field
from typing import Annotated, Callable, Dict, List, Literal, Optional, Tuple, Union
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from .geom import Vec2, sat, wrap
from .guidance import GuidanceConfig, GuidanceOutput, VehicleState, guidance_step
from .path import PathRef
from .exceptions import ConfigError, ConfigIssue, SimulationError
logger = logging.getLogger(__name__)
WindSampler = Callable[[float], Vec2]
COLUMNS = ('t', 'x', 'y', 'v_g_x', 'v_g_y', 'v_a', 'xi', 'phi', 'roll_ref', 'v_a_ref', 'e_norm', 'feas', 'lambda', 'beta', 'v_g_fwd', 'wind_x', 'wind_y', 'a_lat_ref', 'heading_ref', 'eta_a', 'phi_dot', 'v_a_dot', 'dv_w', 'dv_e', 'wind_est_x', 'wind_est_y', 'asin_saturated', 'degenerate')

class SimConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    dt_sim: float = Field(0.005, gt=0.0)
    guidance_rate: float = Field(50.0, gt=0.0)
    tau_roll: float = Field(0.3, gt=0.0)
    tau_airspeed: float = Field(1.5, gt=0.0)
    phi_max_deg: float = Field(35.0, gt=0.0, lt=90.0)
    roll_rate_max_deg: float = Field(90.0, gt=0.0)
    accel_limit: float = Field(2.0, gt=0.0)
    g: float = Field(9.81, gt=0.0)
    duration: float = Field(60.0, gt=0.0)
    seed: int = 0
    wind_estimator_tau: float = Field(0.0, ge=0.0)

    @model_validator(mode='after')
    def _check_substeps(self):
        ratio = 1.0 / (self.guidance_rate * self.dt_sim)
        if ratio < 1.0 - 1e-09 or abs(ratio - round(ratio)) > 1e-06:
            raise ValueError(f'dt_sim ({self.dt_sim}) must divide the guidance period ({1.0 / self.guidance_rate})')
        return self

    @property
    def phi_max(self) -> float:
        return math.radians(self.phi_max_deg)

    @property
    def roll_rate_max(self) -> float:
        return math.radians(self.roll_rate_max_deg)

    @property
    def guidance_period(self) -> float:
        return 1.0 / self.guidance_rate

    @property
    def substeps(self) -> int:
        return int(round(self.guidance_period / self.dt_sim))

class ConstantWind(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    kind: Literal['constant'] = 'constant'
    w: Tuple[float, float] = (0.0, 0.0)

    def sampler(self, duration: float, seed: int=0) -> WindSampler:
        w = Vec2.of(self.w)
        return lambda t: w

class RampKnot(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    t: float
    w: Tuple[float, float]

class PiecewiseRampWind(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    kind: Literal['piecewise_ramp'] = 'piecewise_ramp'
    knots: List[RampKnot] = Field(min_length=1)

    @field_validator('knots')
    @classmethod
    def _increasing(cls, knots):
        for a, b in zip(knots, knots[1:]):
            if not b.t > a.t:
                raise ValueError(f'knot times must be strictly increasing ({a.t} then {b.t})')
        return knots

    def at(self, t: float) -> Vec2:
        knots = self.knots
        if t <= knots[0].t:
            return Vec2.of(knots[0].w)
        for a, b in zip(knots, knots[1:]):
            if t <= b.t:
                s = (t - a.t) / (b.t - a.t)
                return Vec2(a.w[0] + s * (b.w[0] - a.w[0]), a.w[1] + s * (b.w[1] - a.w[1]))
        return Vec2.of(knots[-1].w)

    def sampler(self, duration: float, seed: int=0) -> WindSampler:
        return self.at

class OneMinusCosGust(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    kind: Literal['one_minus_cos_gust'] = 'one_minus_cos_gust'
    base: Tuple[float, float] = (0.0, 0.0)
    amplitude: Tuple[float, float] = (0.0, 0.0)
    t0: float = 0.0
    period: float = Field(gt=0.0)
    repeat_every: Optional[float] = None

    @model_validator(mode='after')
    def _check_repeat(self):
        if self.repeat_every is not None and self.repeat_every < self.period:
            raise ValueError('repeat_every must be >= period')
        return self

    def at(self, t: float) -> Vec2:
        base = Vec2.of(self.base)
        tau = t - self.t0
        if tau < 0.0:
            return base
        if self.repeat_every is not None:
            tau = math.fmod(tau, self.repeat_every)
        if tau > self.period:
            return base
        s = 0.5 * (1.0 - math.cos(2.0 * math.pi * tau / self.period))
        return base + Vec2.of(self.amplitude) * s

    def sampler(self, duration: float, seed: int=0) -> WindSampler:
        return self.at

class FilteredNoise(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    kind: Literal['filtered_noise'] = 'filtered_noise'
    base: Tuple[float, float] = (0.0, 0.0)
    sigma: float = Field(0.0, ge=0.0)
    correlation_time: float = Field(2.0, gt=0.0)
    seed: Optional[int] = None

    def sampler(self, duration: float, seed: int=0) -> WindSampler:
        # first-order Gauss-Markov per axis on a fixed grid, linearly interpolated
        dt = min(self.correlation_time / 10.0, 0.1)
        n = int(math.ceil(duration / dt)) + 2
        rng = np.random.default_rng(self.seed if self.seed is not None else seed)
        a = math.exp(-dt / self.correlation_time)
        drive = self.sigma * math.sqrt(1.0 - a * a)
        noise = rng.standard_normal((n, 2))
        samples = np.empty((n, 2))
        samples[0] = self.sigma * noise[0]
        for i in range(1, n):
            samples[i] = a * samples[i - 1] + drive * noise[i]
        samples += np.asarray(self.base, dtype=float)
        grid = np.arange(n) * dt
        xs = samples[:, 0].copy()
        ys = samples[:, 1].copy()

        def at(t: float) -> Vec2:
            return Vec2(float(np.interp(t, grid, xs)), float(np.interp(t, grid, ys)))
        return at
WindField = Annotated[Union[ConstantWind, PiecewiseRampWind, OneMinusCosGust, FilteredNoise], Field(discriminator='kind')]

class InitialState(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    position: Tuple[float, float] = (0.0, 0.0)
    heading_deg: float = 0.0
    roll_deg: float = 0.0
    airspeed: Optional[float] = None

@dataclass(frozen=True)
class AircraftState:
    x: float
    y: float
    xi: float
    phi: float
    v_a: float

    def is_finite(self) -> bool:
        return all((math.isfinite(v) for v in (self.x, self.y, self.xi, self.phi, self.v_a)))

    def position(self) -> Vec2:
        return Vec2(self.x, self.y)

    def airspeed_vector(self) -> Vec2:
        return Vec2.from_angle(self.xi, self.v_a)

    def vehicle_state(self, wind: Vec2) -> VehicleState:
        return VehicleState(self.position(), self.airspeed_vector() + wind, self.phi)

@dataclass
class SimLog:
    columns: Tuple[str, ...]
    data: np.ndarray
    meta: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.data.shape[0])

    def column(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.data)))

def _rates(x: float, y: float, xi: float, phi: float, v_a: float, roll_ref: float, v_a_ref: float, wind: Vec2, cfg: SimConfig) -> Tuple[float, float, float, float, float]:
    if not v_a > 0.0:
        raise SimulationError(f'airspeed dropped to {v_a:.3f} m/s')
    rr = cfg.roll_rate_max
    phi_dot = sat((roll_ref - phi) / cfg.tau_roll, -rr, rr)
    v_dot = sat((v_a_ref - v_a) / cfg.tau_airspeed, -cfg.accel_limit, cfg.accel_limit)
    xi_dot = cfg.g * math.tan(phi) / v_a
    return (v_a * math.cos(xi) + wind.x, v_a * math.sin(xi) + wind.y, xi_dot, phi_dot, v_dot)

def step(state: AircraftState, cmd: GuidanceOutput, wind: Vec2, cfg: SimConfig, dt: float, t: Optional[float]=None) -> AircraftState:
    assert dt > 0.0
    roll_ref = sat(cmd.roll_ref, -cfg.phi_max, cfg.phi_max)
    v_a_ref = cmd.v_a_ref
    s0 = (state.x, state.y, state.xi, state.phi, state.v_a)
    try:
        k1 = _rates(*s0, roll_ref, v_a_ref, wind, cfg)
        s1 = tuple((s + 0.5 * dt * k for s, k in zip(s0, k1)))
        k2 = _rates(*s1, roll_ref, v_a_ref, wind, cfg)
        s2 = tuple((s + 0.5 * dt * k for s, k in zip(s0, k2)))
        k3 = _rates(*s2, roll_ref, v_a_ref, wind, cfg)
        s3 = tuple((s + dt * k for s, k in zip(s0, k3)))
        k4 = _rates(*s3, roll_ref, v_a_ref, wind, cfg)
    except SimulationError as e:
        raise SimulationError(str(e), t)
    except (ValueError, OverflowError, ZeroDivisionError) as e:
        raise SimulationError(f'integration failed: {e}', t)
    nxt = AircraftState(*(s + dt / 6.0 * (a + 2.0 * b + 2.0 * c + d) for s, a, b, c, d in zip(s0, k1, k2, k3, k4)))
    if not nxt.is_finite():
        raise SimulationError(f'non-finite state {nxt}', t)
    return nxt

def initial_state(initial: InitialState, guidance: GuidanceConfig) -> AircraftState:
    v_a = initial.airspeed if initial.airspeed is not None else guidance.airspeed.v_a_nom
    if not v_a > guidance.v_a_floor:
        raise ConfigError([ConfigIssue('initial.airspeed', f'initial airspeed {v_a} m/s must exceed v_a_floor={guidance.v_a_floor} m/s')])
    return AircraftState(float(initial.position[0]), float(initial.position[1]), math.radians(initial.heading_deg), math.radians(initial.roll_deg), float(v_a))

def _row(t: float, state: AircraftState, w: Vec2, w_est: Vec2, out: GuidanceOutput, cfg: SimConfig) -> Tuple[float, ...]:
    tel = out.telemetry
    v_g = state.airspeed_vector() + w
    roll_ref = sat(out.roll_ref, -cfg.phi_max, cfg.phi_max)
    rates = _rates(state.x, state.y, state.xi, state.phi, state.v_a, roll_ref, out.v_a_ref, w, cfg)
    return (t, state.x, state.y, v_g.x, v_g.y, state.v_a, wrap(state.xi), state.phi, out.roll_ref, out.v_a_ref, tel.e_norm, tel.feas, tel.lam, tel.beta, tel.v_g_fwd, w.x, w.y, out.a_lat_ref, out.heading_ref, tel.eta_a, rates[3], rates[4], tel.dv_w, tel.dv_e, w_est.x, w_est.y, 1.0 if tel.asin_saturated else 0.0, float(len(tel.degenerate_flags)))

def simulate(path: PathRef, wind: WindSampler, state: AircraftState, guidance: GuidanceConfig, cfg: SimConfig) -> SimLog:
    period = cfg.guidance_period
    n_sub = cfg.substeps
    dt = period / n_sub
    n_updates = int(round(cfg.duration * cfg.guidance_rate))
    alpha = 1.0 - math.exp(-period / cfg.wind_estimator_tau) if cfg.wind_estimator_tau > 0.0 else 1.0
    w_est = wind(0.0)
    rows = []
    logger.debug('simulating %d guidance updates, %d substeps each', n_updates, n_sub)
    for k in range(n_updates + 1):
        t = k * period
        w = wind(t)
        w_est = w_est + (w - w_est) * alpha
        out = guidance_step(state.vehicle_state(w), w_est, path, guidance)
        rows.append(_row(t, state, w, w_est, out, cfg))
        if k == n_updates:
            break
        for j in range(n_sub):
            ts = t + j * dt
            state = step(state, out, wind(ts + 0.5 * dt), cfg, dt, t=ts)
    data = np.asarray(rows, dtype=np.float64)
    if not np.all(np.isfinite(data)):
        bad = int(np.argwhere(~np.isfinite(data))[0][0])
        raise SimulationError('non-finite value in log', float(data[bad, 0]))
    return SimLog(COLUMNS, data)

def run(scenario) -> SimLog:
    """Run a validated scenario (path, wind, initial, guidance, sim) and return its log."""
    state = initial_state(scenario.initial, scenario.guidance)
    sampler = scenario.wind.sampler(scenario.sim.duration, scenario.sim.seed)
    log = simulate(scenario.build_path(), sampler, state, scenario.guidance, scenario.sim)
    log.meta.update({'name': scenario.name, 'seed': scenario.sim.seed, 'duration': scenario.sim.duration, 'guidance_rate': scenario.sim.guidance_rate})
    return log
