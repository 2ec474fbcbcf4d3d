import math
import logging
from typing import Any, Dict, Optional
import numpy as np
from pydantic import BaseModel, ConfigDict
from .feasibility import DEFAULT_PARAMS, FeasibilityParams, feas_array
from .geom import EPS_VEC, wrap
from .windsim import SimLog
logger = logging.getLogger(__name__)
CONFORMANCE_TOL = 0.0001
SATURATION_TOL = 1e-09

class ErrorStats(BaseModel):
    model_config = ConfigDict(frozen=True)
    mean: float
    max: float
    std: float

    @classmethod
    def of(cls, values: np.ndarray) -> 'ErrorStats':
        if values.size == 0:
            return cls(mean=0.0, max=0.0, std=0.0)
        return cls(mean=float(np.mean(values)), max=float(np.max(values)), std=float(np.std(values)))

class SaturationCounts(BaseModel):
    model_config = ConfigDict(frozen=True)
    asin: int = 0
    roll: int = 0
    airspeed: int = 0

class TerminalState(BaseModel):
    model_config = ConfigDict(frozen=True)
    ground_speed: float
    v_g_fwd: float
    e_norm: float
    v_a: float
    a_lat_ref: float
    heading_error_upwind: Optional[float] = None

class MetricsReport(BaseModel):
    model_config = ConfigDict(frozen=True)
    name: str
    samples: int
    duration: float
    track_error: ErrorStats
    window: Optional[Dict[str, float]] = None
    window_track_error: Optional[ErrorStats] = None
    undershoot_mean: float = 0.0
    undershoot_std: float = 0.0
    undershoot_samples: int = 0
    infeasible_fraction: float = 0.0
    max_command_step: float = 0.0
    saturation: SaturationCounts = SaturationCounts()
    degenerate_samples: int = 0
    terminal: TerminalState

def _mask_between(t: np.ndarray, start: float, end: float) -> np.ndarray:
    return (t >= start - 1e-09) & (t <= end + 1e-09)

def compute_metrics(log: SimLog, scenario) -> MetricsReport:
    """Summarize one run: track error, undershoot below v_g_min, infeasibility, command continuity, saturation."""
    if len(log) == 0:
        raise ValueError('cannot compute metrics of an empty log')
    g = scenario.guidance
    spd = g.airspeed
    t = log.column('t')
    e = log.column('e_norm')
    v_a_ref = log.column('v_a_ref')
    v_g_fwd = log.column('v_g_fwd')
    roll_ref = log.column('roll_ref')
    heading_ref = log.column('heading_ref')
    window = None
    window_stats = None
    if scenario.metrics.window is not None:
        w = scenario.metrics.window
        window = {'start': w.start, 'end': w.end}
        window_stats = ErrorStats.of(e[_mask_between(t, w.start, w.end)])
    # undershoot only counts while the compensation is actually adding airspeed
    active = v_a_ref > spd.v_a_nom + SATURATION_TOL
    under = np.maximum(spd.v_g_min - v_g_fwd[active], 0.0)
    steps = np.abs(np.vectorize(wrap, otypes=[float])(np.diff(heading_ref))) if len(log) > 1 else np.zeros(0)
    sat_counts = SaturationCounts(asin=int(np.sum(log.column('asin_saturated') > 0.5)), roll=int(np.sum(np.abs(roll_ref) >= g.phi_max * (1.0 - SATURATION_TOL))), airspeed=int(np.sum(v_a_ref >= spd.v_a_max - SATURATION_TOL)) if spd.dv_a_max > 0.0 else 0)
    tail = t >= t[-1] - scenario.metrics.terminal_window - 1e-09
    v_g_x = log.column('v_g_x')[tail]
    v_g_y = log.column('v_g_y')[tail]
    wind_x = float(np.mean(log.column('wind_x')[tail]))
    wind_y = float(np.mean(log.column('wind_y')[tail]))
    heading_error = None
    if math.hypot(wind_x, wind_y) > EPS_VEC:
        upwind = math.atan2(-wind_y, -wind_x)
        xi = log.column('xi')[tail]
        heading_error = float(np.mean(np.abs([wrap(a - upwind) for a in xi])))
    terminal = TerminalState(ground_speed=float(np.mean(np.hypot(v_g_x, v_g_y))), v_g_fwd=float(np.mean(v_g_fwd[tail])), e_norm=float(np.mean(e[tail])), v_a=float(np.mean(log.column('v_a')[tail])), a_lat_ref=float(np.mean(np.abs(log.column('a_lat_ref')[tail]))), heading_error_upwind=heading_error)
    report = MetricsReport(name=str(log.meta.get('name', scenario.name)), samples=len(log), duration=float(t[-1] - t[0]), track_error=ErrorStats.of(e), window=window, window_track_error=window_stats, undershoot_mean=float(np.mean(under)) if under.size else 0.0, undershoot_std=float(np.std(under)) if under.size else 0.0, undershoot_samples=int(under.size), infeasible_fraction=float(np.mean(log.column('feas') <= 0.0)), max_command_step=float(np.max(steps)) if steps.size else 0.0, saturation=sat_counts, degenerate_samples=int(np.sum(log.column('degenerate') > 0.5)), terminal=terminal)
    if sat_counts.asin:
        logger.warning('%s: curvature asin argument saturated in %d samples', report.name, sat_counts.asin)
    return report

def feasibility_conformance(p: FeasibilityParams=DEFAULT_PARAMS, n_beta: int=1000, n_lambda: int=1000, beta_max: float=3.0) -> Dict[str, Any]:
    """Compare 32-bit against 64-bit grid feasibility."""
    beta = np.linspace(0.0, beta_max, n_beta)
    lam = np.linspace(-math.pi, math.pi, n_lambda)
    report = {'grid': [n_beta, n_lambda], 'beta_max': beta_max, 'tolerance': CONFORMANCE_TOL, 'status': 'pass', 'issues': []}
    bb, ll = np.meshgrid(beta, lam, indexing='ij')
    f64 = feas_array(bb, ll, p, np.float64)
    f32 = feas_array(bb, ll, p, np.float32)
    diff = np.abs(f64 - f32.astype(np.float64))
    worst = np.unravel_index(int(np.argmax(diff)), diff.shape)
    report['max_abs_diff'] = float(diff[worst])
    report['worst'] = {'beta': float(beta[worst[0]]), 'lambda': float(lam[worst[1]])}
    if not np.all(np.isfinite(f32)):
        report['issues'].append('non-finite 32-bit feasibility values')
    if report['max_abs_diff'] > CONFORMANCE_TOL:
        report['issues'].append(f"max |f32 - f64| = {report['max_abs_diff']:.3e} exceeds {CONFORMANCE_TOL:g}")
    if report['issues']:
        report['status'] = 'fail'
    return report
