import math
import logging
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple
import numpy as np
from .geom import Vec2, rot
from .feasibility import FeasibilityParams, DEFAULT_PARAMS, feas
from .airspeed import AirspeedConfig, AirspeedMode, compensate, effective_wind_ratio
from .guidance import GuidanceConfig, airmass_rotation, blend_lookahead, infeasible_lookahead
from .windsim import run
from .config import load_scenario
from .diagnostics import compute_metrics
from .storage import LogStorage
from .exceptions import ConfigError, SimulationError
logger = logging.getLogger(__name__)
FIXED_POINT_TOL = 1e-06
FIXED_POINT_MAX_ITER = 100
SWEEP_COLUMNS = ('w', 'lambda_deg', 'v_a_ref', 'v_g_fwd', 'converged', 'v_a_ref_min', 'v_g_fwd_min', 'converged_min')

class FixedPoint(NamedTuple):
    v_a_ref: float
    v_g_fwd: float
    iterations: int
    converged: bool

def steady_forward_ground_speed(w: float, lam: float, v_a: float, cfg: AirspeedConfig, p: FeasibilityParams=DEFAULT_PARAMS) -> float:
    """Forward ground speed once the heading has settled on the command for bearing `lam` (no path curvature)."""
    l_hat = Vec2(1.0, 0.0)
    w_vec = Vec2.from_angle(-lam, w)
    beta = w / v_a
    l_feas = rot(l_hat, airmass_rotation(beta, lam))
    f = feas(effective_wind_ratio(w, v_a, cfg), lam, p)
    l_a = l_feas
    if f < 1.0:
        l_infeas, _ = infeasible_lookahead(l_hat, w_vec, v_a)
        l_a, _ = blend_lookahead(l_feas, l_infeas, f)
    v_g = l_a * v_a + w_vec
    return v_g.dot(l_a)

def fixed_point(w: float, lam: float, cfg: AirspeedConfig, p: FeasibilityParams=DEFAULT_PARAMS, tol: float=FIXED_POINT_TOL, max_iter: int=FIXED_POINT_MAX_ITER) -> FixedPoint:
    lo, hi = (cfg.v_a_nom, cfg.v_a_nom + cfg.dv_a_max)
    v = cfg.v_a_nom
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        nxt = compensate(w, lam, v, 0.0, cfg, p).v_a_ref
        if abs(nxt - v) <= tol:
            v = nxt
            converged = True
            break
        # v_a_ref is non-increasing in v_a, so the residual sign brackets the fixed point
        if nxt > v:
            lo = v
        else:
            hi = v
        if hi - lo <= tol:
            v = 0.5 * (lo + hi)
            converged = True
            break
        v = nxt if lo < nxt < hi else 0.5 * (lo + hi)
    if not converged:
        logger.debug('fixed point did not converge at w=%.3f lambda=%.3f (last %.6f)', w, lam, v)
    return FixedPoint(v, steady_forward_ground_speed(w, lam, v, cfg, p), it, converged)

def map_configs(guidance: GuidanceConfig, v_g_min: float) -> Tuple[AirspeedConfig, AirspeedConfig]:
    base = guidance.airspeed
    plain = base.model_copy(update={'mode': AirspeedMode.WIND_EXCESS, 'v_g_min': 0.0})
    floor = base.model_copy(update={'mode': AirspeedMode.MIN_GROUND_SPEED, 'v_g_min': v_g_min})
    return (plain, floor)

def _sweep_row(args) -> List[Tuple[float, ...]]:
    w, lambdas_deg, plain, floor, p = args
    rows = []
    for lam_deg in lambdas_deg:
        lam = math.radians(lam_deg)
        a = fixed_point(w, lam, plain, p)
        b = fixed_point(w, lam, floor, p)
        rows.append((w, lam_deg, a.v_a_ref, a.v_g_fwd, float(a.converged), b.v_a_ref, b.v_g_fwd, float(b.converged)))
    return rows

def sweep_airspeed_map(grid, workers: int=1) -> np.ndarray:
    """Steady airspeed reference and forward ground speed per (w, lambda) cell, with and without v_g_min."""
    plain, floor = map_configs(grid.guidance, grid.v_g_min)
    lambdas = [float(v) for v in grid.lambda_deg.values()]
    jobs = [(float(w), lambdas, plain, floor, grid.guidance.feasibility) for w in grid.w.values()]
    if workers <= 1 or len(jobs) <= 1:
        chunks = [_sweep_row(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_sweep_row, jobs))
    data = np.asarray([r for chunk in chunks for r in chunk], dtype=np.float64).reshape(-1, len(SWEEP_COLUMNS))
    failed = int(np.sum(data[:, 4] < 0.5) + np.sum(data[:, 7] < 0.5))
    if failed:
        logger.warning('%d sweep cells did not converge', failed)
    logger.info('swept %d cells', data.shape[0])
    return data

def run_scenario(scenario, out_dir: str, archive: bool=False) -> Dict[str, Any]:
    log = run(scenario)
    report = compute_metrics(log, scenario)
    paths = LogStorage(out_dir).save(log, report, archive=archive)
    return {'scenario': scenario.name, 'status': 'ok', 'paths': paths, 'max_track_error': report.track_error.max}

def _batch_one(args) -> Dict[str, Any]:
    path, out_dir, seed, archive = args
    try:
        scenario = load_scenario(path).with_seed(seed)
    except ConfigError as e:
        return {'scenario': path, 'status': 'invalid', 'error': str(e)}
    try:
        return run_scenario(scenario, out_dir, archive)
    except ConfigError as e:
        return {'scenario': scenario.name, 'status': 'invalid', 'error': str(e)}
    except SimulationError as e:
        return {'scenario': scenario.name, 'status': 'failed', 'error': str(e)}

def run_batch(paths: Sequence[str], out_dir: str, seed: Optional[int]=None, workers: int=1, archive: bool=False) -> List[Dict[str, Any]]:
    jobs = [(p, out_dir, seed, archive) for p in paths]
    logger.info('batch of %d scenarios on %d workers', len(jobs), workers)
    if workers <= 1 or len(jobs) <= 1:
        return [_batch_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_batch_one, jobs))
