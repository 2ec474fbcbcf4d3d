import math
import logging
import warnings
from dataclasses import dataclass, field
from typing import NamedTuple, Tuple
from pydantic import BaseModel, ConfigDict, Field
from .geom import Vec2, EPS_VEC, HALF_PI, signed_angle, rot, sat, normalize_or
from .feasibility import FeasibilityParams, DEFAULT_PARAMS, feas
from .path import PathRef
from .airspeed import AirspeedConfig, compensate, effective_wind_ratio, forward_ground_speed
from .exceptions import SaturationWarning
logger = logging.getLogger(__name__)
EPS_DEN = 0.0001

class GuidanceConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    k: float = Field(0.11, gt=0.0)
    k_mult: float = Field(1.1, ge=1.0)
    t_b: float = Field(7.0, gt=0.0)
    v_g_co: float = Field(1.0, gt=0.0)
    g: float = Field(9.81, gt=0.0)
    phi_max_deg: float = Field(35.0, gt=0.0, lt=90.0)
    v_a_floor: float = Field(2.0, gt=0.0)
    feasibility: FeasibilityParams = Field(default_factory=FeasibilityParams)
    airspeed: AirspeedConfig = Field(default_factory=AirspeedConfig)

    @property
    def phi_max(self) -> float:
        return math.radians(self.phi_max_deg)

@dataclass(frozen=True)
class VehicleState:
    r: Vec2
    v_g: Vec2
    phi: float = 0.0

    def airspeed_vector(self, w: Vec2) -> Vec2:
        return self.v_g - w

    @property
    def course(self) -> float:
        return self.v_g.angle()

class LookAhead(NamedTuple):
    theta_l: float
    e_bar: float
    sigma_l: float

class WindTriangle(NamedTuple):
    lambda0: float
    x0: float
    y0: float
    v_g0: float

class CurvatureRotation(NamedTuple):
    eta_c0: float
    eta_c: float
    saturated: bool

@dataclass(frozen=True)
class GuidanceTelemetry:
    lam: float = 0.0
    beta: float = 0.0
    beta_eff: float = 0.0
    feas: float = 1.0
    e_norm: float = 0.0
    e_bar: float = 0.0
    e_b: float = 0.0
    theta_l: float = HALF_PI
    sigma_l: float = 1.0
    x: float = 0.0
    eta_c0: float = 0.0
    eta_c: float = 0.0
    eta_a: float = 0.0
    k_adj: float = 0.0
    l_hat: Vec2 = Vec2(1.0, 0.0)
    l_a: Vec2 = Vec2(1.0, 0.0)
    infeasible_blend: float = 0.0
    dv_w: float = 0.0
    dv_e: float = 0.0
    v_g_fwd: float = 0.0
    asin_saturated: bool = False
    degenerate_flags: Tuple[str, ...] = field(default_factory=tuple)

@dataclass(frozen=True)
class GuidanceOutput:
    roll_ref: float
    a_lat_ref: float
    v_a_ref: float
    telemetry: GuidanceTelemetry

    @property
    def heading_ref(self) -> float:
        return self.telemetry.l_a.angle()

def track_error_boundary(v_g: float, t_b: float, v_g_co: float) -> float:
    if v_g < v_g_co:
        return 0.5 * t_b / v_g_co * v_g * v_g + 0.5 * t_b * v_g_co
    return t_b * v_g

def lookahead_angle(e_norm: float, e_b: float) -> LookAhead:
    e_bar = sat(e_norm / e_b, 0.0, 1.0)
    theta_l = HALF_PI * (1.0 - e_bar) ** 2
    return LookAhead(theta_l, e_bar, math.sin(theta_l) ** 2)

def lookahead_vector(e_hat: Vec2, t_hat: Vec2, theta_l: float) -> Tuple[Vec2, bool]:
    return normalize_or(e_hat * math.cos(theta_l) + t_hat * math.sin(theta_l), t_hat)

def wind_triangle_on_track(w: Vec2, v_a: float, t_hat: Vec2) -> WindTriangle:
    w_norm = w.norm()
    if w_norm <= EPS_VEC:
        return WindTriangle(0.0, 0.0, math.pi, v_a)
    beta = w_norm / v_a
    lambda0 = signed_angle(w, t_hat)
    x0 = math.asin(sat(beta * math.sin(lambda0), -1.0, 1.0))
    y0 = math.pi - abs(x0) - abs(lambda0)
    # law of cosines, rearranged to stay accurate when v_a ~ w and y0 ~ 0
    h = math.sin(0.5 * y0)
    v_g0 = math.sqrt((v_a - w_norm) ** 2 + 4.0 * v_a * w_norm * h * h)
    return WindTriangle(lambda0, x0, y0, v_g0)

def airmass_rotation(beta: float, lam: float) -> float:
    return math.asin(sat(beta * math.sin(lam), -1.0, 1.0))

def curvature_rotation(wt: WindTriangle, beta: float, lam: float, kappa: float, v_a: float, k_adj: float, sigma_l: float, p: FeasibilityParams=DEFAULT_PARAMS) -> CurvatureRotation:
    if kappa == 0.0:
        return CurvatureRotation(0.0, 0.0, False)
    f0 = feas(beta, wt.lambda0, p)
    if f0 == 0.0:
        return CurvatureRotation(0.0, 0.0, False)
    den = math.sqrt(max(1.0 - (beta * math.sin(wt.lambda0)) ** 2, EPS_DEN))
    arg = f0 * wt.v_g0 * kappa / (v_a * k_adj) * (1.0 + beta * math.cos(wt.lambda0) / den)
    saturated = abs(arg) > 1.0
    if saturated:
        logger.debug('curvature rotation argument saturated: %.6f (beta=%.3f, kappa=%.4f, sigma_l=%.3f)', arg, beta, kappa, sigma_l)
        warnings.warn(f'curvature rotation asin argument {arg:.4f} saturated', SaturationWarning, stacklevel=2)
    eta_c0 = math.asin(sat(arg, -1.0, 1.0))
    return CurvatureRotation(eta_c0, feas(beta, lam, p) * sigma_l * eta_c0, saturated)

def adaptive_gain(k: float, k_mult: float, beta: float, kappa: float, sigma_l: float) -> float:
    if beta >= 1.0:
        k_max = max(k, k_mult * (1.0 + beta) ** 2 * abs(kappa))
    else:
        k_max = max(k, 4.0 * k_mult * abs(kappa))
    return k_max + sigma_l * (k - k_max)

def infeasible_lookahead(l_hat: Vec2, w: Vec2, v_a: float) -> Tuple[Vec2, bool]:
    w_norm = w.norm()
    if w_norm <= EPS_VEC:
        return (l_hat, True)
    upwind = -w / w_norm
    root = math.sqrt(max(w_norm * w_norm - v_a * v_a, 0.0))
    return normalize_or(l_hat * root - w, upwind)

def blend_lookahead(l_feas: Vec2, l_infeas: Vec2, f: float) -> Tuple[Vec2, bool]:
    if f >= 1.0:
        return (l_feas, False)
    if f <= 0.0:
        return (l_infeas, False)
    return normalize_or(l_feas * f + l_infeas * (1.0 - f), l_infeas)

def _frozen_output(cfg: GuidanceConfig, e_norm: float) -> GuidanceOutput:
    telemetry = GuidanceTelemetry(e_norm=e_norm, k_adj=cfg.k, degenerate_flags=('invalid_airspeed',))
    return GuidanceOutput(0.0, 0.0, cfg.airspeed.v_a_nom, telemetry)

def guidance_step(state: VehicleState, w: Vec2, path: PathRef, cfg: GuidanceConfig) -> GuidanceOutput:
    flags = []
    proj = path.project(state.r)
    if proj.degenerate:
        flags.append('degenerate_projection')
    e = proj.track_error_vec
    e_norm = e.norm()
    v_a_vec = state.airspeed_vector(w)
    v_a = v_a_vec.norm()
    if not v_a > cfg.v_a_floor:
        return _frozen_output(cfg, e_norm)
    p = cfg.feasibility
    t_hat = proj.tangent
    e_b = track_error_boundary(state.v_g.norm(), cfg.t_b, cfg.v_g_co)
    la = lookahead_angle(e_norm, e_b)
    e_hat = e / e_norm if e_norm > EPS_VEC else t_hat.perp()
    l_hat, degenerate = lookahead_vector(e_hat, t_hat, la.theta_l)
    if degenerate:
        flags.append('degenerate_lookahead')
    w_norm = w.norm()
    lam = signed_angle(w, l_hat)
    beta = w_norm / v_a
    beta_eff = effective_wind_ratio(w_norm, v_a, cfg.airspeed)
    f = feas(beta_eff, lam, p)
    k_adj = adaptive_gain(cfg.k, cfg.k_mult, beta, proj.curvature, la.sigma_l)
    wt = wind_triangle_on_track(w, v_a, t_hat)
    cr = curvature_rotation(wt, beta, lam, proj.curvature, v_a, k_adj, la.sigma_l, p)
    if cr.saturated:
        flags.append('asin_saturation')
    x = airmass_rotation(beta, lam)
    l_feas = rot(l_hat, x + cr.eta_c)
    if f < 1.0:
        l_infeas, degenerate = infeasible_lookahead(l_hat, w, v_a)
        if degenerate:
            flags.append('degenerate_infeasible')
        l_a, degenerate = blend_lookahead(l_feas, l_infeas, f)
        if degenerate:
            flags.append('degenerate_blend')
    else:
        l_a = l_feas
    eta_a = signed_angle(v_a_vec, l_a)
    a_lat = k_adj * v_a * v_a * math.sin(eta_a)
    phi_max = cfg.phi_max
    roll_ref = sat(math.atan(a_lat / cfg.g), -phi_max, phi_max)
    cmd = compensate(w_norm, lam, v_a, la.e_bar, cfg.airspeed, p)
    v_g_fwd, _ = forward_ground_speed(state.v_g, v_a_vec)
    telemetry = GuidanceTelemetry(lam=lam, beta=beta, beta_eff=beta_eff, feas=f, e_norm=e_norm, e_bar=la.e_bar, e_b=e_b, theta_l=la.theta_l, sigma_l=la.sigma_l, x=x, eta_c0=cr.eta_c0, eta_c=cr.eta_c, eta_a=eta_a, k_adj=k_adj, l_hat=l_hat, l_a=l_a, infeasible_blend=1.0 - f, dv_w=cmd.dv_w, dv_e=cmd.dv_e, v_g_fwd=v_g_fwd, asin_saturated=cr.saturated, degenerate_flags=tuple(flags))
    return GuidanceOutput(roll_ref, a_lat, cmd.v_a_ref, telemetry)
