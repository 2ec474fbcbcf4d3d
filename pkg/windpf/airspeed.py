from enum import Enum
from typing import NamedTuple, Tuple
from pydantic import BaseModel, ConfigDict, Field, model_validator
from .geom import Vec2, EPS_VEC, sat
from .feasibility import FeasibilityParams, DEFAULT_PARAMS, feas

class AirspeedMode(str, Enum):
    DISABLED = 'disabled'
    WIND_EXCESS = 'wind_excess'
    TRACK_KEEPING = 'track_keeping'
    MIN_GROUND_SPEED = 'min_ground_speed'

class AirspeedConfig(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    mode: AirspeedMode = AirspeedMode.WIND_EXCESS
    v_a_nom: float = Field(8.8, gt=0.0)
    v_a_max: float = Field(15.0, gt=0.0)
    e_bar_buf: float = Field(0.5, gt=0.0, le=1.0)
    dw_buf: float = Field(0.5, gt=0.0)
    dv_e_max: float = Field(3.0, ge=0.0)
    v_g_min: float = Field(0.0, ge=0.0)

    @model_validator(mode='after')
    def _check_limits(self):
        if self.v_a_max < self.v_a_nom:
            raise ValueError(f'v_a_max ({self.v_a_max}) must be >= v_a_nom ({self.v_a_nom})')
        return self

    @property
    def dv_a_max(self) -> float:
        return max(self.v_a_max - self.v_a_nom, 0.0)

    @property
    def min_ground_speed_active(self) -> bool:
        return self.mode == AirspeedMode.MIN_GROUND_SPEED

class WindExcess(NamedTuple):
    dv_w: float
    dw: float
    beta_eff: float

class AirspeedCommand(NamedTuple):
    v_a_ref: float
    dv_w: float
    dv_e: float
    dw: float
    beta_eff: float

def effective_wind_ratio(w: float, v_a: float, cfg: AirspeedConfig) -> float:
    if cfg.min_ground_speed_active:
        return (w + cfg.v_g_min) / v_a
    return w / v_a

def wind_excess_increment(w: float, lam: float, v_a: float, cfg: AirspeedConfig, p: FeasibilityParams=DEFAULT_PARAMS) -> WindExcess:
    if cfg.mode == AirspeedMode.DISABLED:
        return WindExcess(0.0, 0.0, 0.0)
    beta_eff = effective_wind_ratio(w, v_a, cfg)
    excess = w - cfg.v_a_nom
    if cfg.min_ground_speed_active:
        excess += cfg.v_g_min
    dw = sat(excess, 0.0, cfg.dv_a_max)
    if dw == 0.0:
        return WindExcess(0.0, 0.0, beta_eff)
    return WindExcess(dw * (1.0 - feas(beta_eff, lam, p)), dw, beta_eff)

def track_keeping_increment(e_bar: float, dw: float, lam: float, beta: float, cfg: AirspeedConfig, p: FeasibilityParams=DEFAULT_PARAMS) -> float:
    if cfg.mode != AirspeedMode.TRACK_KEEPING:
        return 0.0
    k_e = sat(e_bar / cfg.e_bar_buf, 0.0, 1.0)
    k_w = sat(dw / cfg.dw_buf, 0.0, 1.0)
    if k_e == 0.0 or k_w == 0.0:
        return 0.0
    return cfg.dv_e_max * k_e * k_w * (1.0 - feas(beta, lam, p))

def airspeed_reference(dv_w: float, dv_e: float, cfg: AirspeedConfig) -> float:
    return cfg.v_a_nom + min(dv_w + dv_e, cfg.dv_a_max)

def forward_ground_speed(v_g: Vec2, v_a_vec: Vec2) -> Tuple[float, bool]:
    n = v_a_vec.norm()
    if n <= EPS_VEC:
        return (0.0, True)
    return (v_g.dot(v_a_vec) / n, False)

def compensate(w: float, lam: float, v_a: float, e_bar: float, cfg: AirspeedConfig, p: FeasibilityParams=DEFAULT_PARAMS) -> AirspeedCommand:
    """Full airspeed reference for one guidance update: wind excess plus track keeping."""
    excess = wind_excess_increment(w, lam, v_a, cfg, p)
    dv_e = track_keeping_increment(e_bar, excess.dw, lam, w / v_a, cfg, p)
    return AirspeedCommand(airspeed_reference(excess.dv_w, dv_e, cfg), excess.dv_w, dv_e, excess.dw, excess.beta_eff)
