import math
from typing import Tuple
import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from .geom import HALF_PI

# slack on the binary boundary so that e.g. 2*sin(pi/6) counts as infeasible
BOUNDARY_TOL = 1e-12

class FeasibilityParams(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    beta_buf: float = Field(0.1, gt=0.0, lt=1.0)
    lambda_co_deg: float = Field(1.0, gt=0.0, lt=90.0)

    @property
    def lambda_co(self) -> float:
        return math.radians(self.lambda_co_deg)

DEFAULT_PARAMS = FeasibilityParams()

def lambda_bar(lam: float) -> float:
    return min(abs(lam), HALF_PI)

def bearing_infeasible(beta: float, lam: float) -> bool:
    a = abs(lam)
    if beta * math.sin(a) >= 1.0 - BOUNDARY_TOL:
        return True
    return a >= HALF_PI and beta > 1.0

def feas_legacy(beta: float, lam: float) -> float:
    if bearing_infeasible(beta, lam):
        return 0.0
    lb = lambda_bar(lam)
    c = math.cos(lb)
    if c < 1e-09:
        return 1.0 if beta <= 1.0 else 0.0
    num = math.sqrt(max(1.0 - (beta * math.sin(lb)) ** 2, 0.0))
    return min(max(num / c, 0.0), 1.0)

def beta_limits(lam_bar: float, p: FeasibilityParams=DEFAULT_PARAMS) -> Tuple[float, float]:
    lco = p.lambda_co
    if lam_bar < lco:
        s = math.sin(lco)
        b_plus_co = 1.0 / s
        m_co = math.cos(lco) / (s * s)
        b_minus_co = (b_plus_co - 2.0) * p.beta_buf + 1.0
        b_plus = b_plus_co + m_co * (lco - lam_bar)
        b_minus = b_minus_co + m_co * (lco - lam_bar) * p.beta_buf
    else:
        b_plus = 1.0 / math.sin(lam_bar)
        b_minus = (b_plus - 2.0) * p.beta_buf + 1.0
    return (b_minus, b_plus)

def feas(beta: float, lam: float, p: FeasibilityParams=DEFAULT_PARAMS) -> float:
    b_minus, b_plus = beta_limits(lambda_bar(lam), p)
    if beta > b_plus - BOUNDARY_TOL * b_plus:
        return 0.0
    if beta > b_minus:
        s = min(max((beta - b_minus) / (b_plus - b_minus), 0.0), 1.0)
        return math.cos(HALF_PI * s) ** 2
    return 1.0

def beta_limits_array(lam_bar, p: FeasibilityParams=DEFAULT_PARAMS, dtype=np.float64):
    lam_bar = np.asarray(lam_bar, dtype=dtype)
    one = dtype(1.0)
    buf = dtype(p.beta_buf)
    lco = dtype(p.lambda_co)
    s_co = np.sin(lco)
    b_plus_co = one / s_co
    m_co = np.cos(lco) / (s_co * s_co)
    b_minus_co = (b_plus_co - dtype(2.0)) * buf + one
    below = lam_bar < lco
    safe = np.where(below, lco, lam_bar)
    b_plus = np.where(below, b_plus_co + m_co * (lco - lam_bar), one / np.sin(safe))
    b_minus = np.where(below, b_minus_co + m_co * (lco - lam_bar) * buf, (b_plus - dtype(2.0)) * buf + one)
    return (b_minus.astype(dtype, copy=False), b_plus.astype(dtype, copy=False))

def feas_array(beta, lam, p: FeasibilityParams=DEFAULT_PARAMS, dtype=np.float64) -> np.ndarray:
    """Vectorized feas over broadcastable beta/lambda arrays, evaluated entirely in `dtype`."""
    beta = np.asarray(beta, dtype=dtype)
    lam = np.asarray(lam, dtype=dtype)
    half_pi = dtype(HALF_PI)
    lb = np.minimum(np.abs(lam), half_pi)
    b_minus, b_plus = beta_limits_array(lb, p, dtype)
    s = np.clip((beta - b_minus) / (b_plus - b_minus), dtype(0.0), dtype(1.0))
    ramp = np.cos(half_pi * s) ** 2
    out = np.where(beta > b_minus, ramp, dtype(1.0))
    out = np.where(beta > b_plus - dtype(BOUNDARY_TOL) * b_plus, dtype(0.0), out)
    return out.astype(dtype, copy=False)
