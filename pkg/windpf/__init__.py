from .geom import Vec2
from .feasibility import FeasibilityParams, feas
from .path import Circle, Line
from .airspeed import AirspeedConfig, AirspeedMode
from .guidance import GuidanceConfig, GuidanceOutput, VehicleState, guidance_step
from .windsim import SimConfig, SimLog, run
from .config import Scenario, load_scenario
__version__ = '0.3.0'
