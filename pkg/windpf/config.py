import os
import logging
from typing import Annotated, List, Literal, Optional, Tuple, Type, TypeVar, Union
import numpy as np
import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from .geom import Vec2, EPS_VEC
from .path import Circle, Line, PathRef, R_MIN
from .guidance import GuidanceConfig
from .windsim import ConstantWind, InitialState, SimConfig, WindField
from .exceptions import ConfigError, ConfigIssue
from .utils import BUNDLED_DIR, GRIDS_DIR, normalize_target
logger = logging.getLogger(__name__)
M = TypeVar('M', bound=BaseModel)

class LineSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    kind: Literal['line'] = 'line'
    origin: Tuple[float, float] = (0.0, 0.0)
    direction: Tuple[float, float] = (1.0, 0.0)

    @field_validator('direction')
    @classmethod
    def _non_zero(cls, v):
        if Vec2.of(v).norm() <= EPS_VEC:
            raise ValueError('line direction must be non-zero')
        return v

    def build(self) -> Line:
        return Line(Vec2.of(self.origin), Vec2.of(self.direction))

class CircleSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    kind: Literal['circle'] = 'circle'
    center: Tuple[float, float] = (0.0, 0.0)
    radius: float = Field(50.0, ge=R_MIN)
    direction: Literal['ccw', 'cw'] = 'ccw'

    def build(self) -> Circle:
        return Circle(Vec2.of(self.center), self.radius, self.direction == 'ccw')
PathSpec = Annotated[Union[LineSpec, CircleSpec], Field(discriminator='kind')]

class MetricsWindow(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    start: float = Field(ge=0.0)
    end: float

    @model_validator(mode='after')
    def _ordered(self):
        if not self.end > self.start:
            raise ValueError(f'window end ({self.end}) must be after start ({self.start})')
        return self

class MetricsRequest(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    window: Optional[MetricsWindow] = None
    terminal_window: float = Field(5.0, gt=0.0)

class Scenario(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    name: str = Field('default', min_length=1, pattern='^[A-Za-z0-9_.-]+$')
    path: PathSpec = Field(default_factory=LineSpec)
    wind: WindField = Field(default_factory=ConstantWind)
    initial: InitialState = Field(default_factory=InitialState)
    guidance: GuidanceConfig = Field(default_factory=GuidanceConfig)
    sim: SimConfig = Field(default_factory=SimConfig)
    metrics: MetricsRequest = Field(default_factory=MetricsRequest)

    @model_validator(mode='after')
    def _check_consistency(self):
        w = self.metrics.window
        if w is not None and w.end > self.sim.duration:
            raise ValueError(f'metrics window end ({w.end}) exceeds sim.duration ({self.sim.duration})')
        # the guidance allocates roll against the same limits the simulator enforces
        for key in ('phi_max_deg', 'g'):
            if getattr(self.sim, key) != getattr(self.guidance, key):
                raise ValueError(f'sim.{key} ({getattr(self.sim, key)}) must equal guidance.{key} ({getattr(self.guidance, key)})')
        return self

    def build_path(self) -> PathRef:
        return self.path.build()

    def with_seed(self, seed: Optional[int]) -> 'Scenario':
        if seed is None:
            return self
        return self.model_copy(update={'sim': self.sim.model_copy(update={'seed': int(seed)})})

class GridRange(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    start: float
    stop: float
    num: int = Field(ge=1)

    @model_validator(mode='after')
    def _ordered(self):
        if self.stop < self.start:
            raise ValueError(f'stop ({self.stop}) must be >= start ({self.start})')
        return self

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.num)

class SweepGrid(BaseModel):
    model_config = ConfigDict(frozen=True, extra='forbid')
    name: str = Field('airspeed_map', min_length=1, pattern='^[A-Za-z0-9_.-]+$')
    w: GridRange = GridRange(start=0.0, stop=15.0, num=31)
    lambda_deg: GridRange = GridRange(start=0.0, stop=180.0, num=37)
    v_g_min: float = Field(3.0, gt=0.0)
    guidance: GuidanceConfig = Field(default_factory=GuidanceConfig)

    @field_validator('w')
    @classmethod
    def _non_negative(cls, v):
        if v.start < 0.0:
            raise ValueError('wind speeds must be >= 0')
        return v

def _node_line(node) -> Optional[int]:
    return node.start_mark.line + 1 if node is not None else None

def _locate(root, loc) -> Tuple[str, Optional[int]]:
    """Map a pydantic error location onto a dotted key and a 1-based source line."""
    node = root
    keys = []
    line = _node_line(root)
    for part in loc:
        if isinstance(node, yaml.MappingNode):
            match = None
            for k, v in node.value:
                if k.value == str(part):
                    match = v
                    line = _node_line(k)
                    break
            if match is None:
                # union tags like 'circle' appear in loc but not in the document
                if isinstance(part, str) and _is_tag(node, part):
                    continue
                keys.append(str(part))
                node = None
                continue
            keys.append(str(part))
            node = match
        elif isinstance(node, yaml.SequenceNode) and isinstance(part, int) and 0 <= part < len(node.value):
            keys.append(str(part))
            node = node.value[part]
            line = _node_line(node)
        else:
            keys.append(str(part))
    return ('.'.join(keys) or '<root>', line)

def _is_tag(node, part: str) -> bool:
    for k, v in node.value:
        if k.value == 'kind' and isinstance(v, yaml.ScalarNode) and v.value == part:
            return True
    return False

def _issues_from(err: ValidationError, root) -> List[ConfigIssue]:
    issues = []
    for e in err.errors():
        loc = [p for p in e['loc'] if not (isinstance(p, str) and p.startswith(('function-', 'tagged-union')))]
        key, line = _locate(root, loc) if root is not None else ('.'.join(map(str, loc)) or '<root>', None)
        msg = e['msg']
        if msg.startswith('Value error, '):
            msg = msg[len('Value error, '):]
        issues.append(ConfigIssue(key, msg, line))
    return issues

def _read_document(path: str):
    try:
        with open(path, 'r', encoding='utf-8') as f:
            text = f.read()
    except OSError as e:
        raise ConfigError([ConfigIssue('<file>', e.strerror or str(e))], path)
    try:
        root = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        line = mark.line + 1 if mark is not None else None
        raise ConfigError([ConfigIssue('<yaml>', str(getattr(e, 'problem', None) or e), line)], path)
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError([ConfigIssue('<root>', 'top level must be a mapping', _node_line(root))], path)
    return (data, root)

def load_model(model: Type[M], path: str) -> M:
    data, root = _read_document(path)
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise ConfigError(_issues_from(e, root), path)

def load_scenario(path: str) -> Scenario:
    resolved = normalize_target(path)
    scenario = load_model(Scenario, resolved)
    logger.debug('loaded scenario %s from %s', scenario.name, resolved)
    return scenario

def load_grid(path: str) -> SweepGrid:
    return load_model(SweepGrid, normalize_target(path, GRIDS_DIR))

def dump_model(model: BaseModel) -> str:
    return yaml.safe_dump(model.model_dump(mode='json'), sort_keys=False)

def dump_defaults() -> str:
    return dump_model(Scenario())

def bundled_scenarios() -> List[str]:
    if not os.path.isdir(BUNDLED_DIR):
        return []
    return sorted((f[:-5] for f in os.listdir(BUNDLED_DIR) if f.endswith('.yaml')))
