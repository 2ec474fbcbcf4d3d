from dataclasses import dataclass
from typing import Union
from .geom import Vec2, EPS_VEC

R_MIN = 1.0

@dataclass(frozen=True)
class PathProjection:
    closest_point: Vec2
    tangent: Vec2
    curvature: float
    track_error_vec: Vec2
    degenerate: bool = False

@dataclass(frozen=True)
class Line:
    origin: Vec2
    direction: Vec2

    def __post_init__(self):
        n = self.direction.norm()
        if n <= EPS_VEC:
            raise ValueError('Line direction must be non-zero')
        if abs(n - 1.0) > 1e-12:
            object.__setattr__(self, 'direction', self.direction / n)

    def project(self, r: Vec2) -> PathProjection:
        d = self.direction
        p = self.origin + d * (r - self.origin).dot(d)
        return PathProjection(p, d, 0.0, p - r)

    def point_at(self, s: float) -> Vec2:
        return self.origin + self.direction * s

@dataclass(frozen=True)
class Circle:
    center: Vec2
    radius: float
    ccw: bool = True

    def __post_init__(self):
        if not self.radius >= R_MIN:
            raise ValueError(f'Circle radius must be >= {R_MIN} m, got {self.radius}')

    @property
    def curvature(self) -> float:
        return 1.0 / self.radius if self.ccw else -1.0 / self.radius

    def project(self, r: Vec2) -> PathProjection:
        rel = r - self.center
        dist = rel.norm()
        degenerate = dist <= EPS_VEC
        # bearing 0 from the center when the vehicle sits on it
        radial = Vec2(1.0, 0.0) if degenerate else rel / dist
        p = self.center + radial * self.radius
        tangent = radial.perp() if self.ccw else -radial.perp()
        return PathProjection(p, tangent, self.curvature, p - r, degenerate)

    def point_at(self, theta: float) -> Vec2:
        return self.center + Vec2.from_angle(theta, self.radius)
PathRef = Union[Line, Circle]

def project(path: PathRef, r: Vec2) -> PathProjection:
    return path.project(r)
