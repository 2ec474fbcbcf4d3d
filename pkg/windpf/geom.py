import math
from dataclasses import dataclass
from typing import Tuple

EPS_VEC = 1e-06
TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi

@dataclass(frozen=True)
class Vec2:
    x: float = 0.0
    y: float = 0.0

    def __add__(self, other: 'Vec2') -> 'Vec2':
        return Vec2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: 'Vec2') -> 'Vec2':
        return Vec2(self.x - other.x, self.y - other.y)

    def __mul__(self, s: float) -> 'Vec2':
        return Vec2(self.x * s, self.y * s)
    __rmul__ = __mul__

    def __truediv__(self, s: float) -> 'Vec2':
        return Vec2(self.x / s, self.y / s)

    def __neg__(self) -> 'Vec2':
        return Vec2(-self.x, -self.y)

    def dot(self, other: 'Vec2') -> float:
        return self.x * other.x + self.y * other.y

    def cross(self, other: 'Vec2') -> float:
        return self.x * other.y - self.y * other.x

    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def has_direction(self) -> bool:
        return self.norm() > EPS_VEC

    def unit(self) -> 'Vec2':
        n = self.norm()
        assert n > EPS_VEC, 'unit() of a vector without direction'
        return Vec2(self.x / n, self.y / n)

    def perp(self) -> 'Vec2':
        return Vec2(-self.y, self.x)

    def angle(self) -> float:
        if not self.has_direction():
            return 0.0
        return wrap(math.atan2(self.y, self.x))

    def is_finite(self) -> bool:
        return math.isfinite(self.x) and math.isfinite(self.y)

    def as_tuple(self) -> Tuple[float, float]:
        return (self.x, self.y)

    @staticmethod
    def from_angle(a: float, length: float=1.0) -> 'Vec2':
        return Vec2(length * math.cos(a), length * math.sin(a))

    @staticmethod
    def of(xy) -> 'Vec2':
        return Vec2(float(xy[0]), float(xy[1]))

def wrap(a: float) -> float:
    # (-pi, pi]
    a = math.fmod(a + math.pi, TWO_PI)
    if a <= 0.0:
        a += TWO_PI
    return a - math.pi

def signed_angle(a: Vec2, b: Vec2) -> float:
    if a.norm() <= EPS_VEC or b.norm() <= EPS_VEC:
        return 0.0
    return wrap(math.atan2(a.cross(b), a.dot(b)))

def rot(v: Vec2, a: float) -> Vec2:
    c = math.cos(a)
    s = math.sin(a)
    return Vec2(c * v.x - s * v.y, s * v.x + c * v.y)

def sat(v: float, lo: float, hi: float) -> float:
    assert lo <= hi, f'sat bounds inverted: {lo} > {hi}'
    return min(max(v, lo), hi)

def normalize_or(v: Vec2, fallback: Vec2) -> Tuple[Vec2, bool]:
    n = v.norm()
    if n < EPS_VEC:
        return (fallback, True)
    return (Vec2(v.x / n, v.y / n), False)
