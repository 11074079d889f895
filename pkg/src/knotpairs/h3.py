"""Hyperbolic 3-space kernel.

Two models are used side by side: the upper half-space C x R+ for Moebius
actions and closed-form distances, and the Minkowski hyperboloid
{-x0^2+x1^2+x2^2+x3^2 = -1, x0 > 0} for tangent-vector work (angles,
projections, interpolation).  Isometries are 2x2 complex matrices of
determinant 1, identified up to global sign.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

BoundaryPoint = Optional[complex]  # None encodes the point at infinity

_METRIC = np.array([-1.0, 1.0, 1.0, 1.0])


class DegenerateMatrix(ValueError):
    """Determinant too far from 1."""


class NotLoxodromic(ValueError):
    pass


class CoincidentPoints(ValueError):
    pass


# ---------------------------------------------------------------------------
# Points and model conversion
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UHPoint:
    z: complex
    t: float

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError(f"height must be positive, got {self.t}")


def to_hyperboloid(p: UHPoint) -> np.ndarray:
    s = abs(p.z) ** 2 + p.t * p.t
    return np.array([
        (s + 1) / (2 * p.t),
        p.z.real / p.t,
        p.z.imag / p.t,
        (s - 1) / (2 * p.t),
    ])


def from_hyperboloid(x: np.ndarray) -> UHPoint:
    t = 1.0 / (x[0] - x[3])
    return UHPoint(complex(x[1], x[2]) * t, t)


def minkowski_inner(x: np.ndarray, y: np.ndarray) -> Union[float, np.ndarray]:
    """Signature (-,+,+,+) inner product; broadcasts over leading axes."""
    return np.sum(x * y * _METRIC, axis=-1)


def dist(p: UHPoint, q: UHPoint) -> float:
    """Hyperbolic distance, upper half-space closed form."""
    num = abs(p.z - q.z) ** 2 + (p.t - q.t) ** 2
    return float(np.arccosh(1.0 + num / (2.0 * p.t * q.t)))


def dist_hyperboloid(x: np.ndarray, y: np.ndarray) -> float:
    """Distance via cosh(d) = -<x, y>; the model cross-check for dist()."""
    return float(np.arccosh(max(-minkowski_inner(x, y), 1.0)))


def unit_tangent(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Unit vector at x pointing toward y (hyperboloid model)."""
    c = minkowski_inner(y, x)
    denom2 = c * c - 1.0
    if denom2 <= 1e-28:
        raise CoincidentPoints("points too close for a direction")
    m = y + c * x
    return m / math.sqrt(denom2)


def geodesic_step(x: np.ndarray, direction: np.ndarray, s: float) -> np.ndarray:
    """Exponential map: run distance s from x along a unit direction."""
    return x * math.cosh(s) + direction * math.sinh(s)


def interpolate(p: UHPoint, q: UHPoint, s: float) -> UHPoint:
    """Point at distance s from p along the geodesic toward q."""
    x, y = to_hyperboloid(p), to_hyperboloid(q)
    return from_hyperboloid(geodesic_step(x, unit_tangent(x, y), s))


# ---------------------------------------------------------------------------
# Isometries
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HypIsometry:
    a: complex
    b: complex
    c: complex
    d: complex

    @staticmethod
    def from_matrix(m) -> "HypIsometry":
        a, b, c, d = complex(m[0][0]), complex(m[0][1]), complex(m[1][0]), complex(m[1][1])
        det = a * d - b * c
        if abs(det) < 1e-30:
            raise DegenerateMatrix("singular matrix")
        s = cmath.sqrt(det)
        return HypIsometry(a / s, b / s, c / s, d / s)

    @staticmethod
    def identity() -> "HypIsometry":
        return HypIsometry(1, 0, 0, 1)

    @staticmethod
    def translation(tau: complex) -> "HypIsometry":
        return HypIsometry(1, tau, 0, 1)

    def matrix(self) -> np.ndarray:
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=complex)

    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def trace(self) -> complex:
        return self.a + self.d

    def __matmul__(self, o: "HypIsometry") -> "HypIsometry":
        return HypIsometry(
            self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d,
        )

    def inverse(self) -> "HypIsometry":
        return HypIsometry(self.d, -self.b, -self.c, self.a)

    def __pow__(self, n: int) -> "HypIsometry":
        out, g = HypIsometry.identity(), self if n >= 0 else self.inverse()
        for _ in range(abs(n)):
            out = out @ g
        return out


def psl_distance(g: HypIsometry, h: HypIsometry) -> float:
    """Entrywise distance up to the global sign ambiguity."""
    mg, mh = g.matrix(), h.matrix()
    return float(min(np.abs(mg - mh).max(), np.abs(mg + mh).max()))


def mobius_apply(g: HypIsometry, p: UHPoint) -> UHPoint:
    """Poincare extension of the Moebius action to upper half space."""
    den = abs(g.c * p.z + g.d) ** 2 + abs(g.c) ** 2 * p.t * p.t
    z = ((g.a * p.z + g.b) * (g.c * p.z + g.d).conjugate()
         + g.a * g.c.conjugate() * p.t * p.t) / den
    return UHPoint(z, p.t / den)


def mobius_boundary(g: HypIsometry, z: BoundaryPoint) -> BoundaryPoint:
    if z is None:
        return g.a / g.c if g.c != 0 else None
    den = g.c * z + g.d
    if den == 0:
        return None
    return (g.a * z + g.b) / den


# ---------------------------------------------------------------------------
# Classification and complex length
# ---------------------------------------------------------------------------

class ComplexLength(NamedTuple):
    a: float  # translation, >= 0
    b: float  # rotation, in (-pi, pi]


def _wrap_angle(b: float) -> float:
    b = math.remainder(b, 2 * math.pi)
    return math.pi if b <= -math.pi else b


def complex_length_from(z: complex) -> ComplexLength:
    """Normalize a complex length defined up to sign and mod 2*pi*i."""
    if z.real < 0:
        z = -z
    return ComplexLength(z.real, _wrap_angle(z.imag))


def classify_and_length(g: HypIsometry, tol: float = 1e-10,
                        det_tol: float = 1e-9) -> tuple[str, ComplexLength]:
    """Isometry class from the trace plus the translation/rotation length.

    Trace +-2 gives parabolic, real trace in (-2,2) elliptic, the rest
    loxodromic; the returned length satisfies 2cosh((a+ib)/2) = +-trace.
    """
    # det = ad - bc cancels catastrophically for large entries; the check can
    # only be as sharp as that evaluation allows
    scale = max(abs(g.a * g.d), abs(g.b * g.c), 1.0)
    if abs(g.det() - 1) > max(det_tol, 64 * np.finfo(float).eps * scale):
        raise DegenerateMatrix(f"det = {g.det()}")
    tr = g.trace()
    if psl_distance(g, HypIsometry.identity()) < tol:
        return "identity", ComplexLength(0.0, 0.0)
    if abs(tr.imag) < tol and abs(abs(tr.real) - 2) < tol:
        return "parabolic", ComplexLength(0.0, 0.0)
    if abs(tr.imag) < tol and abs(tr.real) < 2:
        mu = (tr + cmath.sqrt(tr * tr - 4)) / 2  # unit modulus
        return "elliptic", ComplexLength(0.0, _wrap_angle(2 * cmath.phase(mu)))
    root = cmath.sqrt(tr * tr - 4)
    mu = (tr + root) / 2
    if abs(mu) < 1:
        mu = (tr - root) / 2
    ell = 2 * cmath.log(mu)
    return "loxodromic", ComplexLength(ell.real, _wrap_angle(ell.imag))


# ---------------------------------------------------------------------------
# Geodesics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Geodesic:
    e1: BoundaryPoint
    e2: BoundaryPoint

    def __post_init__(self):
        if self.e1 == self.e2:
            raise ValueError("geodesic endpoints must be distinct")


class Tube(NamedTuple):
    core: Geodesic
    r: float


def axis_endpoints(g: HypIsometry) -> Geodesic:
    cls, _ = classify_and_length(g)
    if cls != "loxodromic":
        raise NotLoxodromic(f"isometry is {cls}")
    if abs(g.c) < 1e-14:
        return Geodesic(g.b / (g.d - g.a), None)
    disc = cmath.sqrt((g.a - g.d) ** 2 + 4 * g.b * g.c)
    return Geodesic((g.a - g.d + disc) / (2 * g.c), (g.a - g.d - disc) / (2 * g.c))


def point_on_geodesic(geo: Geodesic, s: float) -> UHPoint:
    """Arclength parametrization; s = 0 is the top of the semicircle (or the
    height-1 point of a vertical line)."""
    e1, e2 = geo.e1, geo.e2
    if e1 is None:
        e1, e2 = e2, e1
    if e2 is None:
        return UHPoint(e1, math.exp(s))
    mid = (e1 + e2) / 2
    rad = abs(e2 - e1) / 2
    u = (e2 - e1) / abs(e2 - e1)
    return UHPoint(mid + rad * math.tanh(s) * u, rad / math.cosh(s))


def geodesic_frame(geo: Geodesic) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (timelike, spacelike) basis of the plane spanning geo."""
    x = to_hyperboloid(point_on_geodesic(geo, 0.0))
    y = to_hyperboloid(point_on_geodesic(geo, 1.0))
    w = y + minkowski_inner(y, x) * x
    return x, w / math.sqrt(minkowski_inner(w, w))


def dist_to_geodesic(p: UHPoint, geo: Geodesic) -> float:
    frame = geodesic_frame(geo)
    return float(dist_to_geodesic_frame(to_hyperboloid(p), frame))


def dist_to_geodesic_frame(x: np.ndarray, frame) -> Union[float, np.ndarray]:
    """Distance from hyperboloid point(s) to the geodesic with the given
    frame; vectorized over leading axes of x."""
    e0, e1 = frame
    a = minkowski_inner(x, e0)
    b = minkowski_inner(x, e1)
    return np.arccosh(np.sqrt(np.maximum(a * a - b * b, 1.0)))


def project_to_geodesic(p: UHPoint, geo: Geodesic) -> UHPoint:
    """Nearest-point projection (the unique distance minimizer)."""
    e0, e1 = geodesic_frame(geo)
    x = to_hyperboloid(p)
    f = -minkowski_inner(x, e0) * e0 + minkowski_inner(x, e1) * e1
    nrm = -minkowski_inner(f, f)
    if nrm <= 0:
        raise ValueError("projection degenerated; point on the ideal boundary?")
    return from_hyperboloid(f / math.sqrt(nrm))


def vertex_angle(pprev: UHPoint, p: UHPoint, pnext: UHPoint) -> float:
    """Angle in [0, pi] at p between the segments [pprev, p] and [p, pnext],
    measured between unit tangents in the hyperboloid model."""
    x = to_hyperboloid(p)
    try:
        m1 = unit_tangent(x, to_hyperboloid(pprev))
        m2 = unit_tangent(x, to_hyperboloid(pnext))
    except CoincidentPoints:
        raise CoincidentPoints("vertex_angle needs three distinct points")
    return float(np.arccos(np.clip(minkowski_inner(m1, m2), -1.0, 1.0)))


# ---------------------------------------------------------------------------
# Tube and horosphere translation lengths
# ---------------------------------------------------------------------------

def tube_boundary_translation(length: ComplexLength, r: float) -> float:
    """Translation length of a loxodromic on the boundary of the radius-r
    tube around its axis: cosh|g| = cosh(a) + sinh^2(r) (cosh(a) - cos(b))."""
    a, b = length
    if a <= 0:
        raise NotLoxodromic("need positive translation length")
    if r < 0:
        raise ValueError("tube radius must be >= 0")
    gap = math.cosh(a) - math.cos(b)
    # the two closed forms agree: |cosh(a+ib) - 1| == cosh(a) - cos(b)
    assert abs(abs(cmath.cosh(complex(a, b)) - 1) - gap) < 1e-12 * max(1.0, gap)
    return float(np.arccosh(math.cosh(a) + math.sinh(r) ** 2 * gap))


def horosphere_translation(tau: complex, t0: float) -> float:
    """Translation length of z -> z + tau on the horosphere at height t0,
    measured in the ambient metric: cosh|l| = 1 + |tau|^2 / (2 t0^2)."""
    if not t0 > 0:
        raise ValueError("horosphere height must be positive")
    return float(np.arccosh(1.0 + abs(tau) ** 2 / (2.0 * t0 * t0)))


def chord_angle(r: float, d: float, phi: float) -> float:
    """Angle between a boundary chord of a radius-r tube and the boundary,
    for endpoints at distance d differing by twist phi:
    sin(beta) = tanh(r) (cosh(d) - cos(phi)) / sinh(d), clamped to [0, 1]."""
    if not (r > 0 and d > 0):
        raise ValueError("need r > 0 and d > 0")
    s = math.tanh(r) * (math.cosh(d) - math.cos(phi)) / math.sinh(d)
    return math.asin(min(max(s, 0.0), 1.0))


class BetaConstants(NamedTuple):
    r: float
    kappa: float
    q: float
    margin: float


def beta_constants(beta: float, margin: float = 0.1) -> BetaConstants:
    """Constants guaranteeing chord angles: radius r(beta) and chord length
    kappa(beta) such that r >= r(beta) and d >= kappa(beta) force
    chord_angle >= beta.  Built from sin(beta) coth(r(beta)) = q = tanh(kappa/2)."""
    if not 0 < beta < math.pi / 2:
        raise ValueError("beta must lie in (0, pi/2)")
    r = math.atanh(math.sin(beta)) + margin
    q = math.sin(beta) / math.tanh(r)
    if not q < 1:
        raise ValueError("margin too small")
    return BetaConstants(r, 2 * math.atanh(q), q, margin)


# ---------------------------------------------------------------------------
# Geodesic-to-geodesic distance (numeric minimization)
# ---------------------------------------------------------------------------

def geodesic_distance(g1: Geodesic, g2: Geodesic,
                      tol: float = 1e-9, max_iter: int = 10_000
                      ) -> tuple[float, UHPoint, UHPoint]:
    """Distance between two geodesics with the feet of the minimizing segment,
    by alternating nearest-point projection (a contraction onto the common
    perpendicular; 0 distance means they meet)."""
    f1 = geodesic_frame(g1)
    f2 = geodesic_frame(g2)
    x = to_hyperboloid(point_on_geodesic(g2, 0.0))
    prev = None
    for _ in range(max_iter):
        x = _foot(x, f1)
        y = _foot(x, f2)
        d = dist_hyperboloid(x, y)
        if prev is not None and abs(prev - d) < tol:
            return d, from_hyperboloid(x), from_hyperboloid(y)
        prev = d
        x = y
    return prev, from_hyperboloid(_foot(x, f1)), from_hyperboloid(x)


def _foot(x: np.ndarray, frame) -> np.ndarray:
    e0, e1 = frame
    f = -minkowski_inner(x, e0) * e0 + minkowski_inner(x, e1) * e1
    return f / math.sqrt(-minkowski_inner(f, f))
