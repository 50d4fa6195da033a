"""Upper half-plane arithmetic: points, oriented geodesics, PSL(2,R) isometries.

Everything downstream reduces to calls here.  The only model used is the
upper half-plane {Im z > 0} with boundary R u {inf}; isometries are real
2x2 matrices of determinant one, considered up to global sign.

Conventions fixed once and used everywhere:
  * matrices act as Mobius maps z -> (az+b)/(cz+d);
  * the stored sign makes the first entry of (a,b,c,d) with modulus
    above 1e-8 positive, so serialization is deterministic;
  * an oriented geodesic runs from endpoint u to endpoint v;
  * translation_along(g, L) with L > 0 moves points toward v;
  * elliptic angles are measured counterclockwise at the fixed point,
    in (0, 2pi), read off the derivative of the Mobius map there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ClassMismatchError

INF = math.inf

DET_TOL = 1e-12
PAR_TOL = 1e-9       # |tr|-2 window classified as parabolic
_SIGN_EPS = 1e-8


def _canonical(m):
    """Renormalize det to 1 and fix the global sign.

    For entries of magnitude s the float expression ad - bc carries an
    absolute error of order eps * s^2 while the entries themselves stay
    accurate to ~eps relative through products, so dividing by the
    computed determinant INJECTS error once s is large.  Renormalization
    is therefore applied only at small scale (construction-sized
    matrices); elsewhere determinant drift of unimodular products is
    multiplicative in eps and needs no correction.
    """
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    scale = max(abs(m[0, 0]), abs(m[0, 1]), abs(m[1, 0]), abs(m[1, 1]))
    if scale <= 32.0:
        if not np.isfinite(det) or det <= 0:
            raise ValueError(f"matrix has non-positive determinant {det}")
        m = m / math.sqrt(det)
    elif not np.isfinite(det):
        raise ValueError("matrix has non-finite entries")
    for x in (m[0, 0], m[0, 1], m[1, 0], m[1, 1]):
        if abs(x) > _SIGN_EPS:
            if x < 0:
                m = -m
            break
    return m


class Isometry:
    """Orientation-preserving isometry of H^2, a unimodular 2x2 matrix mod sign."""

    __slots__ = ("m",)

    def __init__(self, a, b, c, d):
        self.m = _canonical(np.array([[a, b], [c, d]], dtype=float))

    @classmethod
    def from_matrix(cls, m):
        iso = cls.__new__(cls)
        iso.m = _canonical(np.asarray(m, dtype=float))
        return iso

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    def compose(self, other: "Isometry") -> "Isometry":
        return Isometry.from_matrix(self.m @ other.m)

    __matmul__ = compose

    def inverse(self) -> "Isometry":
        a, b = self.m[0]
        c, d = self.m[1]
        return Isometry(d, -b, -c, a)

    def trace(self) -> float:
        return float(self.m[0, 0] + self.m[1, 1])

    def entries(self):
        return (float(self.m[0, 0]), float(self.m[0, 1]),
                float(self.m[1, 0]), float(self.m[1, 1]))

    def __call__(self, z):
        """Apply to a point of H^2 (complex) or of the boundary (float or INF)."""
        a, b = self.m[0]
        c, d = self.m[1]
        if isinstance(z, complex):
            return (a * z + b) / (c * z + d)
        scale = abs(a) + abs(b) + abs(c) + abs(d)
        if z == INF:
            return a / c if abs(c) > 1e-14 * scale else INF
        denom = c * z + d
        if abs(denom) < 1e-14 * scale * max(1.0, abs(z)):
            return INF
        return (a * z + b) / denom

    def apply(self, p: "HypPoint") -> "HypPoint":
        w = self(complex(p.x, p.y))
        return HypPoint(w.real, w.imag)

    def deriv(self, z: complex) -> complex:
        """Complex derivative of the Mobius map at z."""
        c, d = self.m[1]
        return 1.0 / (c * z + d) ** 2

    def almost_equal(self, other: "Isometry", tol: float = 1e-10) -> bool:
        """Equality in PSL(2,R): compare entrywise up to global sign."""
        d1 = np.max(np.abs(self.m - other.m))
        d2 = np.max(np.abs(self.m + other.m))
        return min(d1, d2) <= tol

    def __repr__(self):
        a, b, c, d = self.entries()
        return f"Isometry({a:.12g}, {b:.12g}, {c:.12g}, {d:.12g})"


@dataclass(frozen=True)
class HypPoint:
    """Point of the upper half-plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (self.y > 0):
            raise ValueError(f"not in the upper half-plane: y = {self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)


@dataclass(frozen=True)
class GeodesicLine:
    """Complete geodesic, oriented from boundary point u to boundary point v."""

    u: float
    v: float

    def __post_init__(self):
        if self.u == self.v:
            raise ValueError("geodesic endpoints must be distinct")

    def reversed(self) -> "GeodesicLine":
        return GeodesicLine(self.v, self.u)

    def key(self, digits: int = 9):
        """Orientation-free canonical key: sorted finite endpoints, INF last."""
        pts = sorted([self.u, self.v], key=lambda t: (t == INF, t))
        return tuple(round(t, digits) if t != INF else INF for t in pts)

    def is_vertical(self) -> bool:
        return self.u == INF or self.v == INF


IMAGINARY_AXIS = GeodesicLine(0.0, INF)


@dataclass(frozen=True)
class IsoClass:
    """Conjugacy class of an isometry: kind plus angle or length parameter."""

    kind: str                    # "identity" | "elliptic" | "parabolic" | "hyperbolic"
    angle: float | None = None   # elliptic rotation angle in (0, 2pi)
    length: float | None = None  # hyperbolic translation length > 0


def classify(f: Isometry, par_tol: float = PAR_TOL) -> IsoClass:
    """Classify by trace; the elliptic angle comes from the derivative at the fixed point.

    |tr| < 2 gives only |cos(angle/2)|, so the rotation sense is read off
    arg f'(p) which equals the full angle in (0, 2pi).
    """
    t = abs(f.trace())
    if np.max(np.abs(f.m - np.eye(2))) < 1e-12:
        return IsoClass("identity")
    if t < 2.0 - par_tol:
        p = fixed_point(f, _checked=False)
        ang = math.atan2(f.deriv(p.z).imag, f.deriv(p.z).real) % (2 * math.pi)
        return IsoClass("elliptic", angle=ang)
    if t > 2.0 + par_tol:
        return IsoClass("hyperbolic", length=2.0 * math.acosh(t / 2.0))
    return IsoClass("parabolic")


def translation_length(f: Isometry) -> float:
    c = classify(f)
    if c.kind != "hyperbolic":
        raise ClassMismatchError(f"translation_length needs a hyperbolic isometry, got {c.kind}")
    return c.length


def rotation_angle(f: Isometry) -> float:
    c = classify(f)
    if c.kind != "elliptic":
        raise ClassMismatchError(f"rotation_angle needs an elliptic isometry, got {c.kind}")
    return c.angle


def point_to_i(p: HypPoint) -> Isometry:
    """Isometry sending p to i (z -> (z - x)/y)."""
    s = math.sqrt(p.y)
    return Isometry(1.0 / s, -p.x / s, 0.0, s)


def rotation_about(p: HypPoint, theta: float) -> Isometry:
    """Elliptic isometry fixing p, counterclockwise angle theta in (0, 2pi)."""
    if not (0.0 < theta < 2.0 * math.pi):
        raise ValueError(f"rotation angle must lie in (0, 2pi), got {theta}")
    ch, sh = math.cos(theta / 2.0), math.sin(theta / 2.0)
    rot_i = Isometry(ch, sh, -sh, ch)
    n = point_to_i(p)
    return n.inverse() @ rot_i @ n


def axis_to_imaginary(g: GeodesicLine) -> Isometry:
    """Isometry sending the oriented geodesic g to the imaginary axis (0 -> INF)."""
    u, v = g.u, g.v
    if v == INF:
        return Isometry(1.0, -u, 0.0, 1.0)
    if u == INF:
        return Isometry(0.0, -1.0, 1.0, -v)
    if u > v:
        return Isometry.from_matrix(np.array([[1.0, -u], [1.0, -v]]) / math.sqrt(u - v))
    return Isometry.from_matrix(np.array([[-1.0, u], [1.0, -v]]) / math.sqrt(v - u))


def frame_with_origin(g: GeodesicLine, origin: HypPoint) -> Isometry:
    """Isometry sending g to the imaginary axis and the perpendicular foot
    of ``origin`` on g to i.

    Unlike axis_to_imaginary alone, the result is equivariant: conjugating
    (g, origin) by an isometry W gives frame . W^-1, with no residual
    translation freedom along the axis.
    """
    n = axis_to_imaginary(g)
    s = abs(n(origin.z))
    r = math.sqrt(s)
    return Isometry(1.0 / r, 0.0, 0.0, r) @ n


def translation_along(g: GeodesicLine, length: float) -> Isometry:
    """Hyperbolic translation along g; positive length moves toward g.v."""
    if length == 0.0:
        raise ValueError("translation length must be nonzero")
    e = math.exp(length / 2.0)
    core = Isometry(e, 0.0, 0.0, 1.0 / e)
    n = axis_to_imaginary(g)
    return n.inverse() @ core @ n


def dist(p: HypPoint, q: HypPoint) -> float:
    dx, dy = p.x - q.x, p.y - q.y
    return math.acosh(1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y))


def dist_to_geodesic(p: HypPoint, g: GeodesicLine) -> float:
    w = axis_to_imaginary(g)(p.z)
    return math.asinh(abs(w.real) / w.imag)


def foot_of_perpendicular(p: HypPoint, g: GeodesicLine) -> HypPoint:
    n = axis_to_imaginary(g)
    w = n(p.z)
    q = n.inverse()(complex(0.0, abs(w)))
    return HypPoint(q.real, q.imag)


def side_of(p: HypPoint, g: GeodesicLine) -> int:
    """+1 if p lies to the left of the oriented geodesic g, -1 to the right, 0 on it.

    "Left" means Re < 0 after g is mapped onto the upward imaginary axis.
    """
    w = axis_to_imaginary(g)(p.z)
    if abs(w.real) < 1e-12 * max(1.0, w.imag):
        return 0
    return -1 if w.real > 0 else 1


def axis(f: Isometry) -> GeodesicLine:
    """Oriented axis of a hyperbolic isometry (repelling -> attracting endpoint)."""
    c = classify(f)
    if c.kind != "hyperbolic":
        raise ClassMismatchError(f"axis needs a hyperbolic isometry, got {c.kind}")
    a, b = f.m[0]
    cc, d = f.m[1]
    if abs(cc) < _SIGN_EPS:
        other = b / (d - a)
        # derivative at INF is 1/a^2 (in the chart w = 1/z it is d^2/a^2 scaled)
        attract_inf = abs(a) > abs(d)
        return GeodesicLine(other, INF) if attract_inf else GeodesicLine(INF, other)
    disc = math.sqrt(f.trace() ** 2 - 4.0)
    z1 = (a - d + disc) / (2.0 * cc)
    z2 = (a - d - disc) / (2.0 * cc)
    # attracting fixed point has |f'| < 1, i.e. |c z + d| > 1
    if abs(cc * z1 + d) > 1.0:
        return GeodesicLine(z2, z1)
    return GeodesicLine(z1, z2)


def fixed_point(f: Isometry, _checked: bool = True) -> HypPoint:
    """Fixed point in H^2 of an elliptic isometry."""
    if _checked:
        c = classify(f)
        if c.kind != "elliptic":
            raise ClassMismatchError(f"fixed_point needs an elliptic isometry, got {c.kind}")
    a, b = f.m[0]
    cc, d = f.m[1]
    if abs(cc) < 1e-14:
        raise ClassMismatchError("elliptic isometry with c = 0 cannot fix a point of H^2")
    im = math.sqrt(max(4.0 - f.trace() ** 2, 0.0)) / (2.0 * cc)
    re = (a - d) / (2.0 * cc)
    if im < 0:
        im = -im
    return HypPoint(re, im)


def geodesic_through(p: HypPoint, q: HypPoint) -> GeodesicLine:
    """Oriented geodesic through two distinct interior points, running p -> q."""
    if abs(p.x - q.x) < 1e-13 * max(1.0, abs(p.x), abs(q.x)):
        return GeodesicLine(p.x, INF) if q.y > p.y else GeodesicLine(INF, p.x)
    m = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x))
    r = math.hypot(p.x - m, p.y)
    phi_p = math.atan2(p.y, p.x - m)
    phi_q = math.atan2(q.y, q.x - m)
    if phi_p > phi_q:   # moving toward smaller angle means toward m + r
        return GeodesicLine(m - r, m + r)
    return GeodesicLine(m + r, m - r)


def tangent_at(g: GeodesicLine, p: HypPoint) -> complex:
    """Unit tangent (euclidean direction) of g at a point p on g, along orientation."""
    n = axis_to_imaginary(g)
    w = n(p.z)
    back = n.inverse()
    d = back.deriv(w) * 1j
    return d / abs(d)


def angle_at(p: HypPoint, q: HypPoint, r: HypPoint) -> float:
    """Unsigned angle at p between geodesic arcs p->q and p->r, in (0, pi)."""
    t1 = tangent_at(geodesic_through(p, q), p)
    t2 = tangent_at(geodesic_through(p, r), p)
    ang = abs(math.atan2((t2 / t1).imag, (t2 / t1).real))
    return ang


def triangle_area(p: HypPoint, q: HypPoint, r: HypPoint) -> float:
    """Area of the geodesic triangle pqr via the angle defect."""
    return math.pi - angle_at(p, q, r) - angle_at(q, r, p) - angle_at(r, p, q)


def crossing_point(g: GeodesicLine, h: GeodesicLine) -> HypPoint:
    """Intersection point of two crossing geodesics (raises if disjoint)."""
    n = axis_to_imaginary(g)
    hu, hv = n(h.u), n(h.v)
    if hu == INF or hv == INF:
        raise ValueError("geodesics do not cross in H^2")
    if hu * hv >= 0:
        raise ValueError("geodesics do not cross in H^2")
    m = (hu + hv) / 2.0
    r = abs(hu - hv) / 2.0
    t = r * r - m * m
    if t <= 0:
        raise ValueError("geodesics do not cross in H^2")
    w = n.inverse()(complex(0.0, math.sqrt(t)))
    return HypPoint(w.real, w.imag)
