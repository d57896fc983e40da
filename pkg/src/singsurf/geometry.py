"""Metric patches: curvature, geodesics, angles and integrals.

A patch is a rectangle or the closed unit disc in the (u, v) parameter
plane carrying a Riemannian metric E du^2 + 2F du dv + G dv^2 whose
coefficients are closed-form expressions.  Everything downstream reduces
to a handful of local operations implemented here:

* Gaussian curvature from the metric jets (Brioschi formula),
* signed geodesic curvature of boundary arcs,
* geodesic shooting with an adaptive embedded Runge-Kutta pair,
* metric angles between tangent vectors,
* adaptive area and boundary integrals.

Sign conventions.  Boundary arcs run counterclockwise in the parameter
plane (patch interior on the left), and geodesic curvature is taken with
respect to the inward normal, so the boundary circle of the flat unit disc
has kappa = +1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import quadrature
from .errors import (
    ConvergenceFailure,
    LeftDomain,
    NoConnectingGeodesic,
    ValidationError,
)
from .expr import Expr, parse

__all__ = [
    "RectDomain", "DiscDomain", "BoundaryArc", "MetricPatch", "GeodesicPath",
    "gaussian_curvature", "geodesic_curvature", "shoot_geodesic",
    "connect_geodesic", "angle_between", "oriented_angle",
    "integrate_area", "integrate_boundary",
    "rect_boundary", "circle_boundary",
]

_POS_TOL = 1e-12     # strict positivity threshold for the metric on samples
_ARC_TOL = 1e-9      # boundary arcs must stay this close to the domain edge


def _as_expr(e) -> Expr:
    return e if isinstance(e, Expr) else parse(e)


# -- parameter domains ---------------------------------------------------------


@dataclass(frozen=True)
class RectDomain:
    """Axis-aligned parameter rectangle [u0, u1] x [v0, v1]."""

    u0: float
    u1: float
    v0: float
    v1: float

    kind = "rect"

    def __post_init__(self):
        if not (self.u0 < self.u1 and self.v0 < self.v1):
            raise ValidationError("rectangle bounds must be increasing")

    def contains(self, u, v, tol=1e-9):
        return (self.u0 - tol <= u <= self.u1 + tol
                and self.v0 - tol <= v <= self.v1 + tol)

    def sample_points(self, n=12):
        """Cell centers of an n x n grid; strictly interior."""
        du = (self.u1 - self.u0) / n
        dv = (self.v1 - self.v0) / n
        return [(self.u0 + (i + 0.5) * du, self.v0 + (j + 0.5) * dv)
                for i in range(n) for j in range(n)]

    def exit_events(self, slack=0.0):
        u0, u1, v0, v1 = self.u0, self.u1, self.v0, self.v1
        fns = [
            lambda t, y: y[0] - u0 + slack,
            lambda t, y: u1 - y[0] + slack,
            lambda t, y: y[1] - v0 + slack,
            lambda t, y: v1 - y[1] + slack,
        ]
        for fn in fns:
            fn.terminal = True
            fn.direction = -1.0
        return fns

    def boundary_coordinate(self, u, v):
        """Perimeter coordinate of a point on the edge, counterclockwise
        from (u0, v0)."""
        du, dv = self.u1 - self.u0, self.v1 - self.v0
        cands = [
            (abs(v - self.v0), u - self.u0),
            (abs(u - self.u1), du + (v - self.v0)),
            (abs(v - self.v1), du + dv + (self.u1 - u)),
            (abs(u - self.u0), 2 * du + dv + (self.v1 - v)),
        ]
        dist, s = min(cands)
        return s

    @property
    def perimeter(self):
        return 2 * (self.u1 - self.u0) + 2 * (self.v1 - self.v0)

    def boundary_distance(self, u, v):
        return min(u - self.u0, self.u1 - u, v - self.v0, self.v1 - v)


@dataclass(frozen=True)
class DiscDomain:
    """Closed unit disc u^2 + v^2 <= 1."""

    kind = "disc"

    def contains(self, u, v, tol=1e-9):
        return u * u + v * v <= 1.0 + 2 * tol

    def sample_points(self, n=12):
        pts = [(0.0, 0.0)]
        for i in range(n):
            r = (i + 0.5) / n
            for j in range(2 * n):
                th = 2 * math.pi * (j + 0.5) / (2 * n)
                pts.append((r * math.cos(th), r * math.sin(th)))
        return pts

    def exit_events(self, slack=0.0):
        def fn(t, y):
            return 1.0 - y[0] * y[0] - y[1] * y[1] + slack
        fn.terminal = True
        fn.direction = -1.0
        return [fn]

    def boundary_coordinate(self, u, v):
        return math.atan2(v, u) % (2 * math.pi)

    @property
    def perimeter(self):
        return 2 * math.pi

    def boundary_distance(self, u, v):
        return 1.0 - math.hypot(u, v)


# -- boundary arcs -------------------------------------------------------------


@dataclass(frozen=True)
class BoundaryArc:
    """Piece of the patch boundary, parametrized over t in [0, 1].

    The coordinate maps are expressions in the single variable u (the arc
    parameter).  Corner markers name the endpoints shared with neighboring
    arcs; a closed arc (full boundary loop) has no corners.
    """

    arc_id: str
    x: Expr
    y: Expr
    corner_start: Optional[str] = None
    corner_end: Optional[str] = None

    def point(self, t: float):
        return (self.x.eval(t, 0.0), self.y.eval(t, 0.0))

    def velocity(self, t: float):
        return (self.x.jet(t, 0.0).fu, self.y.jet(t, 0.0).fu)

    def jets(self, t: float):
        return self.x.jet(t, 0.0), self.y.jet(t, 0.0)


def rect_boundary(u0, u1, v0, v1, corner_prefix="c"):
    """Standard counterclockwise 4-arc boundary of a parameter rectangle.

    Arc ids are bottom/right/top/left; corners are <prefix>0..<prefix>3
    counterclockwise from (u0, v0).
    """
    c = [f"{corner_prefix}{k}" for k in range(4)]

    def lin(a, b):
        # affine arc coordinate a + (b - a) t, rendered exactly
        if a == b:
            return repr(float(a))
        return f"({a!r}) + ({b - a!r})*u"

    return (
        BoundaryArc("bottom", parse(lin(u0, u1)), parse(repr(float(v0))), c[0], c[1]),
        BoundaryArc("right", parse(repr(float(u1))), parse(lin(v0, v1)), c[1], c[2]),
        BoundaryArc("top", parse(lin(u1, u0)), parse(repr(float(v1))), c[2], c[3]),
        BoundaryArc("left", parse(repr(float(u0))), parse(lin(v1, v0)), c[3], c[0]),
    )


def circle_boundary(arc_id="rim"):
    """Full unit-circle boundary of the disc domain as one closed arc."""
    return (BoundaryArc(arc_id, parse("cos(2*pi*u)"), parse("sin(2*pi*u)")),)


# -- the patch -----------------------------------------------------------------


class MetricPatch:
    """A parameter domain with a smooth Riemannian metric and an optional
    counterclockwise boundary decomposition into arcs."""

    def __init__(self, patch_id, domain, E, F, G, boundary=(), chi=1,
                 validate=True):
        self.patch_id = str(patch_id)
        self.domain = domain
        self.E = _as_expr(E)
        self.F = _as_expr(F)
        self.G = _as_expr(G)
        self.boundary = tuple(boundary)
        self.chi = int(chi)
        self._arc_index = {arc.arc_id: i for i, arc in enumerate(self.boundary)}
        if len(self._arc_index) != len(self.boundary):
            raise ValidationError(
                [(f"patch '{self.patch_id}'", "duplicate boundary arc ids")])
        if validate:
            problems = self.check()
            if problems:
                raise ValidationError(problems)

    # -- structural checks ----------------------------------------------------

    def check(self):
        """Return a list of (path, message) invariant violations."""
        out = []
        base = f"patch '{self.patch_id}'"
        for name, e in (("E", self.E), ("F", self.F), ("G", self.G)):
            extra = e.variables() - {"u", "v"}
            if extra:
                out.append((f"{base}.metric.{name}",
                            f"unexpected variables {sorted(extra)}"))
        if out:
            return out
        for (u, v) in self.domain.sample_points():
            try:
                E = self.E.eval(u, v)
                F = self.F.eval(u, v)
                G = self.G.eval(u, v)
            except Exception as exc:
                out.append((f"{base}.metric",
                            f"evaluation failed at ({u:.4g}, {v:.4g}): {exc}"))
                return out
            if not (E > _POS_TOL and G > _POS_TOL and E * G - F * F > _POS_TOL):
                out.append((f"{base}.metric",
                            f"not positive definite at ({u:.4g}, {v:.4g}): "
                            f"E={E:.4g} F={F:.4g} G={G:.4g}"))
                return out
        out.extend(self._check_boundary())
        return out

    def _check_boundary(self):
        out = []
        base = f"patch '{self.patch_id}'"
        n = len(self.boundary)
        if n == 0:
            return out
        ts = [k / 24 for k in range(25)]
        for i, arc in enumerate(self.boundary):
            path = f"{base}.boundary['{arc.arc_id}']"
            for coord_name, coord in (("x", arc.x), ("y", arc.y)):
                extra = coord.variables() - {"u"}
                if extra:
                    out.append((path, f"curve {coord_name} uses variables "
                                      f"{sorted(extra)}; only the parameter u "
                                      f"is allowed"))
            if out:
                return out
            for t in ts:
                try:
                    u, v = arc.point(t)
                except Exception as exc:
                    out.append((path, f"curve evaluation failed at t={t}: {exc}"))
                    return out
                if abs(self.domain.boundary_distance(u, v)) > _ARC_TOL:
                    out.append((path, f"point at t={t:.4g} is off the domain "
                                      f"boundary by {self.domain.boundary_distance(u, v):.3g}"))
                    return out
                w = arc.velocity(t)
                sp = self.norm(u, v, w)
                if sp < 1e-9:
                    out.append((path, f"metric speed {sp:.3g} below 1e-9 at t={t:.4g}"))
                    return out
        # closure and single counterclockwise coverage
        perim = self.domain.perimeter
        advance = 0.0
        for i, arc in enumerate(self.boundary):
            nxt = self.boundary[(i + 1) % n]
            pe = arc.point(1.0)
            ps = nxt.point(0.0)
            if math.hypot(pe[0] - ps[0], pe[1] - ps[1]) > 1e-7:
                out.append((f"{base}.boundary", f"arc '{arc.arc_id}' does not "
                                                f"end where '{nxt.arc_id}' starts"))
                return out
            # oriented progress along the boundary, must be ccw
            ss = [self.domain.boundary_coordinate(*arc.point(t)) for t in ts]
            prog = 0.0
            for a, b in zip(ss, ss[1:]):
                step = (b - a) % perim
                if step > perim / 2:
                    out.append((f"{base}.boundary", f"arc '{arc.arc_id}' runs "
                                                    f"clockwise or jumps"))
                    return out
                prog += step
            advance += prog
        if abs(advance - perim) > 1e-5 * max(1.0, perim):
            out.append((f"{base}.boundary",
                        f"arcs cover the domain boundary {advance / perim:.4g} "
                        f"times; expected exactly once"))
        # corner marker consistency
        names = {}
        for i in range(n):
            prev = self.boundary[i - 1]
            here = self.boundary[i]
            a, b = prev.corner_end, here.corner_start
            if a is not None and b is not None and a != b:
                out.append((f"{base}.boundary",
                            f"corner name mismatch between '{prev.arc_id}' end "
                            f"('{a}') and '{here.arc_id}' start ('{b}')"))
            name = a if a is not None else b
            if name is not None:
                if name in names:
                    out.append((f"{base}.boundary",
                                f"corner name '{name}' used at two junctions"))
                names[name] = i
        return out

    # -- corners ---------------------------------------------------------------

    def corner_names(self):
        names = {}
        n = len(self.boundary)
        for i in range(n):
            name = self.boundary[i].corner_start
            if name is None:
                name = self.boundary[i - 1].corner_end
            if name is not None:
                names[name] = i
        return names

    def corner_index(self, name: str) -> int:
        idx = self.corner_names().get(name)
        if idx is None:
            raise ValidationError(
                [(f"patch '{self.patch_id}'", f"no corner named '{name}'")])
        return idx

    def corner_point(self, idx: int):
        return self.boundary[idx].point(0.0)

    def corner_angle(self, idx: int) -> float:
        """Interior angle at the junction where boundary arc idx starts."""
        arc_in = self.boundary[idx - 1]
        arc_out = self.boundary[idx]
        u, v = arc_out.point(0.0)
        w_out = arc_out.velocity(0.0)
        win = arc_in.velocity(1.0)
        w_in = (-win[0], -win[1])
        return oriented_angle(self, (u, v), w_out, w_in)

    # -- pointwise metric data ---------------------------------------------------

    def first_fundamental(self, u, v):
        return self.E.eval(u, v), self.F.eval(u, v), self.G.eval(u, v)

    def sqrt_det(self, u, v):
        E, F, G = self.first_fundamental(u, v)
        W = E * G - F * F
        return math.sqrt(W)

    def inner(self, u, v, w1, w2):
        E, F, G = self.first_fundamental(u, v)
        return (E * w1[0] * w2[0] + F * (w1[0] * w2[1] + w1[1] * w2[0])
                + G * w1[1] * w2[1])

    def norm(self, u, v, w):
        return math.sqrt(max(0.0, self.inner(u, v, w, w)))

    def unit(self, u, v, w):
        n = self.norm(u, v, w)
        if n < 1e-300:
            raise ValueError("cannot normalize a zero tangent vector")
        return (w[0] / n, w[1] / n)

    def rotate90(self, u, v, w):
        """Rotate w by +90 degrees in the metric (counterclockwise, so the
        rotation of a ccw boundary tangent points into the patch)."""
        E, F, G = self.first_fundamental(u, v)
        W = math.sqrt(E * G - F * F)
        a, b = w
        return (-(F * a + G * b) / W, (E * a + F * b) / W)

    def christoffels(self, u, v):
        jE = self.E.jet(u, v)
        jF = self.F.jet(u, v)
        jG = self.G.jet(u, v)
        E, F, G = jE.f, jF.f, jG.f
        Eu, Ev = jE.fu, jE.fv
        Fu, Fv = jF.fu, jF.fv
        Gu, Gv = jG.fu, jG.fv
        iW2 = 0.5 / (E * G - F * F)
        g111 = (G * Eu - 2 * F * Fu + F * Ev) * iW2
        g211 = (2 * E * Fu - E * Ev - F * Eu) * iW2
        g112 = (G * Ev - F * Gu) * iW2
        g212 = (E * Gu - F * Ev) * iW2
        g122 = (2 * G * Fv - G * Gu - F * Gv) * iW2
        g222 = (E * Gv - 2 * F * Fv + F * Gu) * iW2
        return (g111, g112, g122), (g211, g212, g222)

    def is_euclidean(self):
        """True when the metric is exactly du^2 + dv^2 (constant identity)."""
        for (u, v) in [(0.1, 0.2), (-0.3, 0.4), (0.55, -0.15)]:
            if not self.domain.contains(u, v):
                continue
            jE, jF, jG = self.E.jet(u, v), self.F.jet(u, v), self.G.jet(u, v)
            if not (jE.f == 1.0 and jF.f == 0.0 and jG.f == 1.0
                    and jE.is_constant() and jF.is_constant() and jG.is_constant()):
                return False
        return True

    def arc(self, arc_id: str) -> BoundaryArc:
        try:
            return self.boundary[self._arc_index[arc_id]]
        except KeyError:
            raise ValidationError(
                [(f"patch '{self.patch_id}'", f"no boundary arc '{arc_id}'")]) from None

    def __repr__(self):
        return f"MetricPatch({self.patch_id!r}, {self.domain.kind}, chi={self.chi})"


# -- curvature ----------------------------------------------------------------


def _det3(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def gaussian_curvature(patch: MetricPatch, u: float, v: float) -> float:
    """Gaussian curvature from the metric jets (Brioschi formula)."""
    jE = patch.E.jet(u, v)
    jF = patch.F.jet(u, v)
    jG = patch.G.jet(u, v)
    E, F, G = jE.f, jF.f, jG.f
    W = E * G - F * F
    m1 = (
        (-0.5 * jE.fvv + jF.fuv - 0.5 * jG.fuu, 0.5 * jE.fu, jF.fu - 0.5 * jE.fv),
        (jF.fv - 0.5 * jG.fu, E, F),
        (0.5 * jG.fv, F, G),
    )
    m2 = (
        (0.0, 0.5 * jE.fv, 0.5 * jG.fu),
        (0.5 * jE.fv, E, F),
        (0.5 * jG.fu, F, G),
    )
    return (_det3(m1) - _det3(m2)) / (W * W)


def geodesic_curvature(patch: MetricPatch, arc: BoundaryArc, t: float) -> float:
    """Signed geodesic curvature of a boundary arc at parameter t.

    With the arc running counterclockwise the sign is taken with respect to
    the inward normal: the boundary circle of the flat unit disc gives +1.
    """
    jx, jy = arc.jets(t)
    du, dv = jx.fu, jy.fu
    ddu, ddv = jx.fuu, jy.fuu
    u, v = jx.f, jy.f
    (g111, g112, g122), (g211, g212, g222) = patch.christoffels(u, v)
    a1 = ddu + g111 * du * du + 2 * g112 * du * dv + g122 * dv * dv
    a2 = ddv + g211 * du * du + 2 * g212 * du * dv + g222 * dv * dv
    E, F, G = patch.first_fundamental(u, v)
    W = math.sqrt(E * G - F * F)
    speed2 = E * du * du + 2 * F * du * dv + G * dv * dv
    return W * (du * a2 - dv * a1) / speed2 ** 1.5


def arc_speed(patch: MetricPatch, arc: BoundaryArc, t: float) -> float:
    u, v = arc.point(t)
    return patch.norm(u, v, arc.velocity(t))


# -- angles --------------------------------------------------------------------


def angle_between(patch: MetricPatch, at, w1, w2) -> float:
    """Unsigned metric angle in [0, pi] between tangent vectors at a point."""
    u, v = at
    c = patch.inner(u, v, w1, w2) / (patch.norm(u, v, w1) * patch.norm(u, v, w2))
    return math.acos(max(-1.0, min(1.0, c)))


def oriented_angle(patch: MetricPatch, at, w_from, w_to) -> float:
    """Counterclockwise metric angle in [0, 2*pi) from w_from to w_to.

    Interior angles of corners are oriented angles, so reflex corners
    (> pi) are measured correctly.
    """
    u, v = at
    E, F, G = patch.first_fundamental(u, v)
    W = math.sqrt(E * G - F * F)
    dot = patch.inner(u, v, w_from, w_to)
    cross = W * (w_from[0] * w_to[1] - w_from[1] * w_to[0])
    ang = math.atan2(cross, dot)
    return ang % (2 * math.pi)


# -- geodesics -----------------------------------------------------------------


@dataclass
class GeodesicPath:
    """Unit-speed geodesic segment with dense evaluation.

    ``point(s)``/``velocity(s)`` evaluate at arclength s in [0, length].
    """

    patch: MetricPatch
    length: float
    _sol: object
    requested_length: float

    def state(self, s: float):
        return self._sol(s)

    def point(self, s: float):
        y = self._sol(s)
        return (float(y[0]), float(y[1]))

    def velocity(self, s: float):
        y = self._sol(s)
        return (float(y[2]), float(y[3]))

    @property
    def start_point(self):
        return self.point(0.0)

    @property
    def end_point(self):
        return self.point(self.length)

    @property
    def end_velocity(self):
        return self.velocity(self.length)

    def samples(self, n: int = 33):
        ss = np.linspace(0.0, self.length, n)
        return [(float(s),) + self.point(s) + self.velocity(s) for s in ss]

    def speed_deviation(self, n: int = 33) -> float:
        worst = 0.0
        for s, u, v, du, dv in self.samples(n):
            worst = max(worst, abs(self.patch.norm(u, v, (du, dv)) - 1.0))
        return worst


def _geodesic_rhs(patch: MetricPatch):
    def rhs(t, y):
        u, v, p, q = y
        (g111, g112, g122), (g211, g212, g222) = patch.christoffels(u, v)
        return (p, q,
                -(g111 * p * p + 2 * g112 * p * q + g122 * q * q),
                -(g211 * p * p + 2 * g212 * p * q + g222 * q * q))
    return rhs


def shoot_geodesic(patch: MetricPatch, start, direction, length: float,
                   rtol: float = 1e-9, clip: bool = False,
                   exit_slack: float = 0.0) -> GeodesicPath:
    """Integrate the unit-speed geodesic from ``start`` along ``direction``.

    The direction is normalized in the metric.  If the path exits the
    parameter domain before reaching ``length``, LeftDomain is raised unless
    ``clip`` is set, in which case the returned path is truncated at the
    exit.  ``exit_slack`` loosens the exit test by a small margin, which is
    needed when a geodesic runs exactly along the domain boundary.
    """
    if length <= 0.0:
        raise ValueError("geodesic length must be positive")
    u0, v0 = start
    du, dv = patch.unit(u0, v0, direction)
    events = patch.domain.exit_events(slack=exit_slack)
    sol = solve_ivp(_geodesic_rhs(patch), (0.0, length), (u0, v0, du, dv),
                    method="RK45", rtol=rtol, atol=1e-12, dense_output=True,
                    events=events)
    if sol.status < 0:  # pragma: no cover - defensive
        raise ConvergenceFailure(f"geodesic integration failed: {sol.message}")
    hit = [te[0] for te in sol.t_events if len(te)]
    if hit:
        t_exit = min(hit)
        if t_exit < length - max(1e-9, 1e-9 * length):
            if not clip:
                y = sol.sol(t_exit)
                raise LeftDomain(t_exit, (y[0], y[1]))
            return GeodesicPath(patch, t_exit, sol.sol, length)
        return GeodesicPath(patch, min(t_exit, length), sol.sol, length)
    return GeodesicPath(patch, length, sol.sol, length)


def _frame(patch: MetricPatch, u, v):
    """Positively oriented orthonormal frame (e1, e2) at a point."""
    E, F, G = patch.first_fundamental(u, v)
    e1 = (1.0 / math.sqrt(E), 0.0)
    w = E * G - F * F
    s = math.sqrt(E / w)
    e2 = (-F / E * s, s)
    return e1, e2


def connect_geodesic(patch: MetricPatch, p, q, miss_tol: float = 1e-9,
                     rtol: float = 1e-11) -> GeodesicPath:
    """Geodesic from p to q by shooting, bisecting on the initial angle.

    Intended for short, locally convex configurations where the endpoint
    miss is monotone in the angle.  The endpoint lands within ``miss_tol``
    of q in the metric.
    """
    up, vp = p
    e1, e2 = _frame(patch, up, vp)
    chord = (q[0] - p[0], q[1] - p[1])
    # chord coordinates in the frame: solve [e1 e2] c = chord
    det = e1[0] * e2[1] - e1[1] * e2[0]
    c1 = (chord[0] * e2[1] - chord[1] * e2[0]) / det
    c2 = (e1[0] * chord[1] - e1[1] * chord[0]) / det
    alpha0 = math.atan2(c2, c1)
    dist0 = math.hypot(c1, c2)
    if dist0 == 0.0:
        raise NoConnectingGeodesic("start and target coincide")
    max_len = 2.5 * dist0

    def trial(alpha):
        """Return (signed miss, closest arclength, metric miss distance)."""
        d = (math.cos(alpha) * e1[0] + math.sin(alpha) * e2[0],
             math.cos(alpha) * e1[1] + math.sin(alpha) * e2[1])
        path = shoot_geodesic(patch, p, d, max_len, rtol=rtol, clip=True)
        ss = np.linspace(0.0, path.length, 65)
        d2 = [ (path.point(s)[0] - q[0]) ** 2 + (path.point(s)[1] - q[1]) ** 2
               for s in ss ]
        k = int(np.argmin(d2))

        def radial(s):
            y = path.state(s)
            return (y[0] - q[0]) * y[2] + (y[1] - q[1]) * y[3]

        lo = ss[max(0, k - 1)]
        hi = ss[min(len(ss) - 1, k + 1)]
        if lo < hi and radial(lo) * radial(hi) < 0:
            s_star = brentq(radial, lo, hi, xtol=1e-13)
        else:
            s_star = ss[k]
        y = path.state(s_star)
        rx, ry = q[0] - y[0], q[1] - y[1]
        cross = y[2] * ry - y[3] * rx
        miss = patch.norm(q[0], q[1], (rx, ry))
        return cross, float(s_star), miss, path

    cross0, s0, miss0, path0 = trial(alpha0)
    if miss0 <= miss_tol:
        return GeodesicPath(patch, s0, path0._sol, s0)
    # bracket the sign change of the lateral miss
    step = 0.05
    a_lo, a_hi = None, None
    f_lo = None
    for _ in range(24):
        a1, a2 = alpha0 - step, alpha0 + step
        c1_, s1, m1, p1 = trial(a1)
        c2_, s2, m2, p2 = trial(a2)
        if c1_ == 0.0 and m1 <= miss_tol:
            return GeodesicPath(patch, s1, p1._sol, s1)
        if c2_ == 0.0 and m2 <= miss_tol:
            return GeodesicPath(patch, s2, p2._sol, s2)
        if c1_ * c2_ < 0:
            a_lo, a_hi, f_lo = a1, a2, c1_
            break
        step *= 1.8
        if step > math.pi:
            break
    if a_lo is None:
        raise NoConnectingGeodesic(
            f"no bracketing angle found from {p} to {q}")
    best = None
    for _ in range(200):
        mid = 0.5 * (a_lo + a_hi)
        c, s_star, miss, path = trial(mid)
        best = (s_star, path, miss)
        if miss <= miss_tol:
            break
        if c == 0.0:
            break
        if (c > 0) == (f_lo > 0):
            a_lo = mid
        else:
            a_hi = mid
        if a_hi - a_lo < 1e-15:
            break
    s_star, path, miss = best
    if miss > 10 * miss_tol:
        raise NoConnectingGeodesic(
            f"shooting stalled at miss {miss:.3g} from {p} to {q}")
    return GeodesicPath(patch, s_star, path._sol, s_star)


# -- integrals -----------------------------------------------------------------


def integrate_area(patch: MetricPatch, f: Optional[Callable] = None,
                   box=None, tol: float = 1e-8) -> float:
    """Integral of f against the metric area element.

    ``box`` restricts the integral: (u0, u1, v0, v1) on rectangle domains;
    (r0, r1, theta0, theta1) polar sectors on the disc domain.  None means
    the whole domain.  f defaults to 1 (plain area).
    """
    dom = patch.domain
    if dom.kind == "rect":
        b = box if box is not None else (dom.u0, dom.u1, dom.v0, dom.v1)
        u0, u1, v0, v1 = b
        if not (dom.contains(u0, v0) and dom.contains(u1, v1)):
            raise ValidationError("integration box extends outside the domain")

        def g(u, v):
            w = patch.sqrt_det(u, v)
            return w if f is None else f(u, v) * w

        return quadrature.integrate_2d(g, u0, u1, v0, v1, tol=tol)
    # disc domain in polar coordinates
    b = box if box is not None else (0.0, 1.0, 0.0, 2 * math.pi)
    r0, r1, th0, th1 = b
    if not (0.0 <= r0 < r1 <= 1.0 + 1e-12):
        raise ValidationError("polar box radii must satisfy 0 <= r0 < r1 <= 1")

    def g(th, r):
        u = r * math.cos(th)
        v = r * math.sin(th)
        w = patch.sqrt_det(u, v) * r
        return w if f is None else f(u, v) * w

    return quadrature.integrate_2d(g, th0, th1, min(r0, r1), max(r0, r1), tol=tol)


def integrate_boundary(patch: MetricPatch, arc: BoundaryArc,
                       f: Optional[Callable] = None, t0: float = 0.0,
                       t1: float = 1.0, tol: float = 1e-10) -> float:
    """Integral of f(t) against the arclength element along a boundary arc."""

    def g(t):
        sp = arc_speed(patch, arc, t)
        return sp if f is None else f(t) * sp

    return quadrature.integrate_1d(g, t0, t1, tol=tol)
