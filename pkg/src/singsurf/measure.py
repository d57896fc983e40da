"""Curvature as a measure on a glued surface, and the checks built on it.

The total curvature of a glued surface splits into three parts: a smooth
part carried by the patch interiors (Gauss curvature against the area
element), a singular part carried by the seams (the sum of the two
one-sided geodesic curvatures against seam arclength), and point masses
at cone points (2*pi minus the total angle).  ``CurvatureMeasure``
evaluates each part over regions; the checks below compare the total
against the Euler characteristic, probe the seam part with an angle
construction built from perpendicular geodesics, and recover the seam
density from the growth of small boundary-ball areas.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import quadrature
from .errors import (ConvergenceFailure, FitIllConditioned, ValidationError)
from .geometry import (MetricPatch, _geodesic_rhs, arc_speed,
                       connect_geodesic, gaussian_curvature,
                       geodesic_curvature, integrate_area,
                       integrate_boundary, oriented_angle, shoot_geodesic)
from .gluing import GluedSurface

__all__ = [
    "Region",
    "CurvatureMeasure",
    "compute_curvature_measure",
    "measure_of",
    "verify_gauss_bonnet",
    "quadrilateral_angle_check",
    "length_invariance_check",
    "boundary_ball_areas",
    "disc_area_asymptotics",
    "polyhedron_curvature",
]

_AC_TOL = 1e-8      # default tolerance for patch-interior integrals
_SEAM_TOL = 1e-10   # default tolerance for seam integrals
_FLAT_TOL = 1e-9    # max |K| on samples for a patch to count as flat


def _thread_count() -> int:
    raw = os.environ.get("GB_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return max(1, n)


@dataclass(frozen=True)
class Region:
    """A measurable selection of surface pieces.

    ``patch_boxes`` holds (patch id, box) pairs, where the box is
    (u0, u1, v0, v1) on rectangle domains and (r0, r1, theta0, theta1) in
    polar coordinates on the disc domain.  ``seam_intervals`` holds
    (seam id, t0, t1) in the side-1 parameter.  ``cone_ids`` lists cone
    points by id.  The empty region is allowed and has measure zero.
    """

    patch_boxes: tuple = ()
    seam_intervals: tuple = ()
    cone_ids: tuple = ()

    def __post_init__(self):
        object.__setattr__(
            self, "patch_boxes",
            tuple((pid, tuple(float(x) for x in box))
                  for pid, box in self.patch_boxes))
        object.__setattr__(
            self, "seam_intervals",
            tuple((sid, float(a), float(b))
                  for sid, a, b in self.seam_intervals))
        object.__setattr__(self, "cone_ids", tuple(self.cone_ids))


class CurvatureMeasure:
    """Evaluator for the three-part curvature measure of a glued surface."""

    def __init__(self, surface: GluedSurface):
        self.surface = surface

    # -- densities -------------------------------------------------------

    def ac_density(self, patch_id: str):
        """Gauss curvature K(u, v) on the named patch."""
        patch = self.surface.patch(patch_id)
        return lambda u, v: gaussian_curvature(patch, u, v)

    def seam_density(self, seam_id: str):
        """Linear density of the seam part in the side-1 parameter.

        rho(t) = kappa1(t) speed1(t) + kappa2(phi(t)) speed2(phi(t)) |phi'(t)|,
        so integrating rho dt over [a, b] gives the seam measure of the
        corresponding arc segment.  Both curvatures are taken with the
        inward normal of their own side, which makes the density
        orientation-free.
        """
        seam = self.surface.seam(seam_id)
        p1 = self.surface.patch(seam.side1[0])
        a1 = p1.arc(seam.side1[1])
        p2 = self.surface.patch(seam.side2[0])
        a2 = p2.arc(seam.side2[1])

        def rho(t):
            s = seam.phi_value(t)
            own = geodesic_curvature(p1, a1, t) * arc_speed(p1, a1, t)
            other = geodesic_curvature(p2, a2, s) * arc_speed(p2, a2, s)
            return own + other * abs(seam.dphi(t))

        return rho

    def atom_masses(self) -> dict:
        return {c.cone_id: c.mass for c in self.surface.cone_points}

    # -- global parts ------------------------------------------------------

    def ac_part(self, tol: float = _AC_TOL) -> float:
        """Total curvature carried by the patch interiors."""
        patches = sorted(self.surface.patches, key=lambda p: p.patch_id)
        if not patches:
            return 0.0
        per_patch = tol / len(patches)

        def job(patch):
            k = lambda u, v: gaussian_curvature(patch, u, v)
            return integrate_area(patch, f=k, tol=per_patch)

        workers = min(_thread_count(), len(patches))
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                vals = list(pool.map(job, patches))
        else:
            vals = [job(p) for p in patches]
        return math.fsum(vals)

    def seam_part(self, tol: float = _SEAM_TOL) -> float:
        seams = sorted(self.surface.seams, key=lambda s: s.seam_id)
        vals = [quadrature.integrate_1d(self.seam_density(s.seam_id),
                                        0.0, 1.0, tol=tol)
                for s in seams]
        return math.fsum(vals)

    def atom_part(self) -> float:
        return math.fsum(c.mass for c in self.surface.cone_points)

    def total(self, tol: float = _AC_TOL) -> float:
        return self.ac_part(tol) + self.seam_part() + self.atom_part()

    # -- regions -----------------------------------------------------------

    def _check_region(self, region: Region):
        problems = []
        for i, (pid, box) in enumerate(region.patch_boxes):
            path = f"patch_boxes[{i}]"
            if pid not in self.surface.patch_map:
                problems.append((path, f"unknown patch '{pid}'"))
                continue
            if len(box) != 4:
                problems.append((path, "box must have four numbers"))
                continue
            dom = self.surface.patch_map[pid].domain
            if dom.kind == "rect":
                u0, u1, v0, v1 = box
                if not (u0 < u1 and v0 < v1):
                    problems.append((path, "box bounds must increase"))
                elif not (dom.contains(u0, v0) and dom.contains(u1, v1)):
                    problems.append((path, "box extends outside the domain"))
            else:
                r0, r1, th0, th1 = box
                if not (0.0 <= r0 < r1 <= 1.0 + 1e-12):
                    problems.append(
                        (path, "polar radii must satisfy 0 <= r0 < r1 <= 1"))
                elif not (th0 < th1 <= th0 + 2 * math.pi + 1e-12):
                    problems.append(
                        (path, "polar angles must increase by at most 2*pi"))
        for i, (sid, a, b) in enumerate(region.seam_intervals):
            path = f"seam_intervals[{i}]"
            if sid not in self.surface.seam_map:
                problems.append((path, f"unknown seam '{sid}'"))
            elif not (0.0 <= a < b <= 1.0):
                problems.append(
                    (path, "interval must satisfy 0 <= t0 < t1 <= 1"))
        seen = set()
        for i, cid in enumerate(region.cone_ids):
            path = f"cone_ids[{i}]"
            if cid not in self.surface.cone_map:
                problems.append((path, f"unknown cone point '{cid}'"))
            elif cid in seen:
                problems.append((path, f"cone point '{cid}' listed twice"))
            seen.add(cid)
        return problems

    def breakdown(self, region: Region = None, tol: float = _AC_TOL) -> dict:
        """Three-part split of the measure of a region (whole surface when
        region is None)."""
        if region is None:
            ac = self.ac_part(tol)
            seam = self.seam_part()
            atom = self.atom_part()
        else:
            problems = self._check_region(region)
            if problems:
                raise ValidationError(problems)
            ac_vals = []
            for pid, box in region.patch_boxes:
                patch = self.surface.patch(pid)
                k = self.ac_density(pid)
                ac_vals.append(integrate_area(patch, f=k, box=box, tol=tol))
            ac = math.fsum(ac_vals)
            seam = math.fsum(
                quadrature.integrate_1d(self.seam_density(sid), a, b,
                                        tol=_SEAM_TOL)
                for sid, a, b in region.seam_intervals)
            atom = math.fsum(self.surface.cone_map[cid].mass
                             for cid in region.cone_ids)
        total = ac + seam + atom
        return {
            "absolutely_continuous": ac,
            "seam": seam,
            "atom": atom,
            "total": total,
        }

    def measure_of(self, region: Region, tol: float = _AC_TOL) -> float:
        return self.breakdown(region, tol)["total"]


def compute_curvature_measure(surface: GluedSurface) -> CurvatureMeasure:
    return CurvatureMeasure(surface)


def measure_of(measure: CurvatureMeasure, region: Region,
               tol: float = _AC_TOL) -> float:
    return measure.measure_of(region, tol)


# -- total-curvature check ------------------------------------------------


def verify_gauss_bonnet(surface: GluedSurface, tol: float = 1e-5,
                        quad_tol: float = None) -> dict:
    """Compare the total curvature measure against 2*pi*chi.

    On surfaces with free boundary the target carries the classical
    correction: the geodesic curvature of the free arcs plus the corner
    turning (pi minus the junction angle) is subtracted from 2*pi*chi.
    """
    if quad_tol is None:
        quad_tol = min(tol * 1e-2, 1e-7)
    mu = CurvatureMeasure(surface)
    ac = mu.ac_part(tol=quad_tol)
    seam = mu.seam_part(tol=min(quad_tol, 1e-9))
    atom = mu.atom_part()
    total = ac + seam + atom

    def arc_total_curvature(patch, arc):
        f = lambda t: geodesic_curvature(patch, arc, t)
        return integrate_boundary(patch, arc, f=f, tol=min(quad_tol, 1e-9))

    free_kappa = math.fsum(
        arc_total_curvature(surface.patch(pid), surface.patch(pid).arc(aid))
        for pid, aid in surface.free_boundary)
    turning = surface.boundary_turning()
    chi = surface.euler_characteristic()
    target = 2 * math.pi * chi - (free_kappa + turning)
    defect = abs(total - target)
    return {
        "euler_characteristic": chi,
        "absolutely_continuous_mass": ac,
        "seam_mass": seam,
        "atom_mass": atom,
        "total_mass": total,
        "free_boundary_curvature": free_kappa,
        "free_boundary_turning": turning,
        "target": target,
        "defect": defect,
        "tolerance": tol,
        "passed": bool(defect <= tol),
    }


# -- seam quadrilateral check ----------------------------------------------


def _normalize_lengths(lengths):
    if isinstance(lengths, (int, float)):
        out = (float(lengths),) * 4
    else:
        seq = tuple(float(h) for h in lengths)
        if len(seq) == 2:
            out = (seq[0], seq[0], seq[1], seq[1])
        elif len(seq) == 4:
            out = seq
        else:
            raise ValidationError(
                "lengths must be a number, a pair (one per side), or four "
                "values (x then y on side 1, x then y on side 2)")
    if any(h <= 0 for h in out):
        raise ValidationError("perpendicular lengths must be positive")
    return out


@dataclass(frozen=True)
class _SideQuad:
    angle_x: float
    angle_y: float
    seam_curvature: float
    interior_mass: float


def _coons_mass(patch, arc, s0, s1, perp_p, perp_q, link, tol):
    """Curvature mass of the geodesic quadrilateral bounded by the seam
    segment [s0, s1], the two perpendiculars, and the connecting geodesic.

    The region is charted by transfinite interpolation of its four
    boundary curves; partial derivatives come from the curves' velocity
    fields, so the Jacobian is exact on the boundary and smooth inside.
    """
    ds = s1 - s0
    p00 = np.array(arc.point(s0))
    p10 = np.array(arc.point(s1))
    p01 = np.array(perp_p.end_point)
    p11 = np.array(perp_q.end_point)
    hp, hq, ll = perp_p.length, perp_q.length, link.length

    def chart(xi, eta):
        b = np.array(arc.point(s0 + xi * ds))
        bt = np.array(arc.velocity(s0 + xi * ds)) * ds
        tp = np.array(link.point(xi * ll))
        tpt = np.array(link.velocity(xi * ll)) * ll
        le = np.array(perp_p.point(eta * hp))
        lt = np.array(perp_p.velocity(eta * hp)) * hp
        ri = np.array(perp_q.point(eta * hq))
        rt = np.array(perp_q.velocity(eta * hq)) * hq
        pt = ((1 - eta) * b + eta * tp + (1 - xi) * le + xi * ri
              - ((1 - xi) * (1 - eta) * p00 + xi * (1 - eta) * p10
                 + (1 - xi) * eta * p01 + xi * eta * p11))
        d_xi = ((1 - eta) * bt + eta * tpt + (ri - le)
                - ((1 - eta) * (p10 - p00) + eta * (p11 - p01)))
        d_eta = ((tp - b) + (1 - xi) * lt + xi * rt
                 - ((1 - xi) * (p01 - p00) + xi * (p11 - p10)))
        return pt, d_xi, d_eta

    def integrand(xi, eta):
        pt, dx, de = chart(xi, eta)
        u, v = float(pt[0]), float(pt[1])
        jac = dx[0] * de[1] - dx[1] * de[0]
        return gaussian_curvature(patch, u, v) * patch.sqrt_det(u, v) * jac

    _, dxc, dec = chart(0.5, 0.5)
    sign = 1.0 if (dxc[0] * dec[1] - dxc[1] * dec[0]) >= 0.0 else -1.0
    return sign * quadrature.integrate_2d(integrand, 0.0, 1.0, 0.0, 1.0,
                                          tol=tol)


def _side_quadrilateral(patch, arc, s_x, s_y, h_x, h_y, area_tol):
    """One side of the seam quadrilateral: foot angles, the seam segment's
    total geodesic curvature, and the enclosed curvature mass."""
    # order the seam points by the arc parameter so the quadrilateral is
    # traversed counterclockwise in patch coordinates
    if s_x <= s_y:
        sp, sq, hp, hq, x_first = s_x, s_y, h_x, h_y, True
    else:
        sp, sq, hp, hq, x_first = s_y, s_x, h_y, h_x, False
    pp = arc.point(sp)
    qq = arc.point(sq)
    perp_p = shoot_geodesic(
        patch, pp, patch.rotate90(pp[0], pp[1], arc.velocity(sp)), hp)
    perp_q = shoot_geodesic(
        patch, qq, patch.rotate90(qq[0], qq[1], arc.velocity(sq)), hq)
    link = connect_geodesic(patch, perp_p.end_point, perp_q.end_point)
    wp = perp_p.end_velocity
    ang_p = oriented_angle(patch, perp_p.end_point,
                           (-wp[0], -wp[1]), link.velocity(0.0))
    wq = perp_q.end_velocity
    lv = link.end_velocity
    ang_q = oriented_angle(patch, perp_q.end_point,
                           (-lv[0], -lv[1]), (-wq[0], -wq[1]))
    f = lambda t: geodesic_curvature(patch, arc, t)
    nu = integrate_boundary(patch, arc, f=f, t0=sp, t1=sq, tol=1e-10)
    mass = _coons_mass(patch, arc, sp, sq, perp_p, perp_q, link, area_tol)
    if x_first:
        return _SideQuad(ang_p, ang_q, nu, mass)
    return _SideQuad(ang_q, ang_p, nu, mass)


def quadrilateral_angle_check(surface: GluedSurface, seam_id: str,
                              t_x: float, t_y: float, lengths=0.1,
                              tol: float = 1e-7,
                              area_tol: float = None) -> dict:
    """Angle-sum identity across a seam segment.

    Perpendicular geodesics are dropped from the seam points at t_x and
    t_y into each side and their feet joined by a geodesic.  The four
    angles at the feet exceed 2*pi by exactly the seam measure of the
    segment plus the curvature mass enclosed on the two sides; the report
    compares both quantities.
    """
    seam = surface.seam(seam_id)
    for name, t in (("t_x", t_x), ("t_y", t_y)):
        if not (0.0 <= t <= 1.0):
            raise ValidationError(f"{name} must lie in [0, 1]")
    if abs(t_y - t_x) < 1e-9:
        raise ValidationError("t_x and t_y must be distinct seam points")
    hx1, hy1, hx2, hy2 = _normalize_lengths(lengths)
    if area_tol is None:
        area_tol = min(tol * 1e-2, 1e-8)
    p1 = surface.patch(seam.side1[0])
    a1 = p1.arc(seam.side1[1])
    p2 = surface.patch(seam.side2[0])
    a2 = p2.arc(seam.side2[1])
    side1 = _side_quadrilateral(p1, a1, t_x, t_y, hx1, hy1, area_tol)
    side2 = _side_quadrilateral(p2, a2, seam.phi_value(t_x),
                                seam.phi_value(t_y), hx2, hy2, area_tol)
    surplus = (side1.angle_x + side1.angle_y + side2.angle_x + side2.angle_y
               - 2 * math.pi)
    predicted = (side1.seam_curvature + side2.seam_curvature
                 + side1.interior_mass + side2.interior_mass)
    defect = abs(surplus - predicted)
    return {
        "seam": seam_id,
        "t_x": t_x,
        "t_y": t_y,
        "length_x_side1": hx1,
        "length_y_side1": hy1,
        "length_x_side2": hx2,
        "length_y_side2": hy2,
        "angle_x_side1": side1.angle_x,
        "angle_y_side1": side1.angle_y,
        "angle_x_side2": side2.angle_x,
        "angle_y_side2": side2.angle_y,
        "angle_surplus": surplus,
        "seam_curvature_side1": side1.seam_curvature,
        "seam_curvature_side2": side2.seam_curvature,
        "interior_mass_side1": side1.interior_mass,
        "interior_mass_side2": side2.interior_mass,
        "predicted_surplus": predicted,
        "defect": defect,
        "tolerance": tol,
        "passed": bool(defect <= tol),
    }


def _is_flat(patch: MetricPatch) -> bool:
    pts = patch.domain.sample_points(6)
    return max(abs(gaussian_curvature(patch, u, v)) for u, v in pts) <= _FLAT_TOL


def length_invariance_check(surface: GluedSurface, seam_id: str,
                            t_x: float, t_y: float,
                            lengths=(0.05, 0.1, 0.2),
                            tol: float = 1e-7) -> dict:
    """Angle sums across a flat-flat seam do not depend on the
    perpendicular lengths; reports the spread over the given lengths.

    Flatness of both sides is required: with curvature present the
    enclosed mass, and with it the angle sum, genuinely changes with the
    lengths.
    """
    seam = surface.seam(seam_id)
    for pid in (seam.side1[0], seam.side2[0]):
        if not _is_flat(surface.patch(pid)):
            raise ValidationError(
                f"patch '{pid}' is not flat; the angle sum varies with the "
                f"perpendicular length on curved sides")
    hs = tuple(float(h) for h in lengths)
    if len(hs) < 2:
        raise ValidationError("need at least two lengths to compare")
    runs = [quadrilateral_angle_check(surface, seam_id, t_x, t_y, h, tol=tol)
            for h in hs]
    sums1 = tuple(r["angle_x_side1"] + r["angle_y_side1"] for r in runs)
    sums2 = tuple(r["angle_x_side2"] + r["angle_y_side2"] for r in runs)
    surpluses = tuple(r["angle_surplus"] for r in runs)
    spread1 = max(sums1) - min(sums1)
    spread2 = max(sums2) - min(sums2)
    spread_total = max(surpluses) - min(surpluses)
    return {
        "seam": seam_id,
        "t_x": t_x,
        "t_y": t_y,
        "lengths": hs,
        "angle_sums_side1": sums1,
        "angle_sums_side2": sums2,
        "surpluses": surpluses,
        "spread_side1": spread1,
        "spread_side2": spread2,
        "spread_surplus": spread_total,
        "tolerance": tol,
        "passed": bool(max(spread1, spread2, spread_total) <= tol),
    }


# -- boundary-ball areas -----------------------------------------------------


def _circular_segment(r, d):
    """Area of the part of a radius-r disc beyond a chord at distance d."""
    if d >= r:
        return 0.0
    d = max(d, 0.0)
    return r * r * math.acos(d / r) - d * math.sqrt(r * r - d * d)


def _closed_form_ok(patch, x, rmax):
    if not patch.is_euclidean():
        return False
    dom = patch.domain
    if dom.kind == "disc":
        return abs(math.hypot(x[0], x[1]) - 1.0) <= 1e-9 and rmax <= 1.0
    du = (x[0] - dom.u0, dom.u1 - x[0])
    dv = (x[1] - dom.v0, dom.v1 - x[1])
    corner = min(math.hypot(a, b) for a in du for b in dv)
    return corner > rmax


def _ball_areas_closed_form(patch, x, radii):
    dom = patch.domain
    if dom.kind == "disc":
        # intersection of the unit disc with a disc of radius r centered
        # on its rim
        out = []
        for r in radii:
            a = (r * r * math.acos(r / 2.0) + math.acos(1.0 - r * r / 2.0)
                 - (r / 2.0) * math.sqrt(4.0 - r * r))
            out.append(a)
        return tuple(out)
    dists = (x[0] - dom.u0, dom.u1 - x[0], x[1] - dom.v0, dom.v1 - x[1])
    out = []
    for r in radii:
        a = math.pi * r * r - math.fsum(_circular_segment(r, d)
                                        for d in dists)
        out.append(a)
    return tuple(out)


def _ball_areas_sweep(patch, arc, t, radii, tol):
    """Geodesic-fan areas: rays leave the boundary point at angles
    theta in (0, pi) from the arc tangent; a transverse Jacobi field
    carries the area element along each ray."""
    x = arc.point(t)
    that = patch.unit(x[0], x[1], arc.velocity(t))
    nhat = patch.rotate90(x[0], x[1], that)
    rmax = radii[-1]
    geo = _geodesic_rhs(patch)
    events = patch.domain.exit_events(slack=0.0)
    cache = {}

    def ray(theta):
        hit = cache.get(theta)
        if hit is not None:
            return hit
        d = (math.cos(theta) * that[0] + math.sin(theta) * nhat[0],
             math.cos(theta) * that[1] + math.sin(theta) * nhat[1])
        du, dv = patch.unit(x[0], x[1], d)
        y0 = (x[0], x[1], du, dv, 0.0, 1.0, 0.0)

        def rhs(s, y):
            gu, gv, gp, gq = geo(s, y[:4])
            k = gaussian_curvature(patch, y[0], y[1])
            return (gu, gv, gp, gq, y[5], -k * y[4], y[4])

        sol = solve_ivp(rhs, (0.0, rmax), y0, method="RK45", rtol=1e-10,
                        atol=1e-13, dense_output=True, events=events)
        if sol.status < 0:  # pragma: no cover - defensive
            raise ConvergenceFailure(
                f"ray integration failed: {sol.message}")
        hits = [te[0] for te in sol.t_events if len(te)]
        if hits:
            s_exit = min(min(hits), rmax)
        else:
            s_exit = min(float(sol.t[-1]), rmax)
            # Grazing rays can hide their whole excursion inside one
            # solver step; the exit event compares signs at step ends
            # only, so it misses a dip that starts at distance -0 and
            # returns below.  Check the endpoint and recover the exit
            # from the signed boundary distance directly.
            def depth(s):
                y = sol.sol(s)
                return patch.domain.boundary_distance(float(y[0]),
                                                      float(y[1]))
            if depth(s_exit) < 0.0:
                ss = np.linspace(0.0, s_exit, 65)
                k = int(np.argmax([depth(s) for s in ss]))
                if depth(ss[k]) <= 0.0:
                    s_exit = 0.0
                else:
                    s_exit = brentq(depth, ss[k], s_exit, xtol=1e-14)
        hit = (sol.sol, s_exit)
        cache[theta] = hit
        return hit

    # Integrate over a fixed partition of the fan.  Near the tangent
    # directions the exit clips the rays on a sliver narrower than any
    # coarse quadrature panel; with a single panel the integrand looks
    # exactly constant at every node and the sliver goes unseen, so each
    # piece is refined independently.
    pieces = np.linspace(0.0, math.pi, 33)
    areas = []
    for r in radii:
        def swept(theta):
            dense, s_exit = ray(theta)
            s_eff = min(r, s_exit)
            if s_eff <= 0.0:
                return 0.0
            return float(dense(s_eff)[6])

        piece_tol = tol / (len(pieces) - 1)
        areas.append(math.fsum(
            quadrature.integrate_1d(swept, a, b, tol=piece_tol)
            for a, b in zip(pieces[:-1], pieces[1:])))
    return tuple(areas)


def boundary_ball_areas(patch: MetricPatch, arc, t: float, radii,
                        method: str = "auto", sweep_tol: float = 1e-9):
    """Areas of the sets {distance to the boundary point <= r} inside the
    patch, for each radius.

    Returns (areas, method used).  "closed-form" applies Euclidean disc
    intersection formulas and requires the standard flat metric with no
    domain corner inside the largest ball; "sweep" works on any patch as
    long as the largest radius stays below the inward injectivity radius.
    """
    radii = tuple(float(r) for r in radii)
    if not radii or any(r <= 0 for r in radii):
        raise ValidationError("radii must be positive")
    if list(radii) != sorted(radii):
        raise ValidationError("radii must increase")
    x = arc.point(t)
    if method == "auto":
        method = "closed-form" if _closed_form_ok(patch, x, radii[-1]) \
            else "sweep"
    if method == "closed-form":
        if not _closed_form_ok(patch, x, radii[-1]):
            raise ValidationError(
                "closed form needs the standard flat metric and no domain "
                "corner within the largest radius")
        return _ball_areas_closed_form(patch, x, radii), "closed-form"
    if method != "sweep":
        raise ValidationError(f"unknown method '{method}'")
    return _ball_areas_sweep(patch, arc, t, radii, sweep_tol), "sweep"


def disc_area_asymptotics(surface: GluedSurface, seam_id: str, t: float,
                          rmin: float = 0.02, rmax: float = 0.1,
                          samples: int = 8, radii=None,
                          sweep_tol: float = 1e-9,
                          quadratic_rel_tol: float = 0.005,
                          cubic_rel_tol: float = 0.02) -> dict:
    """Growth of small-ball areas at a seam point.

    The area of a radius-r ball centered at a seam point grows like
    pi r^2, with a cubic correction proportional to the sum of the two
    one-sided geodesic curvatures.  A weighted least-squares fit of
    c2 r^2 + c3 r^3 + c4 r^4 (weights 1/r^4, so every radius informs the
    cubic equally) extracts the coefficients; the quartic term is a
    nuisance column absorbing the next order so it cannot bias c3.  The
    report compares c2 against pi and 3|c3| against |kappa1 + kappa2|,
    and records the sign of c3 as observed.
    """
    seam = surface.seam(seam_id)
    if not (0.0 <= t <= 1.0):
        raise ValidationError("t must lie in [0, 1]")
    if radii is None:
        if not (0.0 < rmin < rmax):
            raise ValidationError("radii must satisfy 0 < rmin < rmax")
        if samples < 4:
            raise FitIllConditioned(
                "need at least four radii for a three-term fit")
        radii = np.linspace(rmin, rmax, samples)
    radii = tuple(sorted(float(r) for r in radii))
    if len(set(radii)) < 4:
        raise FitIllConditioned("need at least four distinct radii")
    if radii[0] <= 0.0:
        raise ValidationError("radii must be positive")
    if radii[-1] - radii[0] < 0.05 * radii[-1]:
        raise FitIllConditioned("radii are too clustered to separate the "
                                "quadratic, cubic, and quartic terms")

    sp = surface.seam_point(seam_id, t)
    kappa_sum = sp.kappa1 + sp.kappa2
    p1 = surface.patch(seam.side1[0])
    a1 = p1.arc(seam.side1[1])
    p2 = surface.patch(seam.side2[0])
    a2 = p2.arc(seam.side2[1])
    areas1, method1 = boundary_ball_areas(p1, a1, t, radii,
                                          sweep_tol=sweep_tol)
    areas2, method2 = boundary_ball_areas(p2, a2, seam.phi_value(t), radii,
                                          sweep_tol=sweep_tol)
    total = tuple(a + b for a, b in zip(areas1, areas2))

    r = np.asarray(radii)
    y = np.asarray(total) / r ** 2
    design = np.column_stack([np.ones_like(r), r, r * r])
    if np.linalg.cond(design) > 1e10:
        raise FitIllConditioned("fit matrix is numerically singular")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    c2, c3, c4 = (float(c) for c in coef)
    residuals = tuple(float(x) for x in (y - design @ coef))

    quad_err = abs(c2 - math.pi) / math.pi
    cubic_err = abs(3.0 * abs(c3) - abs(kappa_sum))
    cubic_ok = cubic_err <= max(cubic_rel_tol * abs(kappa_sum), 1e-6)
    quad_ok = quad_err <= quadratic_rel_tol
    sign = 0.0 if abs(c3) < 1e-9 else math.copysign(1.0, c3)
    return {
        "seam": seam_id,
        "seam_parameter": t,
        "radii": radii,
        "areas_side1": areas1,
        "areas_side2": areas2,
        "areas_total": total,
        "method_side1": method1,
        "method_side2": method2,
        "quadratic_coefficient": c2,
        "cubic_coefficient": c3,
        "quartic_coefficient": c4,
        "predicted_quadratic": math.pi,
        "boundary_curvature_sum": kappa_sum,
        "predicted_cubic_magnitude": abs(kappa_sum) / 3.0,
        "cubic_sign": sign,
        "fit_residuals": residuals,
        "quadratic_rel_error": quad_err,
        "cubic_magnitude_error": cubic_err,
        "quadratic_passed": bool(quad_ok),
        "cubic_passed": bool(cubic_ok),
        "tolerance_quadratic": quadratic_rel_tol,
        "tolerance_cubic": cubic_rel_tol,
        "passed": bool(quad_ok and cubic_ok),
    }


# -- polyhedra ----------------------------------------------------------------


def polyhedron_curvature(vertices, chi: int = 2, tol: float = 1e-9) -> dict:
    """Vertex angle defects of a polyhedral surface against 2*pi*chi.

    ``vertices`` maps vertex ids to the list of face angles meeting there
    (a dict or a sequence of (id, angles) pairs).  Angle sums above 2*pi
    are legal and produce negative masses (saddle vertices).
    """
    if isinstance(vertices, dict):
        items = list(vertices.items())
    else:
        items = [(vid, angles) for vid, angles in vertices]
    problems = []
    if not items:
        problems.append(("vertices", "at least one vertex is required"))
    seen = set()
    for i, (vid, angles) in enumerate(items):
        if vid in seen:
            problems.append((f"vertices[{i}]", f"duplicate vertex '{vid}'"))
        seen.add(vid)
        angles = tuple(angles)
        if not angles:
            problems.append((f"vertices[{i}].angles",
                             "needs at least one face angle"))
        for j, a in enumerate(angles):
            if not (isinstance(a, (int, float)) and math.isfinite(a)):
                problems.append((f"vertices[{i}].angles[{j}]",
                                 "angle must be a finite number"))
            elif not (0.0 < a < 2.0 * math.pi):
                problems.append((f"vertices[{i}].angles[{j}]",
                                 "face angle must lie in (0, 2*pi)"))
    if problems:
        raise ValidationError(problems)
    masses = {vid: 2.0 * math.pi - math.fsum(angles)
              for vid, angles in items}
    total = math.fsum(masses.values())
    target = 2.0 * math.pi * chi
    defect = abs(total - target)
    return {
        "vertex_count": len(items),
        "masses": masses,
        "total_mass": total,
        "euler_characteristic": chi,
        "target": target,
        "defect": defect,
        "tolerance": tol,
        "passed": bool(defect <= tol),
    }
