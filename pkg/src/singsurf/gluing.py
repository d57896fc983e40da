"""Assembling patches into a singular surface.

A surface is a list of patches plus seams, each seam identifying one
boundary arc with another through a strictly monotone reparametrization
phi of the arc parameter.  Corners of glued arcs fall into identification
classes; classes not touching any free (unglued) arc are interior
junctions and must be declared as cone points, whose cyclic corner order
is verified by walking the identifications around the junction.

The Euler characteristic is computed from the stratification: patch
characteristics, plus one vertex per interior junction, minus one edge
per open (non-loop) seam.  Closed seam loops carry no junctions and
cancel out of the count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from scipy.optimize import brentq

from .errors import ValidationError
from .expr import Expr, parse
from .geometry import (
    BoundaryArc,
    MetricPatch,
    geodesic_curvature,
    integrate_boundary,
)

__all__ = [
    "Seam", "ConePoint", "JunctionClass", "SeamPoint", "GluedSurface",
    "build_surface",
]

_PHI_GRID = 65          # sample count for monotonicity/bounds checks
_DPHI_MIN = 1e-9        # |phi'| must stay within these bounds so the two
_DPHI_MAX = 1e9         # sides' arclength measures dominate each other
_ANGLE_CHECK_TOL = 1e-6


def _as_expr(e) -> Expr:
    return e if isinstance(e, Expr) else parse(e)


@dataclass
class Seam:
    """Identification of side1's arc with side2's arc via t -> phi(t)."""

    seam_id: str
    side1: tuple  # (patch id, arc id)
    side2: tuple
    phi: Expr

    # filled in by GluedSurface validation
    increasing: bool = field(default=True, init=False)
    is_loop: bool = field(default=False, init=False)
    length1: float = field(default=0.0, init=False)
    length2: float = field(default=0.0, init=False)

    def __post_init__(self):
        self.side1 = (str(self.side1[0]), str(self.side1[1]))
        self.side2 = (str(self.side2[0]), str(self.side2[1]))
        self.phi = _as_expr(self.phi)

    def phi_value(self, t: float) -> float:
        return min(1.0, max(0.0, self.phi.eval(t, 0.0)))

    def dphi(self, t: float) -> float:
        return self.phi.jet(t, 0.0).fu

    def phi_inverse(self, s: float) -> float:
        lo, hi = 0.0, 1.0
        f = lambda t: self.phi.eval(t, 0.0) - s
        flo, fhi = f(lo), f(hi)
        if flo == 0.0:
            return lo
        if fhi == 0.0:
            return hi
        if flo * fhi > 0:
            raise ValueError(f"{s} outside the range of phi")
        return brentq(f, lo, hi, xtol=1e-14)


@dataclass
class ConePoint:
    """Interior junction: a cyclic list of identified patch corners."""

    cone_id: str
    cycle: tuple  # of (patch id, corner marker)
    declared_angles: Optional[tuple] = None

    # filled in by GluedSurface validation
    angles: tuple = field(default=(), init=False)
    total_angle: float = field(default=0.0, init=False)
    mass: float = field(default=0.0, init=False)

    def __post_init__(self):
        self.cycle = tuple((str(p), str(c)) for p, c in self.cycle)
        if self.declared_angles is not None:
            self.declared_angles = tuple(float(a) for a in self.declared_angles)


@dataclass(frozen=True)
class JunctionClass:
    """Identification class of patch corners, interior or boundary."""

    corners: tuple  # of (patch id, arc index of the outgoing arc)
    interior: bool
    total_angle: float


@dataclass(frozen=True)
class SeamPoint:
    """Both preimages of an identified seam point with local data."""

    t: float
    s2: float
    point1: tuple
    point2: tuple
    kappa1: float
    kappa2: float
    speed1: float
    speed2: float
    dphi: float


class GluedSurface:
    """Validated collection of patches, seams, and cone points."""

    def __init__(self, patches: Sequence[MetricPatch], seams: Sequence[Seam],
                 cone_points: Sequence[ConePoint] = ()):
        self.patches = tuple(patches)
        self.seams = tuple(seams)
        self.cone_points = tuple(cone_points)
        self.patch_map = {p.patch_id: p for p in self.patches}
        self.seam_map = {s.seam_id: s for s in self.seams}
        self.cone_map = {c.cone_id: c for c in self.cone_points}

        problems = self._check_references()
        if problems:
            raise ValidationError(problems)
        problems = self._check_seams()
        if problems:
            raise ValidationError(problems)
        self._index_gluing()
        problems = self._check_junctions()
        if problems:
            raise ValidationError(problems)

    # -- structural validation -------------------------------------------------

    def _check_references(self):
        out = []
        if len(self.patch_map) != len(self.patches):
            out.append(("patches", "duplicate patch ids"))
        if len(self.seam_map) != len(self.seams):
            out.append(("seams", "duplicate seam ids"))
        if len(self.cone_map) != len(self.cone_points):
            out.append(("cone_points", "duplicate cone point ids"))
        used = {}
        for seam in self.seams:
            loc = f"seam '{seam.seam_id}'"
            for side_name, (pid, aid) in (("side1", seam.side1),
                                          ("side2", seam.side2)):
                patch = self.patch_map.get(pid)
                if patch is None:
                    out.append((f"{loc}.{side_name}", f"unknown patch '{pid}'"))
                    continue
                if aid not in patch._arc_index:
                    out.append((f"{loc}.{side_name}",
                                f"patch '{pid}' has no arc '{aid}'"))
                    continue
                key = (pid, aid)
                if key in used:
                    out.append((f"{loc}.{side_name}",
                                f"arc {key} already used by seam "
                                f"'{used[key]}'"))
                used[key] = seam.seam_id
            if seam.side1 == seam.side2:
                out.append((loc, "cannot glue an arc to itself"))
        for cone in self.cone_points:
            loc = f"cone point '{cone.cone_id}'"
            if len(cone.cycle) == 0:
                out.append((loc, "empty corner cycle"))
            if len(set(cone.cycle)) != len(cone.cycle):
                out.append((loc, "repeated corner in cycle"))
            for pid, marker in cone.cycle:
                patch = self.patch_map.get(pid)
                if patch is None:
                    out.append((loc, f"unknown patch '{pid}'"))
                elif marker not in patch.corner_names():
                    out.append((loc, f"patch '{pid}' has no corner '{marker}'"))
            if cone.declared_angles is not None and \
                    len(cone.declared_angles) != len(cone.cycle):
                out.append((loc, "declared angle list length does not match "
                                 "the cycle"))
        return out

    def _check_seams(self):
        out = []
        ts = [k / (_PHI_GRID - 1) for k in range(_PHI_GRID)]
        for seam in self.seams:
            loc = f"seam '{seam.seam_id}'"
            extra = seam.phi.variables() - {"u"}
            if extra:
                out.append((loc, f"phi uses variables {sorted(extra)}; only "
                                 f"the arc parameter u is allowed"))
                continue
            try:
                vals = [seam.phi.eval(t, 0.0) for t in ts]
                ders = [seam.phi.jet(t, 0.0).fu for t in ts]
            except Exception as exc:
                out.append((loc, f"phi evaluation failed: {exc}"))
                continue
            bad = False
            for t, d in zip(ts, ders):
                if not (_DPHI_MIN <= abs(d) <= _DPHI_MAX):
                    out.append((loc, f"|phi'| = {abs(d):.3g} at t={t:.4g} "
                                     f"outside [{_DPHI_MIN:g}, {_DPHI_MAX:g}]"))
                    bad = True
                    break
            if bad:
                continue
            if any(d > 0 for d in ders) and any(d < 0 for d in ders):
                out.append((loc, "phi' changes sign; phi must be strictly "
                                 "monotone"))
                continue
            seam.increasing = ders[0] > 0
            e0, e1 = vals[0], vals[-1]
            want = (0.0, 1.0) if seam.increasing else (1.0, 0.0)
            if abs(e0 - want[0]) > 1e-9 or abs(e1 - want[1]) > 1e-9:
                out.append((loc, f"phi endpoints ({e0:.6g}, {e1:.6g}) do not "
                                 f"map onto (0, 1)"))
                continue
            if min(vals) < -1e-9 or max(vals) > 1 + 1e-9:
                out.append((loc, "phi leaves [0, 1]"))
                continue
            p1, a1 = self._arc(seam.side1)
            p2, a2 = self._arc(seam.side2)
            loop1 = self._is_loop(a1)
            loop2 = self._is_loop(a2)
            if loop1 != loop2:
                out.append((loc, "cannot glue a closed-loop arc to an open "
                                 "arc"))
                continue
            seam.is_loop = loop1
            if not seam.is_loop:
                missing = []
                for patch, arc in ((p1, a1), (p2, a2)):
                    names = patch.corner_names()
                    idx = patch._arc_index[arc.arc_id]
                    n = len(patch.boundary)
                    start_named = any(i == idx for i in names.values())
                    end_named = any(i == (idx + 1) % n for i in names.values())
                    if not (start_named and end_named):
                        missing.append(f"{patch.patch_id}/{arc.arc_id}")
                if missing:
                    out.append((loc, "dangling seam end: arcs "
                                     f"{missing} lack corner markers"))
                    continue
            seam.length1 = integrate_boundary(p1, a1, tol=1e-10)
            seam.length2 = integrate_boundary(p2, a2, tol=1e-10)
        return out

    def _arc(self, side):
        patch = self.patch_map[side[0]]
        return patch, patch.arc(side[1])

    @staticmethod
    def _is_loop(arc: BoundaryArc) -> bool:
        p0 = arc.point(0.0)
        p1 = arc.point(1.0)
        return math.hypot(p0[0] - p1[0], p0[1] - p1[1]) <= 1e-9 and \
            arc.corner_start is None and arc.corner_end is None

    # -- junction identification -------------------------------------------------

    def _index_gluing(self):
        # arc -> seam lookup and the free-boundary list
        self._seam_of_arc = {}
        for seam in self.seams:
            self._seam_of_arc[seam.side1] = (seam, 1)
            self._seam_of_arc[seam.side2] = (seam, 2)
        free = []
        for patch in self.patches:
            for arc in patch.boundary:
                if (patch.patch_id, arc.arc_id) not in self._seam_of_arc:
                    free.append((patch.patch_id, arc.arc_id))
        self.free_boundary = tuple(free)

    def _corner_key(self, pid, arc_id, endpoint):
        """Corner (pid, outgoing-arc index) at an endpoint of an arc."""
        patch = self.patch_map[pid]
        idx = patch._arc_index[arc_id]
        n = len(patch.boundary)
        return (pid, idx if endpoint == 0 else (idx + 1) % n)

    def _cross_seam(self, pid, arc_id, endpoint):
        """Follow the seam containing the given arc end; None if free."""
        hit = self._seam_of_arc.get((pid, arc_id))
        if hit is None:
            return None
        seam, side = hit
        if seam.is_loop:
            return None
        if side == 1:
            e2 = 0 if (seam.phi_value(float(endpoint)) < 0.5) else 1
            opid, oarc = seam.side2
            return opid, oarc, e2
        # on side2: invert phi on endpoints
        e1 = endpoint if seam.increasing else 1 - endpoint
        opid, oarc = seam.side1
        return opid, oarc, e1

    def _walk_junction(self, pid, corner_idx):
        """Corners encountered walking around a junction; None if the walk
        reaches a free arc (boundary junction)."""
        patch = self.patch_map[pid]
        start = (pid, corner_idx)
        # leave through the outgoing arc's start endpoint
        depart = (pid, patch.boundary[corner_idx].arc_id, 0)
        visited = [start]
        for _ in range(10000):
            crossed = self._cross_seam(*depart)
            if crossed is None:
                return None
            opid, oarc, oend = crossed
            corner = self._corner_key(opid, oarc, oend)
            if corner == start:
                return visited
            visited.append(corner)
            # leave through the corner's other incident arc end
            opatch = self.patch_map[opid]
            cidx = corner[1]
            if oend == 0:
                # arrived via the outgoing arc; leave via the incoming one
                prev_idx = (cidx - 1) % len(opatch.boundary)
                depart = (opid, opatch.boundary[prev_idx].arc_id, 1)
            else:
                depart = (opid, opatch.boundary[cidx].arc_id, 0)
        raise ValidationError("junction walk did not terminate")

    def _check_junctions(self):
        out = []
        # union-find over all corners
        parent = {}
        for patch in self.patches:
            if len(patch.boundary) >= 2:
                for i in range(len(patch.boundary)):
                    parent[(patch.patch_id, i)] = (patch.patch_id, i)

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)

        for seam in self.seams:
            if seam.is_loop:
                continue
            p1, a1 = seam.side1
            p2, a2 = seam.side2
            for e1 in (0, 1):
                e2 = 0 if seam.phi_value(float(e1)) < 0.5 else 1
                union(self._corner_key(p1, a1, e1),
                      self._corner_key(p2, a2, e2))

        classes = {}
        for key in parent:
            classes.setdefault(find(key), []).append(key)

        def corner_is_sealed(key):
            pid, idx = key
            patch = self.patch_map[pid]
            n = len(patch.boundary)
            out_arc = (pid, patch.boundary[idx].arc_id)
            in_arc = (pid, patch.boundary[(idx - 1) % n].arc_id)
            return out_arc in self._seam_of_arc and in_arc in self._seam_of_arc

        junctions = []
        interior_by_set = {}
        for root in sorted(classes):
            members = sorted(classes[root])
            interior = all(corner_is_sealed(k) for k in members)
            total = 0.0
            for pid, idx in members:
                total += self.patch_map[pid].corner_angle(idx)
            jc = JunctionClass(tuple(members), interior, total)
            junctions.append(jc)
            if interior:
                interior_by_set[frozenset(members)] = jc
        self.junction_classes = tuple(junctions)

        # cone points must enumerate the interior junctions exactly
        claimed = {}
        for cone in self.cone_points:
            loc = f"cone point '{cone.cone_id}'"
            keys = []
            for pid, marker in cone.cycle:
                idx = self.patch_map[pid].corner_names()[marker]
                keys.append((pid, idx))
            kset = frozenset(keys)
            if kset not in interior_by_set:
                out.append((loc, "cycle is not an interior junction class "
                                 "(touches free boundary or is mis-grouped)"))
                continue
            if kset in claimed:
                out.append((loc, f"junction already declared by cone point "
                                 f"'{claimed[kset]}'"))
                continue
            claimed[kset] = cone.cone_id
            walk = self._walk_junction(*keys[0])
            if walk is None or len(walk) != len(keys):
                out.append((loc, "cycle does not close up around the "
                                 "junction"))
                continue
            forward = walk
            backward = [walk[0]] + walk[1:][::-1]
            if keys != forward and keys != backward:
                out.append((loc, "cycle order does not match the seam "
                                 "identifications around the junction"))
                continue
            angles = []
            for pid, idx in keys:
                angles.append(self.patch_map[pid].corner_angle(idx))
            for j, a in enumerate(angles):
                if not (0.0 < a < 2 * math.pi):
                    out.append((loc, f"interior angle {a:.6g} at "
                                     f"{cone.cycle[j]} outside (0, 2*pi)"))
            if cone.declared_angles is not None:
                for j, (a, d) in enumerate(zip(angles, cone.declared_angles)):
                    if abs(a - d) > _ANGLE_CHECK_TOL:
                        out.append((loc, f"declared angle {d:.9g} at "
                                         f"{cone.cycle[j]} disagrees with the "
                                         f"computed {a:.9g}"))
            cone.angles = tuple(angles)
            cone.total_angle = sum(angles)
            cone.mass = 2 * math.pi - cone.total_angle
        for jc in self.junction_classes:
            if jc.interior and frozenset(jc.corners) not in claimed:
                names = []
                for pid, idx in jc.corners:
                    inv = {v: k for k, v in
                           self.patch_map[pid].corner_names().items()}
                    names.append((pid, inv.get(idx, f"<arc index {idx}>")))
                out.append(("cone_points", f"interior junction {names} is "
                                           f"not declared as a cone point"))
        return out

    # -- queries -------------------------------------------------------------

    @property
    def is_closed(self) -> bool:
        return len(self.free_boundary) == 0

    def euler_characteristic(self) -> int:
        v = sum(1 for jc in self.junction_classes if jc.interior)
        e = sum(1 for seam in self.seams if not seam.is_loop)
        return sum(p.chi for p in self.patches) + v - e

    def seam(self, seam_id: str) -> Seam:
        try:
            return self.seam_map[seam_id]
        except KeyError:
            raise ValidationError(f"no seam '{seam_id}'") from None

    def patch(self, patch_id: str) -> MetricPatch:
        try:
            return self.patch_map[patch_id]
        except KeyError:
            raise ValidationError(f"no patch '{patch_id}'") from None

    def seam_point(self, seam_id: str, t: float) -> SeamPoint:
        if not (0.0 <= t <= 1.0):
            raise ValueError("seam parameter must lie in [0, 1]")
        seam = self.seam(seam_id)
        p1, a1 = self._arc(seam.side1)
        p2, a2 = self._arc(seam.side2)
        s2 = seam.phi_value(t)
        pt1 = a1.point(t)
        pt2 = a2.point(s2)
        w1 = a1.velocity(t)
        w2 = a2.velocity(s2)
        return SeamPoint(
            t=t, s2=s2, point1=pt1, point2=pt2,
            kappa1=geodesic_curvature(p1, a1, t),
            kappa2=geodesic_curvature(p2, a2, s2),
            speed1=p1.norm(pt1[0], pt1[1], w1),
            speed2=p2.norm(pt2[0], pt2[1], w2),
            dphi=seam.dphi(t),
        )

    def boundary_turning(self) -> float:
        """Total corner turning of boundary junction classes, sum of
        (pi - total angle); zero on closed surfaces."""
        return sum(math.pi - jc.total_angle
                   for jc in self.junction_classes if not jc.interior)

    def __repr__(self):
        return (f"GluedSurface({len(self.patches)} patches, "
                f"{len(self.seams)} seams, {len(self.cone_points)} cone "
                f"points, chi={self.euler_characteristic()})")


def build_surface(patches, seams, cone_points=()) -> GluedSurface:
    """Validate and assemble a surface; raises ValidationError listing all
    violated invariants."""
    return GluedSurface(patches, seams, cone_points)
