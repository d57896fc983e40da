"""Stock surfaces used by the test suite, the examples, and the CLI.

Everything here is assembled from the public gluing API, so each builder
doubles as validation exercise.  The doubled equilateral triangle is cut
into six flat quadrilateral patches (each triangle copy split by the
segments joining the centroid to the edge midpoints) because a triangle
is not a smooth image of a rectangle or disc; the quadrilaterals carry
the pullback metric of the bilinear parametrization, which is quadratic
in the parameters.
"""

from __future__ import annotations

import math

from .geometry import (
    BoundaryArc,
    DiscDomain,
    MetricPatch,
    RectDomain,
    circle_boundary,
    rect_boundary,
)
from .gluing import ConePoint, GluedSurface, Seam
from .expr import parse

__all__ = [
    "flat_square_patch", "flat_disc_patch", "hemisphere_patch",
    "doubled_square", "doubled_square_stretched", "doubled_square_subdivided",
    "doubled_disc", "doubled_disc_split", "two_hemispheres",
    "disc_plus_hemisphere", "two_rectangles_one_seam",
    "four_squares_around_point", "cube_surface", "doubled_triangle",
    "builtin_surfaces",
]

RIGHT = math.pi / 2


def flat_square_patch(pid: str) -> MetricPatch:
    return MetricPatch(pid, RectDomain(0, 1, 0, 1), "1", "0", "1",
                       boundary=rect_boundary(0, 1, 0, 1))


def flat_disc_patch(pid: str) -> MetricPatch:
    return MetricPatch(pid, DiscDomain(), "1", "0", "1",
                       boundary=circle_boundary())


def hemisphere_patch(pid: str) -> MetricPatch:
    """Round unit hemisphere over the disc domain; the rim is the equator.

    Stereographic coordinates: E = G = 4/(1 + u^2 + v^2)^2, so the chart
    has no pole singularity, K = 1, area 2*pi, and the boundary circle is
    a geodesic.
    """
    g = "4/(1 + u^2 + v^2)^2"
    return MetricPatch(pid, DiscDomain(), g, "0", g,
                       boundary=circle_boundary())


def _mirror_seams(pid1, pid2, arcs=("bottom", "right", "top", "left")):
    return [Seam(f"{arc}", (pid1, arc), (pid2, arc), "u") for arc in arcs]


def doubled_square() -> GluedSurface:
    """Two flat unit squares glued edge to edge: a pillowcase with four
    right-angle cone points of mass pi each."""
    a = flat_square_patch("A")
    b = flat_square_patch("B")
    seams = _mirror_seams("A", "B")
    cones = [ConePoint(f"v{k}", [("A", f"c{k}"), ("B", f"c{k}")],
                       declared_angles=(RIGHT, RIGHT)) for k in range(4)]
    return GluedSurface([a, b], seams, cones)


def doubled_square_stretched() -> GluedSurface:
    """Doubled square whose bottom seam uses a non-affine reparametrization;
    the gluing is not an isometry, only mutually absolutely continuous."""
    a = flat_square_patch("A")
    b = flat_square_patch("B")
    seams = _mirror_seams("A", "B", ("right", "top", "left"))
    seams.insert(0, Seam("bottom", ("A", "bottom"), ("B", "bottom"),
                         "log(1 + (exp(1) - 1)*u)"))
    cones = [ConePoint(f"v{k}", [("A", f"c{k}"), ("B", f"c{k}")])
             for k in range(4)]
    return GluedSurface([a, b], seams, cones)


def _split_bottom_square(pid: str) -> MetricPatch:
    arcs = (
        BoundaryArc("bottom1", parse("0.5*u"), parse("0.0"), "c0", "m"),
        BoundaryArc("bottom2", parse("0.5 + 0.5*u"), parse("0.0"), "m", "c1"),
        BoundaryArc("right", parse("1.0"), parse("u"), "c1", "c2"),
        BoundaryArc("top", parse("1 - u"), parse("1.0"), "c2", "c3"),
        BoundaryArc("left", parse("0.0"), parse("1 - u"), "c3", "c0"),
    )
    return MetricPatch(pid, RectDomain(0, 1, 0, 1), "1", "0", "1",
                       boundary=arcs)


def doubled_square_subdivided() -> GluedSurface:
    """Doubled square with the bottom seam split at its midpoint by a flat
    junction (angle pi on both sides): same surface, V and E one higher."""
    a = _split_bottom_square("A")
    b = _split_bottom_square("B")
    seams = [Seam(arc, ("A", arc), ("B", arc), "u")
             for arc in ("bottom1", "bottom2", "right", "top", "left")]
    cones = [ConePoint(f"v{k}", [("A", f"c{k}"), ("B", f"c{k}")])
             for k in range(4)]
    cones.append(ConePoint("mid", [("A", "m"), ("B", "m")],
                           declared_angles=(math.pi, math.pi)))
    return GluedSurface([a, b], seams, cones)


def doubled_disc() -> GluedSurface:
    """Two flat unit discs glued along their rims: a sphere-like surface
    whose curvature lives entirely on the seam."""
    return GluedSurface([flat_disc_patch("A"), flat_disc_patch("B")],
                        [Seam("rim", ("A", "rim"), ("B", "rim"), "u")])


def _half_rim(arc_id, offset, c0, c1):
    x = f"cos(pi*u + {offset!r})"
    y = f"sin(pi*u + {offset!r})"
    return BoundaryArc(arc_id, parse(x), parse(y), c0, c1)


def _split_disc_patch(pid: str) -> MetricPatch:
    arcs = (_half_rim("rim1", 0.0, "m0", "m1"),
            _half_rim("rim2", math.pi, "m1", "m0"))
    return MetricPatch(pid, DiscDomain(), "1", "0", "1", boundary=arcs)


def doubled_disc_split() -> GluedSurface:
    """Doubled flat disc with the rim split into two seams meeting at two
    flat junctions; topologically the same sphere."""
    a = _split_disc_patch("A")
    b = _split_disc_patch("B")
    seams = [Seam("rim1", ("A", "rim1"), ("B", "rim1"), "u"),
             Seam("rim2", ("A", "rim2"), ("B", "rim2"), "u")]
    cones = [ConePoint("m0", [("A", "m0"), ("B", "m0")]),
             ConePoint("m1", [("A", "m1"), ("B", "m1")])]
    return GluedSurface([a, b], seams, cones)


def two_hemispheres() -> GluedSurface:
    """Round sphere assembled from two hemispheres along the equator."""
    return GluedSurface([hemisphere_patch("A"), hemisphere_patch("B")],
                        [Seam("equator", ("A", "rim"), ("B", "rim"), "u")])


def disc_plus_hemisphere() -> GluedSurface:
    """Flat unit disc capped with a round hemisphere: the seam carries
    density from the flat side only (the equator is a geodesic)."""
    return GluedSurface([flat_disc_patch("A"), hemisphere_patch("B")],
                        [Seam("rim", ("A", "rim"), ("B", "rim"), "u")])


def two_rectangles_one_seam() -> GluedSurface:
    """Two unit squares joined along a single edge; free boundary left."""
    a = flat_square_patch("A")
    b = flat_square_patch("B")
    return GluedSurface([a, b], [Seam("join", ("A", "right"), ("B", "left"),
                                      "1 - u")])


def four_squares_around_point() -> GluedSurface:
    """Four flat squares glued around one interior junction of total angle
    2*pi; the outer boundary stays free."""
    names = ["SW", "SE", "NE", "NW"]
    patches = [flat_square_patch(n) for n in names]
    seams = [
        Seam("s-mid", ("SW", "right"), ("SE", "left"), "1 - u"),
        Seam("n-mid", ("NW", "right"), ("NE", "left"), "1 - u"),
        Seam("w-mid", ("SW", "top"), ("NW", "bottom"), "1 - u"),
        Seam("e-mid", ("SE", "top"), ("NE", "bottom"), "1 - u"),
    ]
    center = ConePoint("center", [("SW", "c2"), ("NW", "c1"),
                                  ("NE", "c0"), ("SE", "c3")],
                       declared_angles=(RIGHT,) * 4)
    return GluedSurface(patches, seams, [center])


def cube_surface() -> GluedSurface:
    """Unit cube from six flat faces: twelve seams, eight cone points of
    mass pi/2 each.

    Faces are oriented consistently (outward), so every shared edge is
    traversed oppositely by its two faces and all seams use phi = 1 - u.
    """
    face_ids = ["down", "top", "front", "back", "left", "right"]
    patches = [flat_square_patch(f) for f in face_ids]
    edges = [
        ("e03", ("down", "bottom"), ("left", "left")),
        ("e23", ("down", "right"), ("back", "left")),
        ("e12", ("down", "top"), ("right", "bottom")),
        ("e01", ("down", "left"), ("front", "bottom")),
        ("e45", ("top", "bottom"), ("front", "top")),
        ("e56", ("top", "right"), ("right", "top")),
        ("e67", ("top", "top"), ("back", "right")),
        ("e47", ("top", "left"), ("left", "right")),
        ("e04", ("front", "left"), ("left", "bottom")),
        ("e15", ("front", "right"), ("right", "left")),
        ("e26", ("back", "top"), ("right", "right")),
        ("e37", ("back", "bottom"), ("left", "top")),
    ]
    seams = [Seam(sid, s1, s2, "1 - u") for sid, s1, s2 in edges]
    vertex_corners = {
        "v0": [("down", "c0"), ("front", "c0"), ("left", "c0")],
        "v1": [("down", "c3"), ("front", "c1"), ("right", "c0")],
        "v2": [("down", "c2"), ("back", "c3"), ("right", "c1")],
        "v3": [("down", "c1"), ("back", "c0"), ("left", "c3")],
        "v4": [("top", "c0"), ("front", "c3"), ("left", "c1")],
        "v5": [("top", "c1"), ("front", "c2"), ("right", "c3")],
        "v6": [("top", "c2"), ("back", "c2"), ("right", "c2")],
        "v7": [("top", "c3"), ("back", "c1"), ("left", "c2")],
    }
    cones = [ConePoint(vid, cyc, declared_angles=(RIGHT,) * 3)
             for vid, cyc in vertex_corners.items()]
    return GluedSurface(patches, seams, cones)


# -- doubled equilateral triangle ----------------------------------------------

# Each kite is the bilinear image of the unit square with corners
# (vertex, edge midpoint, centroid, other edge midpoint) of an equilateral
# triangle with side 1.  All six kites are congruent, so one metric serves
# them all; the coefficients are the exact dot products of the bilinear
# map's partial derivatives.
_KITE_E = "1/4 - v/4 + v^2/12"
_KITE_F = "1/8 - u/8 - v/8 + u*v/12"
_KITE_G = "1/4 - u/4 + u^2/12"


def _kite_patch(pid: str, side: float) -> MetricPatch:
    s2 = side * side
    scale = f"({s2!r})*" if side != 1.0 else ""
    return MetricPatch(pid, RectDomain(0, 1, 0, 1),
                       f"{scale}({_KITE_E})", f"{scale}({_KITE_F})",
                       f"{scale}({_KITE_G})",
                       boundary=rect_boundary(0, 1, 0, 1))


def doubled_triangle(side: float = 1.0) -> GluedSurface:
    """Double of the equilateral triangle: six flat kites, twelve seams,
    eight cone points (three of mass 4*pi/3 at the vertices, five of mass
    zero at midpoints and centroids)."""
    patches = [_kite_patch(f"{copy}{i}", side)
               for copy in ("A", "B") for i in range(3)]
    seams = []
    for copy in ("A", "B"):
        for i in range(3):
            seams.append(Seam(f"spoke-{copy}{i}",
                              (f"{copy}{i}", "right"),
                              (f"{copy}{(i + 1) % 3}", "top"), "1 - u"))
    for i in range(3):
        seams.append(Seam(f"edge-b{i}", (f"A{i}", "bottom"),
                          (f"B{i}", "bottom"), "u"))
        seams.append(Seam(f"edge-l{i}", (f"A{i}", "left"),
                          (f"B{i}", "left"), "u"))
    third = math.pi / 3
    cones = []
    for i in range(3):
        cones.append(ConePoint(f"vertex{i}",
                               [(f"A{i}", "c0"), (f"B{i}", "c0")],
                               declared_angles=(third, third)))
    for i in range(3):
        cones.append(ConePoint(
            f"mid{i}",
            [(f"A{i}", "c1"), (f"A{(i + 1) % 3}", "c3"),
             (f"B{(i + 1) % 3}", "c3"), (f"B{i}", "c1")],
            declared_angles=(RIGHT,) * 4))
    for copy in ("A", "B"):
        cones.append(ConePoint(
            f"centroid{copy}",
            [(f"{copy}0", "c2"), (f"{copy}1", "c2"), (f"{copy}2", "c2")],
            declared_angles=(2 * third,) * 3))
    return GluedSurface(patches, seams, cones)


def builtin_surfaces():
    """Name -> builder map for the CLI and the tests."""
    return {
        "doubled-square": doubled_square,
        "doubled-square-stretched": doubled_square_stretched,
        "doubled-square-subdivided": doubled_square_subdivided,
        "doubled-disc": doubled_disc,
        "doubled-disc-split": doubled_disc_split,
        "two-hemispheres": two_hemispheres,
        "disc-plus-hemisphere": disc_plus_hemisphere,
        "two-rectangles": two_rectangles_one_seam,
        "four-squares": four_squares_around_point,
        "cube": cube_surface,
        "doubled-triangle": doubled_triangle,
    }
