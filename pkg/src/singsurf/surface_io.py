"""Reading and writing surface-definition files.

A surface file is a strict JSON document, format tag "singsurf/1".
Patches carry a parameter domain, metric coefficient expressions in u
and v, and optionally a named counterclockwise boundary decomposition;
seams identify boundary arcs through a reparametrization phi; cone
points list the corner cycle meeting at each interior junction.  A
document may instead (or additionally) carry a polyhedron section of
vertex face-angle lists.

Validation is strict: unknown fields anywhere are rejected, and every
complaint carries the JSON path of the offending field.  Curve and phi
expressions may use either u or t for their single parameter.
"""

import hashlib
import json
import math
import re

from .errors import ExprSyntaxError, UnknownIdentifier, ValidationError
from .expr import parse
from .geometry import (
    BoundaryArc,
    DiscDomain,
    MetricPatch,
    RectDomain,
    circle_boundary,
    rect_boundary,
)
from .gluing import ConePoint, GluedSurface, Seam

__all__ = [
    "FORMAT",
    "SurfaceDocument",
    "parse_document",
    "load_document",
    "document_dict_from_surface",
    "dump_document",
]

FORMAT = "singsurf/1"

_PARAM_ALIAS = re.compile(r"\bt\b")


class SurfaceDocument:
    """Parsed surface file: a built surface, a polyhedron, or both."""

    def __init__(self, surface, polyhedron_vertices, polyhedron_chi, digest):
        self.surface = surface
        self.polyhedron_vertices = polyhedron_vertices
        self.polyhedron_chi = polyhedron_chi
        self.digest = digest


def _check_keys(obj, path, required, optional, out):
    ok = True
    for key in required:
        if key not in obj:
            out.append((path, f"missing required field '{key}'"))
            ok = False
    for key in obj:
        if key not in required and key not in optional:
            out.append((f"{path}.{key}", "unknown field"))
            ok = False
    return ok


def _as_str(obj, key, path, out):
    val = obj.get(key)
    if not isinstance(val, str) or not val:
        out.append((f"{path}.{key}", "must be a nonempty string"))
        return None
    return val


def _as_number(val, path, out):
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        out.append((path, "must be a number"))
        return None
    x = float(val)
    if not math.isfinite(x):
        out.append((path, "must be finite"))
        return None
    return x


def _parse_expr(src, path, out, param_only=False):
    if not isinstance(src, str) or not src:
        out.append((path, "must be an expression string"))
        return None
    text = _PARAM_ALIAS.sub("u", src) if param_only else src
    try:
        expr = parse(text)
    except (ExprSyntaxError, UnknownIdentifier) as exc:
        out.append((path, str(exc)))
        return None
    if param_only and expr.variables() - {"u"}:
        out.append((path, "may depend on the arc parameter only"))
        return None
    return expr


def _parse_domain(obj, path, out):
    if not isinstance(obj, dict):
        out.append((path, "must be an object"))
        return None
    if not _check_keys(obj, path, ("type",), ("bounds",), out):
        return None
    kind = obj.get("type")
    if kind == "disc":
        if "bounds" in obj:
            out.append((f"{path}.bounds", "the disc domain is the unit disc "
                        "and takes no bounds"))
            return None
        return DiscDomain()
    if kind != "rect":
        out.append((f"{path}.type", "must be 'rect' or 'disc'"))
        return None
    bounds = obj.get("bounds")
    if not isinstance(bounds, list) or len(bounds) != 4:
        out.append((f"{path}.bounds", "must be [u0, u1, v0, v1]"))
        return None
    nums = [_as_number(b, f"{path}.bounds[{i}]", out) for i, b in enumerate(bounds)]
    if any(n is None for n in nums):
        return None
    if not (nums[0] < nums[1] and nums[2] < nums[3]):
        out.append((f"{path}.bounds", "bounds must increase"))
        return None
    return RectDomain(*nums)


def _parse_arc(obj, path, out):
    if not isinstance(obj, dict):
        out.append((path, "must be an object"))
        return None
    if not _check_keys(obj, path, ("id", "curve"), ("corners",), out):
        return None
    arc_id = _as_str(obj, "id", path, out)
    curve = obj.get("curve")
    if not isinstance(curve, dict) or not _check_keys(
            curve, f"{path}.curve", ("u", "v"), (), out):
        return None
    x = _parse_expr(curve.get("u"), f"{path}.curve.u", out, param_only=True)
    y = _parse_expr(curve.get("v"), f"{path}.curve.v", out, param_only=True)
    corners = obj.get("corners", [])
    if not isinstance(corners, list) or len(corners) not in (0, 2) or any(
            not isinstance(c, str) or not c for c in corners):
        out.append((f"{path}.corners",
                    "must be [] for a closed arc or [start, end] corner names"))
        return None
    if arc_id is None or x is None or y is None:
        return None
    if corners:
        return BoundaryArc(arc_id, x, y, corners[0], corners[1])
    return BoundaryArc(arc_id, x, y)


def _parse_patch(obj, path, out):
    if not isinstance(obj, dict):
        out.append((path, "must be an object"))
        return None
    if not _check_keys(obj, path, ("id", "domain", "metric"),
                       ("chi", "boundary"), out):
        return None
    pid = _as_str(obj, "id", path, out)
    domain = _parse_domain(obj.get("domain"), f"{path}.domain", out)
    metric = obj.get("metric")
    coeffs = {}
    if not isinstance(metric, dict) or not _check_keys(
            metric, f"{path}.metric", ("E", "F", "G"), (), out):
        return None
    for name in ("E", "F", "G"):
        coeffs[name] = _parse_expr(metric.get(name), f"{path}.metric.{name}", out)
    chi = obj.get("chi", 1)
    if isinstance(chi, bool) or not isinstance(chi, int):
        out.append((f"{path}.chi", "must be an integer"))
        return None
    arcs = None
    if "boundary" in obj:
        if not isinstance(obj["boundary"], list):
            out.append((f"{path}.boundary", "must be a list of arcs"))
            return None
        arcs = [_parse_arc(a, f"{path}.boundary[{i}]", out)
                for i, a in enumerate(obj["boundary"])]
        if any(a is None for a in arcs):
            return None
    if pid is None or domain is None or any(c is None for c in coeffs.values()):
        return None
    if arcs is None:
        arcs = (rect_boundary(domain.u0, domain.u1, domain.v0, domain.v1)
                if domain.kind == "rect" else circle_boundary())
    try:
        return MetricPatch(pid, domain, coeffs["E"], coeffs["F"], coeffs["G"],
                           boundary=arcs, chi=chi)
    except ValidationError as exc:
        prefix = f"patch '{pid}'"
        for sub_path, msg in exc.violations:
            if sub_path.startswith(prefix):
                sub_path = sub_path[len(prefix):].lstrip(".")
            out.append((f"{path}.{sub_path}" if sub_path else path, msg))
        return None


def _parse_side(val, path, out):
    if (not isinstance(val, list) or len(val) != 2
            or any(not isinstance(s, str) or not s for s in val)):
        out.append((path, "must be [patch id, arc id]"))
        return None
    return (val[0], val[1])


def _parse_seam(obj, path, out):
    if not isinstance(obj, dict):
        out.append((path, "must be an object"))
        return None
    if not _check_keys(obj, path, ("id", "side1", "side2", "phi"),
                       ("orientation",), out):
        return None
    sid = _as_str(obj, "id", path, out)
    side1 = _parse_side(obj.get("side1"), f"{path}.side1", out)
    side2 = _parse_side(obj.get("side2"), f"{path}.side2", out)
    phi = _parse_expr(obj.get("phi"), f"{path}.phi", out, param_only=True)
    orientation = obj.get("orientation")
    if orientation is not None and orientation not in ("forward", "reversed"):
        out.append((f"{path}.orientation", "must be 'forward' or 'reversed'"))
        return None
    if None in (sid, side1, side2, phi):
        return None
    return Seam(sid, side1, side2, phi), orientation


def _parse_cone(obj, path, out):
    if not isinstance(obj, dict):
        out.append((path, "must be an object"))
        return None
    if not _check_keys(obj, path, ("id", "cycle"), (), out):
        return None
    cid = _as_str(obj, "id", path, out)
    cycle = obj.get("cycle")
    if not isinstance(cycle, list) or not cycle:
        out.append((f"{path}.cycle", "must be a nonempty list"))
        return None
    stops = []
    thetas = []
    for i, entry in enumerate(cycle):
        epath = f"{path}.cycle[{i}]"
        if not isinstance(entry, dict) or not _check_keys(
                entry, epath, ("patch", "corner"), ("theta",), out):
            return None
        patch = _as_str(entry, "patch", epath, out)
        corner = _as_str(entry, "corner", epath, out)
        if patch is None or corner is None:
            return None
        stops.append((patch, corner))
        if "theta" in entry:
            theta = _as_number(entry["theta"], f"{epath}.theta", out)
            if theta is None:
                return None
            thetas.append(theta)
    if thetas and len(thetas) != len(stops):
        out.append((f"{path}.cycle",
                    "either every stop declares theta or none does"))
        return None
    if cid is None:
        return None
    return ConePoint(cid, stops, tuple(thetas) if thetas else None)


def _parse_polyhedron(obj, path, out):
    if not isinstance(obj, dict):
        out.append((path, "must be an object"))
        return None
    if not _check_keys(obj, path, ("vertices",), ("chi",), out):
        return None
    chi = obj.get("chi", 2)
    if isinstance(chi, bool) or not isinstance(chi, int):
        out.append((f"{path}.chi", "must be an integer"))
        return None
    verts = obj.get("vertices")
    if not isinstance(verts, list) or not verts:
        out.append((f"{path}.vertices", "must be a nonempty list"))
        return None
    table = {}
    for i, entry in enumerate(verts):
        vpath = f"{path}.vertices[{i}]"
        if not isinstance(entry, dict) or not _check_keys(
                entry, vpath, ("id", "angles"), (), out):
            return None
        vid = _as_str(entry, "id", vpath, out)
        angles = entry.get("angles")
        if not isinstance(angles, list) or not angles:
            out.append((f"{vpath}.angles", "must be a nonempty list of radians"))
            return None
        vals = [_as_number(a, f"{vpath}.angles[{j}]", out)
                for j, a in enumerate(angles)]
        if vid is None or any(a is None for a in vals):
            return None
        if vid in table:
            out.append((f"{vpath}.id", f"duplicate vertex '{vid}'"))
            return None
        table[vid] = tuple(vals)
    return table, chi


def parse_document(text, digest=None):
    """Parse and build a surface document from JSON text.

    Raises ValidationError carrying (path, message) pairs for every
    schema problem found; semantic problems discovered while gluing
    (metric positivity, seam fit, cone cycles) surface through the same
    exception type with patch- and seam-level paths.
    """
    if digest is None:
        digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([("file", f"not valid JSON: {exc}")])
    out = []
    if not isinstance(doc, dict):
        raise ValidationError([("file", "top level must be a JSON object")])
    _check_keys(doc, "file",
                ("format",), ("patches", "seams", "cone_points", "polyhedron"),
                out)
    if doc.get("format") != FORMAT and "format" in doc:
        out.append(("format", f"expected format {FORMAT!r}"))
    if out:
        raise ValidationError(out)

    patches = []
    for i, entry in enumerate(doc.get("patches", [])):
        patch = _parse_patch(entry, f"patches[{i}]", out)
        if patch is not None:
            patches.append(patch)
    seams = []
    orientations = []
    for i, entry in enumerate(doc.get("seams", [])):
        parsed = _parse_seam(entry, f"seams[{i}]", out)
        if parsed is not None:
            seams.append(parsed[0])
            orientations.append((i, parsed[1]))
    cones = []
    for i, entry in enumerate(doc.get("cone_points", [])):
        cone = _parse_cone(entry, f"cone_points[{i}]", out)
        if cone is not None:
            cones.append(cone)
    poly = None
    poly_chi = 2
    if "polyhedron" in doc:
        parsed = _parse_polyhedron(doc["polyhedron"], "polyhedron", out)
        if parsed is not None:
            poly, poly_chi = parsed
    if out:
        raise ValidationError(out)

    surface = None
    if patches:
        surface = GluedSurface(patches, seams, cones)
        for i, orientation in orientations:
            if orientation is None:
                continue
            seam = seams[i]
            actual = "forward" if seam.increasing else "reversed"
            if orientation != actual:
                raise ValidationError([(
                    f"seams[{i}].orientation",
                    f"declares '{orientation}' but phi is {actual}")])
    elif seams or cones:
        raise ValidationError([("patches", "seams and cone points need patches")])
    return SurfaceDocument(surface, poly, poly_chi, digest)


def load_document(path):
    """Read a surface file from disk; the digest is over the raw bytes."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ValidationError([("file", f"cannot read {path}: {exc.strerror}")])
    digest = hashlib.sha256(raw).hexdigest()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ValidationError([("file", f"not UTF-8: {exc}")])
    return parse_document(text, digest=digest)


def _domain_dict(domain):
    if domain.kind == "rect":
        return {"type": "rect",
                "bounds": [domain.u0, domain.u1, domain.v0, domain.v1]}
    return {"type": "disc"}


def _is_default_boundary(patch):
    if patch.domain.kind == "rect":
        d = patch.domain
        default = rect_boundary(d.u0, d.u1, d.v0, d.v1)
    else:
        default = circle_boundary()
    if len(patch.boundary) != len(default):
        return False
    return all(a.arc_id == b.arc_id
               and a.x == b.x and a.y == b.y
               and a.corner_start == b.corner_start
               and a.corner_end == b.corner_end
               for a, b in zip(patch.boundary, default))


def document_dict_from_surface(surface):
    """Serialize a built surface back to the file schema."""
    patches = []
    for patch in surface.patches:
        entry = {
            "id": patch.patch_id,
            "domain": _domain_dict(patch.domain),
            "metric": {"E": patch.E.to_source(),
                       "F": patch.F.to_source(),
                       "G": patch.G.to_source()},
        }
        if patch.chi != 1:
            entry["chi"] = patch.chi
        if not _is_default_boundary(patch):
            arcs = []
            for arc in patch.boundary:
                ae = {"id": arc.arc_id,
                      "curve": {"u": arc.x.to_source(), "v": arc.y.to_source()}}
                if arc.corner_start is not None:
                    ae["corners"] = [arc.corner_start, arc.corner_end]
                arcs.append(ae)
            entry["boundary"] = arcs
        patches.append(entry)
    seams = [{
        "id": seam.seam_id,
        "side1": list(seam.side1),
        "side2": list(seam.side2),
        "phi": seam.phi.to_source(),
        "orientation": "forward" if seam.increasing else "reversed",
    } for seam in surface.seams]
    cones = []
    for cone in surface.cone_points:
        cycle = []
        for i, (p, c) in enumerate(cone.cycle):
            stop = {"patch": p, "corner": c}
            if cone.declared_angles is not None:
                stop["theta"] = cone.declared_angles[i]
            cycle.append(stop)
        cones.append({"id": cone.cone_id, "cycle": cycle})
    doc = {"format": FORMAT, "patches": patches, "seams": seams}
    if cones:
        doc["cone_points"] = cones
    return doc


def dump_document(doc_dict):
    """Render a document dict as stable, human-diffable JSON text."""
    return json.dumps(doc_dict, indent=2) + "\n"
