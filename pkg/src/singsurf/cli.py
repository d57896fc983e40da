"""Command-line front end.

Subcommands cover the full pipeline: verify (Gauss-Bonnet totality),
measure (region breakdown), quadcheck (seam quadrilateral identity),
discasym (seam-point ball-area asymptotics), spectrum (exact
eigenvalue enumeration), conjecture (averaged counting error), and
polyhedron (vertex angle defects).

Reports are byte-identical across reruns of the same inputs.  Exit
codes: 0 pass, 1 a numeric check failed, 2 validation, 3 the numeric
machinery failed, 64 usage.  Figures are opt-in through --fig-dir and
sit outside the byte-identical guarantee; the delimited output is the
primary artifact.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import report as rp
from .errors import (
    ConvergenceFailure,
    DomainError,
    FitIllConditioned,
    InsufficientRange,
    LeftDomain,
    NoConnectingGeodesic,
    OutOfValidatedRange,
    ToleranceNotMet,
    ValidationError,
)
from .measure import (
    Region,
    compute_curvature_measure,
    disc_area_asymptotics,
    polyhedron_curvature,
    quadrilateral_angle_check,
    verify_gauss_bonnet,
)
from .spectra import (
    conjecture_test,
    disc_spectrum,
    double_spectrum,
    make_double,
    rectangle_spectrum,
    triangle_spectrum,
)
from .surface_io import load_document

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_VALIDATION = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

_NUMERIC_ERRORS = (
    ToleranceNotMet,
    NoConnectingGeodesic,
    FitIllConditioned,
    ConvergenceFailure,
    OutOfValidatedRange,
    InsufficientRange,
    LeftDomain,
    DomainError,
)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _load_surface(path):
    doc = load_document(path)
    if doc.surface is None:
        raise ValidationError([("patches", "the file defines no patches")])
    return doc


def _emit(ns, command, mapping, digest=None, footer=None):
    if getattr(ns, "json", False):
        sys.stdout.write(rp.report_json(command, mapping, digest))
    else:
        sys.stdout.write(rp.render_report(command, mapping, digest, footer))


def _write_out(ns, text):
    if getattr(ns, "out", None):
        with open(ns.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fig_path(ns, name):
    if not getattr(ns, "fig_dir", None):
        return None
    os.makedirs(ns.fig_dir, exist_ok=True)
    return os.path.join(ns.fig_dir, name)


def _command_echo(ns, argv):
    return "singsurf " + " ".join(argv)


def _exit_passed(report):
    return EXIT_PASS if report.get("passed", True) else EXIT_FAIL


def cmd_verify(ns, argv):
    doc = _load_surface(ns.file)
    report = verify_gauss_bonnet(doc.surface, tol=ns.tol)
    _emit(ns, _command_echo(ns, argv), report, doc.digest)
    path = _fig_path(ns, "verify.png")
    if path:
        from .plots import gauss_bonnet_figure
        gauss_bonnet_figure(report, path)
    return _exit_passed(report)


def _parse_region(text):
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([("region", f"not valid JSON: {exc}")])
    if not isinstance(raw, dict):
        raise ValidationError([("region", "must be a JSON object")])
    unknown = set(raw) - {"patch_boxes", "seam_intervals", "cone_ids"}
    if unknown:
        raise ValidationError(
            [(f"region.{k}", "unknown field") for k in sorted(unknown)])
    try:
        boxes = [(p, tuple(box)) for p, box in raw.get("patch_boxes", [])]
        intervals = [(s, a, b) for s, a, b in raw.get("seam_intervals", [])]
    except (TypeError, ValueError):
        raise ValidationError([(
            "region",
            "patch_boxes entries are [patch, [4 bounds]] and seam_intervals "
            "entries are [seam, t0, t1]")])
    cones = raw.get("cone_ids", [])
    if not isinstance(cones, list):
        raise ValidationError([("region.cone_ids", "must be a list of ids")])
    return Region(boxes, intervals, tuple(cones)), raw


def cmd_measure(ns, argv):
    doc = _load_surface(ns.file)
    measure = compute_curvature_measure(doc.surface)
    region = None
    echo = "whole surface"
    if ns.region is not None:
        region, raw = _parse_region(ns.region)
        echo = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    report = measure.breakdown(region, tol=ns.tol)
    report["region"] = echo
    report["tolerance"] = ns.tol
    _emit(ns, _command_echo(ns, argv), report, doc.digest)
    path = _fig_path(ns, "measure.png")
    if path:
        from .plots import breakdown_figure
        breakdown_figure(report, path)
    return EXIT_PASS


def cmd_quadcheck(ns, argv):
    doc = _load_surface(ns.file)
    parts = [float(x) for x in ns.lengths.split(",")]
    lengths = parts[0] if len(parts) == 1 else tuple(parts)
    report = quadrilateral_angle_check(
        doc.surface, ns.seam, ns.tx, ns.ty, lengths=lengths, tol=ns.tol)
    _emit(ns, _command_echo(ns, argv), report, doc.digest)
    path = _fig_path(ns, "quadcheck.png")
    if path:
        from .plots import quadrilateral_figure
        quadrilateral_figure(report, path)
    return _exit_passed(report)


def cmd_discasym(ns, argv):
    doc = _load_surface(ns.file)
    report = disc_area_asymptotics(
        doc.surface, ns.seam, ns.t, rmin=ns.rmin, rmax=ns.rmax,
        samples=ns.samples)
    _emit(ns, _command_echo(ns, argv), report, doc.digest)
    rows = zip(report["radii"], report["areas_total"], report["fit_residuals"])
    csv = rp.csv_text(["r", "area", "fit_residual"], rows)
    if ns.out:
        _write_out(ns, csv)
    path = _fig_path(ns, "discasym.png")
    if path:
        from .plots import disc_asymptotics_figure
        disc_asymptotics_figure(report, path)
    return _exit_passed(report)


def _parse_size(kind, text):
    parts = text.split(",")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ValidationError([("size", "must be a number or a,b")])
    if kind == "rectangle":
        if len(nums) == 1:
            return (nums[0], nums[0])
        if len(nums) == 2:
            return (nums[0], nums[1])
        raise ValidationError([("size", "rectangle size is a or a,b")])
    if len(nums) != 1:
        raise ValidationError([("size", f"{kind} takes a single size")])
    return nums[0]


def _named_spectrum(kind, size, bc, t_max):
    if bc == "double":
        return double_spectrum(make_double(kind, size), t_max)
    if kind == "rectangle":
        return rectangle_spectrum(size[0], size[1], bc, t_max)
    if kind == "disc":
        return disc_spectrum(size, bc, t_max)
    return triangle_spectrum(kind, size, bc, t_max)


def cmd_spectrum(ns, argv):
    size = _parse_size(ns.domain, ns.size)
    eigs = _named_spectrum(ns.domain, size, ns.bc, ns.tmax)
    uniq, counts = np.unique(eigs, return_counts=True)
    csv = rp.csv_text(["eigenvalue", "multiplicity"],
                      zip(uniq, (int(c) for c in counts)))
    _write_out(ns, csv)
    path = _fig_path(ns, "spectrum.png")
    if path and eigs.size:
        from .plots import spectrum_figure
        dom = make_double(ns.domain, size)
        area = dom.double_area if ns.bc == "double" else dom.base_area
        spectrum_figure(eigs, area / (4.0 * np.pi),
                        f"{ns.domain} {ns.bc}, {eigs.size} eigenvalues", path)
    return EXIT_PASS


def cmd_conjecture(ns, argv):
    size = _parse_size(ns.domain, ns.size)
    domain = make_double(ns.domain, size)
    report = conjecture_test(domain, ns.tmax, constant_mode=ns.constant,
                             grid_points=ns.grid, seed=ns.seed)
    footer = (f"fit: c0 = {rp.format_float(report['constant_term'])}, "
              f"p = {rp.format_float(report['decay_exponent'])}")
    _emit(ns, _command_echo(ns, argv), report, footer=footer)
    if ns.out:
        diff = report["grid_counting"] - report["grid_modified"]
        rows = zip(report["grid_t"], (int(k) for k in report["grid_counting"]),
                   report["grid_modified"], diff, report["grid_average_error"])
        _write_out(ns, rp.csv_text(["t", "N", "Ntilde", "diff", "A"], rows))
    path = _fig_path(ns, "conjecture.png")
    if path:
        from .plots import conjecture_figure
        conjecture_figure(report, path)
    return EXIT_PASS


def cmd_polyhedron(ns, argv):
    doc = load_document(ns.file)
    if doc.polyhedron_vertices is None:
        raise ValidationError([("polyhedron", "the file defines no polyhedron")])
    report = polyhedron_curvature(doc.polyhedron_vertices,
                                  chi=doc.polyhedron_chi, tol=ns.tol)
    _emit(ns, _command_echo(ns, argv), report, doc.digest)
    path = _fig_path(ns, "polyhedron.png")
    if path:
        from .plots import polyhedron_figure
        polyhedron_figure(report, path)
    return _exit_passed(report)


def build_parser():
    parser = _Parser(prog="singsurf",
                     description="curvature measures on glued surfaces and "
                                 "spectra of doubled domains")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p, file_arg=True):
        if file_arg:
            p.add_argument("file", help="surface definition file")
        p.add_argument("--json", action="store_true",
                       help="emit the report as JSON")
        p.add_argument("--fig-dir", metavar="DIR",
                       help="also render figures into DIR")

    p = sub.add_parser("verify", help="check total curvature against 2*pi*chi")
    common(p)
    p.add_argument("--tol", type=float, default=1e-5)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("measure", help="curvature measure of a region")
    common(p)
    p.add_argument("--region", help="JSON region: patch_boxes, seam_intervals, cone_ids")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("quadcheck", help="seam quadrilateral angle identity")
    common(p)
    p.add_argument("--seam", required=True)
    p.add_argument("--tx", type=float, required=True)
    p.add_argument("--ty", type=float, required=True)
    p.add_argument("--lengths", default="0.1",
                   help="perpendicular lengths: h, or hx1,hy1,hx2,hy2")
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=cmd_quadcheck)

    p = sub.add_parser("discasym", help="seam-point ball-area asymptotics")
    common(p)
    p.add_argument("--seam", required=True)
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--rmin", type=float, default=0.02)
    p.add_argument("--rmax", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=8)
    p.add_argument("--out", metavar="CSV", help="write the (r, area) table here")
    p.set_defaults(func=cmd_discasym)

    p = sub.add_parser("spectrum", help="enumerate exact eigenvalues")
    common(p, file_arg=False)
    p.add_argument("--domain", required=True,
                   choices=["rectangle", "isosceles-right", "equilateral", "disc"])
    p.add_argument("--size", default="1")
    p.add_argument("--bc", required=True,
                   choices=["dirichlet", "neumann", "double"])
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--out", metavar="CSV")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("conjecture", help="averaged counting-error fit")
    common(p, file_arg=False)
    p.add_argument("--domain", required=True,
                   choices=["rectangle", "isosceles-right", "equilateral", "disc"])
    p.add_argument("--size", default="1")
    p.add_argument("--tmax", type=float, required=True)
    p.add_argument("--constant", default="paper",
                   help="paper, corner, or custom:<c>")
    p.add_argument("--grid", type=int, default=240)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", metavar="CSV")
    p.set_defaults(func=cmd_conjecture)

    p = sub.add_parser("polyhedron", help="vertex angle-defect atoms")
    common(p)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_polyhedron)

    return parser


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return ns.func(ns, argv)
    except ValidationError as exc:
        sys.stderr.write(str(exc) + "\n")
        return EXIT_VALIDATION
    except _NUMERIC_ERRORS as exc:
        sys.stderr.write(f"{type(exc).__name__}: {exc}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
