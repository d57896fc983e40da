"""Curvature as a measure on surfaces glued from smooth metric patches.

The package builds singular surfaces by identifying boundary arcs of
2-parameter metric patches, decomposes their total curvature into an
absolutely continuous part, a seam part and conical atoms, checks the
Gauss-Bonnet totality against the Euler characteristic, and studies
Laplace spectra of doubled domains (counting functions, Weyl remainders,
averaged error terms).
"""

from .errors import (
    ConvergenceFailure,
    DomainError,
    ExprSyntaxError,
    FitIllConditioned,
    InsufficientRange,
    LeftDomain,
    NoConnectingGeodesic,
    OutOfValidatedRange,
    SingSurfError,
    ToleranceNotMet,
    UnknownIdentifier,
    ValidationError,
)
from .expr import Expr, Jet2, eval_jet2, parse
from .geometry import (
    BoundaryArc,
    DiscDomain,
    MetricPatch,
    RectDomain,
    circle_boundary,
    rect_boundary,
)
from .gluing import ConePoint, GluedSurface, Seam, build_surface
from .builders import builtin_surfaces
from .measure import (
    CurvatureMeasure,
    Region,
    compute_curvature_measure,
    disc_area_asymptotics,
    length_invariance_check,
    polyhedron_curvature,
    quadrilateral_angle_check,
    verify_gauss_bonnet,
)
from .spectra import (
    DoubledDomain,
    average_error,
    bessel_j,
    bessel_j_deriv,
    bessel_zeros,
    conjecture_test,
    counting,
    disc_spectrum,
    double_spectrum,
    fd_eigenvalues,
    make_double,
    modified_constant,
    modified_counting,
    rectangle_spectrum,
    triangle_spectrum,
    weyl_ivrii_residuals,
)
from .surface_io import (
    SurfaceDocument,
    document_dict_from_surface,
    dump_document,
    load_document,
    parse_document,
)

__version__ = "0.1.0"
