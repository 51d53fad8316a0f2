"""Crossingless diagrams, dual polar spaces over GF(2), and the integer
lattice cut out by their isotropic lines.

The package enumerates almost-special and special genus-g diagrams,
maps each one to a Lagrangian subspace of GF(2)^{2g} through the
homology of its surgered handlebody, and studies the free abelian
group generated by all Lagrangian points modulo the rank-three line
relations.  Everything is exact: GF(2) rows are packed integers and
lattice arithmetic stays over Z.
"""

from .diagrams import (
    CrossinglessDiagram,
    DiagramError,
    DiagramSyntaxError,
    MinimalityViolation,
    NoncrossingViolation,
    PunctureOutOfRange,
    ReductionRecord,
    almost_special_count,
    diagram,
    enumerate_almost_special,
    enumerate_special,
    format_diagram,
    irreducible_special_count,
    is_irreducible,
    is_special,
    parse_diagram,
    reduce_diagram,
    special_count,
)
from .gf2 import BitMatrix, BitVec, kernel, rref, symplectic_pairing
from .homology import (
    InternalInvariantViolation,
    SurgeryPresentation,
    WeightedLagrangian,
    lagrangian_closed_form,
    lagrangian_of,
    presentation,
    weight_triangle_identity,
)
from .lattice import (
    BasisNotVerified,
    LatticePresentation,
    NotInSpan,
    SpanCoordinates,
    TorsionPresent,
    build_lattice,
    coordinates,
    express,
    smith_normal_form,
    span_coordinates,
    span_obstruction,
    special_basis_points,
    verify_basis,
)
from .polar import (
    DualPolarSpace,
    IsotropicLine,
    Lagrangian,
    NotCollinear,
    ResourceLimitExceeded,
    enumerate_lagrangians,
    enumerate_lines,
    geometric_closure,
    lagrangian_count,
    line_count,
    third_point,
)
from .report import SCHEMA_VERSION, SchemaVersionError, parse_report, report_schema_version

__version__ = "0.1.0"

__all__ = [
    "BasisNotVerified",
    "BitMatrix",
    "BitVec",
    "CrossinglessDiagram",
    "DiagramError",
    "DiagramSyntaxError",
    "DualPolarSpace",
    "InternalInvariantViolation",
    "IsotropicLine",
    "Lagrangian",
    "LatticePresentation",
    "MinimalityViolation",
    "NoncrossingViolation",
    "NotCollinear",
    "PunctureOutOfRange",
    "ReductionRecord",
    "ResourceLimitExceeded",
    "SCHEMA_VERSION",
    "SchemaVersionError",
    "NotInSpan",
    "SpanCoordinates",
    "SurgeryPresentation",
    "TorsionPresent",
    "WeightedLagrangian",
    "almost_special_count",
    "build_lattice",
    "coordinates",
    "diagram",
    "enumerate_almost_special",
    "enumerate_lagrangians",
    "enumerate_lines",
    "enumerate_special",
    "express",
    "format_diagram",
    "geometric_closure",
    "irreducible_special_count",
    "is_irreducible",
    "is_special",
    "kernel",
    "lagrangian_closed_form",
    "lagrangian_count",
    "lagrangian_of",
    "line_count",
    "parse_diagram",
    "parse_report",
    "presentation",
    "reduce_diagram",
    "report_schema_version",
    "rref",
    "smith_normal_form",
    "span_coordinates",
    "span_obstruction",
    "special_basis_points",
    "special_count",
    "symplectic_pairing",
    "third_point",
    "verify_basis",
    "weight_triangle_identity",
    "__version__",
]
