"""First homology of a surgered handlebody, over GF(2).

A crossingless diagram of genus g describes zero-framed surgery on a
handlebody whose boundary surface has the standard basis a_1..a_g,
b_1..b_g.  The boundary map sends a_i to the i-th puncture loop and b_i
to the meridian of the circle around puncture i (or to zero when i is
uncircled); each circle imposes one relation, the sum of the puncture
loops it encloses.  The kernel of the induced map on the surface is
always Lagrangian, which is what ties diagrams to points of the dual
polar space.
"""

from __future__ import annotations

from dataclasses import dataclass

from .diagrams import CrossinglessDiagram, _bits
from .gf2 import BitMatrix, kernel_ints, rref_ints, transpose_ints
from .polar import Lagrangian


class InternalInvariantViolation(AssertionError):
    """The kernel of a surgery presentation failed to be Lagrangian."""


@dataclass(frozen=True)
class SurgeryPresentation:
    """Boundary map and relations of the surgered handlebody.

    ``boundary`` is 2g x (g + r) over GF(2): row i is the image of a_i
    (the puncture loop gamma_i), row g + i the image of b_i (a meridian
    column, or zero).  ``relations`` has one row per circle: the sum of
    the gamma columns of the punctures it encloses, with zero meridian
    coefficient because the framing is zero.
    """

    genus: int
    blocks: tuple[int, ...]
    boundary: BitMatrix
    relations: BitMatrix


def presentation(d: CrossinglessDiagram) -> SurgeryPresentation:
    g = d.genus
    r = len(d.blocks)
    t = g + r
    rows = [1 << i for i in range(g)]
    meridian_of = {}
    for j, b in enumerate(d.blocks):
        for i in _bits(b):
            meridian_of[i] = j
    for i in range(g):
        j = meridian_of.get(i)
        rows.append(0 if j is None else 1 << (g + j))
    relations = tuple(b for b in d.blocks)
    return SurgeryPresentation(
        g, d.blocks, BitMatrix(t, tuple(rows)), BitMatrix(t, relations)
    )


@dataclass(frozen=True)
class WeightedLagrangian:
    """A point of the dual polar space carrying a sign weight (-2)^k."""

    weight: int
    point: Lagrangian

    def __post_init__(self):
        w = abs(self.weight)
        if w == 0 or w & (w - 1):
            raise ValueError("weight must be +-(a power of two)")


def lagrangian_of(d: CrossinglessDiagram) -> WeightedLagrangian:
    """Kernel of the surface map into the surgered homology.

    Computed from the presentation: v lies in the kernel iff v times the
    boundary matrix is a combination of the relation rows.  Handlebodies
    have no second homology, so the weight is always +1 here.
    """
    pres = presentation(d)
    g = d.genus
    stack = list(pres.boundary.rows) + list(pres.relations.rows)
    cols = transpose_ints(stack, pres.boundary.cols)
    ker = kernel_ints(cols, len(stack))
    mask = (1 << (2 * g)) - 1
    proj = [v & mask for v in ker]
    red, _ = rref_ints(proj, 2 * g)
    if len(red) != g:
        raise InternalInvariantViolation(
            f"kernel of {d} has dimension {len(red)}, expected {g}"
        )
    try:
        point = Lagrangian(g, BitMatrix(2 * g, tuple(red)))
    except ValueError as exc:
        raise InternalInvariantViolation(f"kernel of {d} is not Lagrangian") from exc
    return WeightedLagrangian(1, point)


def lagrangian_closed_form(d: CrossinglessDiagram) -> Lagrangian:
    """Direct spanning set, always cross-checkable against lagrangian_of.

    Uncircled punctures contribute b_i, every circle contributes the sum
    of its a_i, and consecutive punctures of a circle contribute
    b_i + b_i'.
    """
    g = d.genus
    rows = []
    circled = d.circled
    for i in range(g):
        if not (circled >> i) & 1:
            rows.append(1 << (g + i))
    for b in d.blocks:
        rows.append(b)
        members = _bits(b)
        for i, j in zip(members, members[1:]):
            rows.append((1 << (g + i)) | (1 << (g + j)))
    red, _ = rref_ints(rows, 2 * g)
    return Lagrangian(g, BitMatrix(2 * g, tuple(red)))


def weight_triangle_identity(na: int, nb: int, nc: int) -> bool:
    """Whether (-2)^na + (-2)^nb + (-2)^nc = 0 in exact integers."""
    for n in (na, nb, nc):
        if n < 0:
            raise ValueError("ranks must be nonnegative")
    return (-2) ** na + (-2) ** nb + (-2) ** nc == 0
