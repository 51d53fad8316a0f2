from __future__ import annotations

import itertools

import pytest

from polarspan import diagrams, gf2, homology
from polarspan.diagrams import enumerate_almost_special, parse_diagram
from polarspan.homology import (
    lagrangian_closed_form,
    lagrangian_of,
    presentation,
    weight_triangle_identity,
)


def span_set(rows) -> frozenset[int]:
    span = {0}
    for r in rows:
        span |= {s ^ r for s in span}
    return frozenset(span)


def brute_kernel_vectors(d) -> frozenset[int]:
    """The kernel of H1(surface) -> H1(surgered handlebody), re-derived.

    Build the boundary images from scratch: a_i maps to the puncture
    loop gamma_i, b_i to the meridian of the circle around puncture i
    (zero when uncircled), and each circle relates the sum of its
    gammas.  v is in the kernel iff its image falls in the relation
    span.  Everything here is set arithmetic; no shared elimination
    code.
    """
    g = d.genus
    blocks = d.block_punctures()
    r = len(blocks)
    image = {}
    for i in range(1, g + 1):
        image[i - 1] = 1 << (i - 1)  # a_i -> gamma_i
        owner = next((j for j, blk in enumerate(blocks) if i in blk), None)
        image[g + i - 1] = 0 if owner is None else 1 << (g + owner)
    relation_rows = [
        sum(1 << (p - 1) for p in blk) for blk in blocks
    ]
    rel_span = span_set(relation_rows)
    kernel = set()
    for v in range(1 << (2 * g)):
        img = 0
        for bit in range(2 * g):
            if (v >> bit) & 1:
                img ^= image[bit]
        if img in rel_span:
            kernel.add(v)
    return frozenset(kernel)


@pytest.mark.parametrize("g", range(0, 4))
def test_kernel_matches_brute_force(g):
    for d in enumerate_almost_special(g):
        wl = lagrangian_of(d)
        assert span_set(wl.point.basis.rows) == brute_kernel_vectors(d)


@pytest.mark.parametrize("g", range(0, 7))
def test_closed_form_equals_presentation_kernel(g):
    for d in enumerate_almost_special(g):
        wl = lagrangian_of(d)
        assert wl.point == lagrangian_closed_form(d)
        assert wl.weight == 1


@pytest.mark.parametrize("g", range(1, 6))
def test_images_are_lagrangian(g):
    for d in enumerate_almost_special(g):
        p = lagrangian_of(d).point
        rows = p.basis.rows
        assert len(rows) == g
        for u, v in itertools.combinations(rows, 2):
            assert gf2.pairing_ints(u, v, g) == 0


@pytest.mark.parametrize("g", range(0, 6))
def test_mu_injective_on_special_diagrams(g):
    specials = diagrams.enumerate_special(g)
    images = {lagrangian_of(d).point for d in specials}
    assert len(images) == len(specials)


def test_presentation_shape():
    d = parse_diagram("(145)(23)", 5)
    pres = presentation(d)
    assert pres.boundary.nrows == 10
    assert pres.boundary.cols == 5 + 2
    assert pres.relations.nrows == 2
    # each relation row is the puncture mask of its block
    assert set(pres.relations.rows) == {b for b in d.blocks}


def test_known_image():
    # uncircled punctures keep their b row; the circle of (23) spans
    # a2+a3 and b2+b3
    d = parse_diagram("(23)", 3)
    p = lagrangian_of(d).point
    vectors = span_set(p.basis.rows)
    g = 3
    assert (1 << (g + 0)) in vectors  # b1
    assert (1 << 1 | 1 << 2) in vectors  # a2 + a3
    assert (1 << (g + 1) | 1 << (g + 2)) in vectors  # b2 + b3
    assert (1 << 0) not in vectors  # a1 survives in the quotient


def test_weight_identity_examples():
    assert weight_triangle_identity(1, 1, 2)
    assert weight_triangle_identity(2, 1, 1)
    assert not weight_triangle_identity(1, 2, 3)
    assert not weight_triangle_identity(0, 0, 0)
    with pytest.raises(ValueError):
        weight_triangle_identity(-1, 0, 0)
