from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarspan import diagrams
from polarspan.diagrams import (
    CrossinglessDiagram,
    DiagramError,
    MinimalityViolation,
    NoncrossingViolation,
    PunctureOutOfRange,
    blocks_cross,
    catalan,
    diagram,
    enumerate_almost_special,
    enumerate_special,
    format_diagram,
    is_irreducible,
    is_special,
    parse_diagram,
    reduce_diagram,
)

N_TABLE = [1, 2, 5, 15, 51, 188, 731, 2950]
SMALL_N_TABLE = [1, 2, 5, 15, 51, 187, 715, 2795]


def brute_cross(x: int, y: int) -> bool:
    # chords of a disk with marked boundary points: two blocks cross iff
    # some pair from one separates some pair from the other on the line
    xs, ys = diagrams._bits(x), diagrams._bits(y)
    for a, b in itertools.combinations(xs, 2):
        for c, d in itertools.combinations(ys, 2):
            if a < c < b < d or c < a < d < b:
                return True
    return False


@given(st.integers(0, 1023), st.integers(0, 1023))
@settings(max_examples=400)
def test_blocks_cross_matches_brute_force(x, y):
    y &= ~x  # predicate is only defined for disjoint blocks
    assert blocks_cross(x, y) == brute_cross(x, y)


def test_parse_format_roundtrip():
    for text in ["", "(1)", "(12)", "(145)(23)"]:
        d = parse_diagram(text, 9)
        assert parse_diagram(format_diagram(d), 9) == d
    # digit runs are one puncture above genus 9, commas separate
    d = parse_diagram("(1,10)(2,3)", 10)
    assert d.block_punctures() == ((1, 10), (2, 3))
    assert parse_diagram(format_diagram(d), 10) == d


def test_parse_rejects_malformed():
    with pytest.raises(DiagramError):
        parse_diagram("(12", 3)
    with pytest.raises(PunctureOutOfRange):
        parse_diagram("(14)", 3)
    with pytest.raises(MinimalityViolation):
        parse_diagram("(12)(13)", 3)
    with pytest.raises(NoncrossingViolation):
        parse_diagram("(13)(24)", 4)


def test_diagram_builder_canonicalizes_block_order():
    d = diagram(5, [(4, 5), (1, 2)])
    assert d == parse_diagram("(12)(45)", 5)


def brute_almost_special(g: int) -> set[CrossinglessDiagram]:
    """All noncrossing partitions of all subsets, assembled by brute force."""
    out = set()
    punctures = range(1, g + 1)
    for r in range(g + 1):
        for subset in itertools.combinations(punctures, r):
            for part in set_partitions(subset):
                try:
                    out.add(diagram(g, part))
                except NoncrossingViolation:
                    pass
    return out


def set_partitions(elems):
    elems = list(elems)
    if not elems:
        yield []
        return
    head, rest = elems[0], elems[1:]
    for sub in set_partitions(rest):
        yield [[head]] + [list(b) for b in sub]
        for i in range(len(sub)):
            clone = [list(b) for b in sub]
            clone[i].append(head)
            yield clone


@pytest.mark.parametrize("g", range(0, 5))
def test_enumeration_matches_brute_force_sets(g):
    got = set(enumerate_almost_special(g))
    assert got == brute_almost_special(g)


@pytest.mark.parametrize("g", range(0, 9))
def test_counts_match_closed_forms(g):
    want_n = sum(
        catalan(k) * len(list(itertools.combinations(range(g), k)))
        for k in range(g + 1)
    )
    assert diagrams.almost_special_count(g) == want_n
    assert len(enumerate_almost_special(g)) == want_n
    assert diagrams.special_count(g) == (2**g + 1) * (2 ** (g - 1) + 1) // 3 if g else True
    assert len(enumerate_special(g)) == diagrams.special_count(g)
    if g < len(N_TABLE):
        assert diagrams.almost_special_count(g) == N_TABLE[g]
        assert diagrams.special_count(g) == SMALL_N_TABLE[g]


@pytest.mark.parametrize("g", range(1, 9))
def test_irreducible_count_formula_and_recursion(g):
    m = diagrams.irreducible_special_count
    assert m(g) == (2 ** (g - 1) + (-1) ** g) // 3
    if g >= 3:
        assert m(g) == m(g - 1) + 2 * m(g - 2)
    got = sum(1 for d in enumerate_special(g) if is_irreducible(d))
    assert got == m(g)


@pytest.mark.parametrize("g", range(0, 7))
def test_special_subsets_and_reduction_cross_check(g):
    alm = enumerate_almost_special(g)
    specials = enumerate_special(g)
    assert set(specials) <= set(alm)
    assert all(is_special(d) for d in specials)
    assert not any(is_special(d) for d in set(alm) - set(specials))
    assert diagrams.special_count_via_reduction(g) == len(specials)


def test_known_redundant_diagrams():
    # the two smallest almost-special diagrams that fail specialness
    d5 = parse_diagram("(145)(23)", 5)
    assert not is_special(d5)
    assert set(enumerate_almost_special(5)) - set(enumerate_special(5)) == {d5}
    d6 = parse_diagram("(14)(23)(56)", 6)
    assert not is_special(d6)
    assert d6 in set(enumerate_almost_special(6)) - set(enumerate_special(6))


@pytest.mark.parametrize("g", range(0, 6))
def test_reduction_restores_original(g):
    for d in enumerate_almost_special(g):
        rec = reduce_diagram(d)
        assert rec.restore() == d
        assert is_irreducible(rec.core) or rec.core.blocks == ()
