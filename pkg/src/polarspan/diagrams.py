"""Crossingless surgery diagrams on a punctured disk.

A diagram of genus g is a set of circles drawn without crossings around a
subset of g aligned punctures, each circle meeting the disk boundary in a
minimal way; combinatorially it is exactly a noncrossing partition of the
circled punctures.  Blocks are stored as bitmasks (bit i is puncture i+1),
ordered by their smallest puncture.

This module parses and prints the parenthesized symbol notation, e.g.
``"(145)(23)"``, enumerates the almost-special family (all circled subsets
with all noncrossing partitions), reduces a diagram to its irreducible
core, decides the special subfamily, and supplies the closed-form counts
for all three families.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product
from typing import Iterable, Iterator


class DiagramError(ValueError):
    pass


class DiagramSyntaxError(DiagramError):
    pass


class PunctureOutOfRange(DiagramError):
    pass


class MinimalityViolation(DiagramError):
    """A puncture is circled more than once."""


class NoncrossingViolation(DiagramError):
    """Two circles would have to cross."""


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        b = mask & -mask
        out.append(b.bit_length() - 1)
        mask ^= b
    return out


def blocks_cross(x: int, y: int) -> bool:
    """True when the two disjoint blocks interleave (a < b < c < d pattern)."""
    changes = 0
    last = 0
    m = x | y
    while m:
        b = m & -m
        lab = 1 if (x & b) else 2
        if lab != last:
            changes += 1
            last = lab
        m ^= b
    return changes >= 4


@dataclass(frozen=True)
class CrossinglessDiagram:
    """A noncrossing partition of a subset of the punctures 1..genus."""

    genus: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        if self.genus < 0:
            raise DiagramError("negative genus")
        full = (1 << self.genus) - 1
        seen = 0
        prev_min = -1
        for b in self.blocks:
            if b == 0:
                raise DiagramError("empty block")
            if b & ~full:
                raise PunctureOutOfRange(f"puncture beyond genus {self.genus}")
            if b & seen:
                raise MinimalityViolation("puncture circled twice")
            seen |= b
            lo = (b & -b).bit_length() - 1
            if lo <= prev_min:
                raise DiagramError("blocks not in canonical order")
            prev_min = lo
        for i in range(len(self.blocks)):
            for j in range(i + 1, len(self.blocks)):
                if blocks_cross(self.blocks[i], self.blocks[j]):
                    raise NoncrossingViolation(
                        f"blocks {sorted(p + 1 for p in _bits(self.blocks[i]))} and "
                        f"{sorted(p + 1 for p in _bits(self.blocks[j]))} cross"
                    )

    @property
    def circled(self) -> int:
        mask = 0
        for b in self.blocks:
            mask |= b
        return mask

    def block_punctures(self) -> tuple[tuple[int, ...], ...]:
        """Blocks as 1-based puncture tuples."""
        return tuple(tuple(i + 1 for i in _bits(b)) for b in self.blocks)

    def __str__(self) -> str:
        return format_diagram(self)


def diagram(genus: int, blocks: Iterable[Iterable[int]]) -> CrossinglessDiagram:
    """Build a diagram from 1-based puncture collections, canonicalizing order."""
    masks = []
    for blk in blocks:
        m = 0
        for p in blk:
            if p < 1:
                raise PunctureOutOfRange(f"puncture {p} < 1")
            bit = 1 << (p - 1)
            if m & bit:
                raise MinimalityViolation(f"puncture {p} circled twice")
            m |= bit
        masks.append(m)
    masks.sort(key=lambda m: m & -m)
    return CrossinglessDiagram(genus, tuple(masks))


def parse_diagram(text: str, genus: int) -> CrossinglessDiagram:
    """Parse symbol notation such as ``"(145)(23)"`` or ``"(1,4,5)(2,3)"``.

    Juxtaposed digits denote separate punctures only for genus <= 9; for
    larger genus a maximal digit run is one puncture and commas separate
    punctures.  The empty string is the empty diagram.
    """
    if genus < 0:
        raise DiagramError("negative genus")
    blocks: list[list[int]] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch != "(":
            raise DiagramSyntaxError(f"expected '(' at position {i}")
        i += 1
        current: list[int] = []
        closed = False
        while i < n:
            ch = text[i]
            if ch.isspace() or ch == ",":
                i += 1
                continue
            if ch == ")":
                i += 1
                closed = True
                break
            if not ch.isdigit():
                raise DiagramSyntaxError(f"unexpected {ch!r} at position {i}")
            if genus <= 9:
                num = int(ch)
                i += 1
            else:
                j = i
                while j < n and text[j].isdigit():
                    j += 1
                num = int(text[i:j])
                i = j
            if not 1 <= num <= genus:
                raise PunctureOutOfRange(f"puncture {num} outside 1..{genus}")
            current.append(num)
        if not closed:
            raise DiagramSyntaxError("unclosed block")
        if not current:
            raise DiagramSyntaxError("empty block")
        blocks.append(current)
    return diagram(genus, blocks)


def format_diagram(d: CrossinglessDiagram) -> str:
    """Canonical symbol: juxtaposed digits for genus <= 9, commas otherwise."""
    sep = "" if d.genus <= 9 else ","
    return "".join("(" + sep.join(str(p) for p in blk) + ")" for blk in d.block_punctures())


def _noncrossing_partitions(elems: tuple[int, ...]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All noncrossing partitions of a sorted tuple (Catalan-many)."""
    if not elems:
        yield ()
        return
    x = elems[0]
    rest = elems[1:]
    for r in range(len(rest) + 1):
        for chosen in combinations(rest, r):
            block = (x,) + chosen
            # remaining elements split into independent gaps between
            # consecutive block members; a block may not span two gaps
            bounds = list(block[1:]) + [None]
            segs: list[list[int]] = [[] for _ in bounds]
            for e in rest:
                if e in chosen:
                    continue
                for t, hi in enumerate(bounds):
                    if hi is None or e < hi:
                        segs[t].append(e)
                        break
            subparts = [list(_noncrossing_partitions(tuple(s))) for s in segs]
            for combo in product(*subparts):
                out = [block]
                for part in combo:
                    out.extend(part)
                yield tuple(out)


def enumerate_almost_special(genus: int) -> tuple[CrossinglessDiagram, ...]:
    """Every diagram of the genus: all circled subsets, all noncrossing partitions."""
    if genus < 0:
        raise DiagramError("negative genus")
    out = []
    for mask in range(1 << genus):
        elems = tuple(i + 1 for i in _bits(mask))
        for part in _noncrossing_partitions(elems):
            out.append(diagram(genus, part))
    out.sort(key=format_diagram)
    return tuple(out)


@dataclass(frozen=True)
class ReductionRecord:
    """Outcome of reducing a diagram to its irreducible core.

    ``deleted`` is the mask of punctures whose singleton circles were
    removed; ``filled`` is the mask of punctures uncircled after that
    (it contains ``deleted``); ``relabeling`` lists, per core puncture,
    the original puncture it came from (1-based).
    """

    original: CrossinglessDiagram
    deleted: int
    filled: int
    core: CrossinglessDiagram
    relabeling: tuple[int, ...]

    def restore(self) -> CrossinglessDiagram:
        blocks = []
        for b in self.core.blocks:
            m = 0
            for i in _bits(b):
                m |= 1 << (self.relabeling[i] - 1)
            blocks.append(m)
        for i in _bits(self.deleted):
            blocks.append(1 << i)
        blocks.sort(key=lambda m: m & -m)
        return CrossinglessDiagram(self.original.genus, tuple(blocks))


def reduce_diagram(d: CrossinglessDiagram) -> ReductionRecord:
    """Delete singleton circles, then fill every uncircled puncture."""
    deleted = 0
    kept = []
    for b in d.blocks:
        if b.bit_count() == 1:
            deleted |= b
        else:
            kept.append(b)
    survivors_mask = 0
    for b in kept:
        survivors_mask |= b
    full = (1 << d.genus) - 1
    filled = full & ~survivors_mask
    survivors = _bits(survivors_mask)
    new_index = {old: new for new, old in enumerate(survivors)}
    core_blocks = []
    for b in kept:
        m = 0
        for i in _bits(b):
            m |= 1 << new_index[i]
        core_blocks.append(m)
    core = CrossinglessDiagram(len(survivors), tuple(core_blocks))
    relabeling = tuple(i + 1 for i in survivors)
    return ReductionRecord(d, deleted, filled, core, relabeling)


def is_irreducible(d: CrossinglessDiagram) -> bool:
    """No singleton circles and every puncture circled."""
    full = (1 << d.genus) - 1
    return d.circled == full and all(b.bit_count() >= 2 for b in d.blocks)


def _cyclic_interval(mask: int, genus: int) -> bool:
    """True when the block is consecutive in the cyclic puncture order."""
    full = (1 << genus) - 1
    if mask == full:
        return True
    transitions = 0
    for i in range(genus):
        if (mask >> i) & 1 and not (mask >> ((i + 1) % genus)) & 1:
            transitions += 1
    return transitions == 1


def _delete_leftmost_and_fill(core: CrossinglessDiagram) -> CrossinglessDiagram:
    left = core.blocks[0]
    survivors = _bits(((1 << core.genus) - 1) & ~left)
    new_index = {old: new for new, old in enumerate(survivors)}
    blocks = []
    for b in core.blocks[1:]:
        m = 0
        for i in _bits(b):
            m |= 1 << new_index[i]
        blocks.append(m)
    return CrossinglessDiagram(len(survivors), tuple(blocks))


def is_special(d: CrossinglessDiagram) -> bool:
    """Decide the special subfamily.

    The test runs on the irreducible core: the leftmost circle must be
    cyclically consecutive, a circle through punctures 1, g-1 and g must
    circle everything, and deleting the leftmost circle (filling what it
    circled) must leave a special diagram.  The empty genus-0 diagram is
    special.
    """
    core = reduce_diagram(d).core
    if core.genus == 0:
        return True
    g = core.genus
    left = core.blocks[0]
    if not _cyclic_interval(left, g):
        return False
    full = (1 << g) - 1
    wrap = 1 | (1 << (g - 1)) | (1 << (g - 2))
    if left & wrap == wrap and left != full:
        return False
    return is_special(_delete_leftmost_and_fill(core))


def enumerate_special(genus: int) -> tuple[CrossinglessDiagram, ...]:
    return tuple(d for d in enumerate_almost_special(genus) if is_special(d))


def catalan(k: int) -> int:
    if k < 0:
        raise ValueError("negative index")
    return math.comb(2 * k, k) // (k + 1)


def almost_special_count(genus: int) -> int:
    """Closed form: sum over circled subsets of Catalan numbers."""
    if genus < 0:
        raise DiagramError("negative genus")
    return sum(math.comb(genus, k) * catalan(k) for k in range(genus + 1))


def special_count(genus: int) -> int:
    """Closed form (2^g + 1)(2^(g-1) + 1)/3."""
    if genus < 0:
        raise DiagramError("negative genus")
    if genus == 0:
        return 1
    return (2**genus + 1) * (2 ** (genus - 1) + 1) // 3


def irreducible_special_count(genus: int) -> int:
    """Closed form (2^(g-1) + (-1)^g)/3, defined only for genus >= 1.

    The genus-0 value implied by the reduction bookkeeping (one empty
    diagram) does not fit this formula, so genus 0 is rejected rather
    than silently returning either convention.
    """
    if genus < 1:
        raise ValueError("irreducible count is defined for genus >= 1")
    return (2 ** (genus - 1) + (-1) ** genus) // 3


def special_count_via_reduction(genus: int) -> int:
    """Cross-check: sum over (uncircled, singleton) choices of core counts.

    Uses the genus-0 convention of a single empty core.
    """
    if genus < 0:
        raise DiagramError("negative genus")

    def m(h: int) -> int:
        return 1 if h == 0 else irreducible_special_count(h)

    total = 0
    for k in range(genus + 1):
        for l in range(genus - k + 1):
            total += math.comb(genus, k) * math.comb(genus - k, l) * m(genus - k - l)
    return total


@lru_cache(maxsize=None)
def _special_cached(genus: int) -> tuple[CrossinglessDiagram, ...]:
    return enumerate_special(genus)
