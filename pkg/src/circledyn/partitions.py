"""Consistent base-l partition hierarchies and their homeomorphism charts.

A consistent family assigns to each level k <= depth an ordered circular
partition into l^k cells, laid counterclockwise from a common basepoint in
word order, with each cell equal to the union of its children.  Families
with all cells of positive length correspond exactly to orientation
preserving PL circle homeomorphisms pulling back the standard base-l grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput
from .exact import ONE, ZERO, Arc, Word, mod1
from .plmaps import PLCircleMap


@dataclass(frozen=True)
class ConsistencyViolation:
    level: int
    word: tuple[int, ...]
    reason: str


@dataclass(frozen=True)
class ConsistentFamily:
    """Levels 1..depth of nested circular partitions.

    ``levels[k-1]`` lists the l^k cells of level k in base-l word order.
    Cells may have zero length only when ``allow_degenerate`` was set at
    construction (needed for targets with vanishing cylinder masses); such
    families validate but cannot be realized by a homeomorphism.
    """

    ell: int
    depth: int
    levels: tuple[tuple[Arc, ...], ...]
    allow_degenerate: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        ok, violation = self._validate()
        if not ok:
            raise InvalidInput(
                f"inconsistent family at level {violation.level}, "
                f"word {''.join(map(str, violation.word))}: {violation.reason}"
            )

    def _validate(self) -> tuple[bool, ConsistencyViolation | None]:
        if self.ell < 2:
            return False, ConsistencyViolation(0, (), "alphabet size must be >= 2")
        if self.depth < 1 or len(self.levels) != self.depth:
            return False, ConsistencyViolation(0, (), "level count != depth")
        if not self.levels[0]:
            return False, ConsistencyViolation(1, (), "empty level")
        base = self.levels[0][0].start
        for k in range(1, self.depth + 1):
            cells = self.levels[k - 1]
            if len(cells) != self.ell**k:
                return False, ConsistencyViolation(
                    k, (), f"expected {self.ell ** k} cells, got {len(cells)}"
                )
            total = ZERO
            for idx, cell in enumerate(cells):
                w = Word.from_value(idx, self.ell, k).digits
                if cell.length < 0:
                    return False, ConsistencyViolation(k, w, "negative length")
                if cell.length == 0 and not self.allow_degenerate:
                    return False, ConsistencyViolation(k, w, "empty cell")
                total += cell.length
            if total != ONE:
                return False, ConsistencyViolation(
                    k, (), f"cell lengths sum to {total}, not 1"
                )
            if cells[0].start != base:
                return False, ConsistencyViolation(
                    k, (0,) * k, "basepoint differs from level 1"
                )
            pos = base
            for idx, cell in enumerate(cells):
                w = Word.from_value(idx, self.ell, k).digits
                if cell.start != mod1(pos):
                    return False, ConsistencyViolation(
                        k, w, "cells not laid consecutively in word order"
                    )
                pos += cell.length
        for k in range(1, self.depth):
            parents = self.levels[k - 1]
            children = self.levels[k]
            for idx, parent in enumerate(parents):
                w = Word.from_value(idx, self.ell, k).digits
                kids = children[idx * self.ell : (idx + 1) * self.ell]
                if kids[0].start != parent.start and parent.length > 0:
                    return False, ConsistencyViolation(
                        k, w, "children do not start at parent"
                    )
                if sum((c.length for c in kids), start=ZERO) != parent.length:
                    return False, ConsistencyViolation(
                        k, w, "children lengths do not sum to parent"
                    )
        return True, None

    # -- accessors

    def cells(self, level: int) -> tuple[Arc, ...]:
        if not 1 <= level <= self.depth:
            raise InvalidInput(f"level {level} outside 1..{self.depth}")
        return self.levels[level - 1]

    def cell(self, word: Word | tuple[int, ...]) -> Arc:
        digits = word.digits if isinstance(word, Word) else tuple(word)
        level = len(digits)
        idx = 0
        for d in digits:
            idx = idx * self.ell + d
        return self.cells(level)[idx]

    def cell_measure(self, word: Word | tuple[int, ...]) -> Fraction:
        return self.cell(word).length

    @property
    def is_degenerate(self) -> bool:
        return any(
            c.length == 0 for level in self.levels for c in level
        )

    @property
    def basepoint(self) -> Fraction:
        return self.levels[0][0].start


def family_from_homeo(h: PLCircleMap, ell: int, depth: int) -> ConsistentFamily:
    """Pull the standard base-l grid back through an orientation-preserving homeo."""
    if not h.orientation_preserving:
        raise InvalidInput("family requires an orientation-preserving homeomorphism")
    if depth < 1:
        raise InvalidInput("depth must be >= 1")
    g = h.invert()
    levels = []
    for k in range(1, depth + 1):
        count = ell**k
        lifts = [g.lift_evaluate(Fraction(i, count)) for i in range(count + 1)]
        cells = tuple(
            Arc(mod1(lifts[i]), lifts[i + 1] - lifts[i]) for i in range(count)
        )
        levels.append(cells)
    return ConsistentFamily(ell, depth, tuple(levels))


def homeo_from_family(fam: ConsistentFamily) -> PLCircleMap:
    """The PL homeomorphism affine on deepest cells sending each cell to its grid interval."""
    if fam.is_degenerate:
        raise InvalidInput(
            "family has empty cells; no homeomorphism realizes it"
        )
    deepest = fam.cells(fam.depth)
    count = len(deepest)
    scale = Fraction(1, count)
    pos = fam.basepoint
    points = []
    for idx, cell in enumerate(deepest):
        points.append((pos, idx * scale))
        pos += cell.length
    points.append((pos, ONE))
    return PLCircleMap.from_lift_points(points)


def consistency_check(
    fam_or_parts: ConsistentFamily | tuple[int, int, Sequence[Sequence[Arc]]],
) -> tuple[bool, ConsistencyViolation | None]:
    """Validate a family (or raw parts) and report the first violation."""
    if isinstance(fam_or_parts, ConsistentFamily):
        return fam_or_parts._validate()
    ell, depth, levels = fam_or_parts
    probe = object.__new__(ConsistentFamily)
    object.__setattr__(probe, "ell", ell)
    object.__setattr__(probe, "depth", depth)
    object.__setattr__(probe, "levels", tuple(tuple(lv) for lv in levels))
    object.__setattr__(probe, "allow_degenerate", True)
    return probe._validate()
