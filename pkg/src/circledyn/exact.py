"""Exact substrate: rational circle points, arcs, base-l words, interval sets.

Everything here is arbitrary-precision rational arithmetic via
``fractions.Fraction``.  Circle points are Fractions normalized into [0, 1);
arcs are half-open ``[start, start+length)`` taken mod 1.  No floats anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def mod1(x: Fraction) -> Fraction:
    """Reduce a rational to its representative in [0, 1)."""
    return x - (x.numerator // x.denominator)


def circle_dist(x: Fraction, y: Fraction) -> Fraction:
    """Flat circle metric: distance from x - y to the nearest integer."""
    r = mod1(x - y)
    return r if r <= HALF else ONE - r


def signed_circle_offset(x: Fraction, y: Fraction) -> Fraction:
    """Representative of x - y (mod 1) in [-1/2, 1/2)."""
    r = mod1(x - y)
    return r if r < HALF else r - ONE


def parse_rational(text: str) -> Fraction:
    """Parse a 'num/den' (or plain integer) string."""
    return Fraction(text.strip())


def format_rational(x: Fraction) -> str:
    """Serialize as an explicit 'num/den' string."""
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# Arcs


@dataclass(frozen=True)
class Arc:
    """Half-open arc [start, start+length) mod 1, with 0 < length <= 1.

    Zero-length arcs are permitted only where a module explicitly says so
    (degenerate partition cells); construct them via ``Arc.degenerate``.
    """

    start: Fraction
    length: Fraction

    def __post_init__(self) -> None:
        if not (ZERO <= self.start < ONE):
            raise ValueError(f"arc start {self.start} outside [0,1)")
        if not (ZERO <= self.length <= ONE):
            raise ValueError(f"arc length {self.length} outside [0,1]")

    @staticmethod
    def make(start: Fraction, length: Fraction) -> "Arc":
        if length <= ZERO or length > ONE:
            raise ValueError(f"arc length must lie in (0,1], got {length}")
        return Arc(mod1(start), length)

    @staticmethod
    def degenerate(start: Fraction) -> "Arc":
        return Arc(mod1(start), ZERO)

    @staticmethod
    def full() -> "Arc":
        return Arc(ZERO, ONE)

    @property
    def end(self) -> Fraction:
        """Right endpoint, reduced mod 1 (excluded from the arc)."""
        return mod1(self.start + self.length)

    @property
    def measure(self) -> Fraction:
        return self.length

    @property
    def midpoint(self) -> Fraction:
        return mod1(self.start + self.length / 2)

    def contains(self, x: Fraction) -> bool:
        """Half-open membership with wraparound."""
        return mod1(x - self.start) < self.length

    def diameter(self) -> Fraction:
        """Sup of pairwise circle distances between points of the arc."""
        return self.length if self.length <= HALF else HALF

    def intervals(self) -> list[tuple[Fraction, Fraction]]:
        """Split into non-wrapping half-open [lo, hi) pieces inside [0, 1]."""
        hi = self.start + self.length
        if hi <= ONE:
            return [(self.start, hi)] if self.length > ZERO else []
        return [(self.start, ONE), (ZERO, hi - ONE)]

    def shrink(self, delta: Fraction) -> "Arc":
        """Closed delta-interior [start+delta, end-delta] as an arc-like span.

        Returned as a half-open arc over the same span; callers that need the
        open/closed distinction use IntervalSet helpers.
        """
        if 2 * delta >= self.length:
            raise ValueError("delta too large for arc")
        return Arc(mod1(self.start + delta), self.length - 2 * delta)


def arc_measure(a: Arc) -> Fraction:
    return a.measure


def arc_contains(a: Arc, x: Fraction) -> bool:
    return a.contains(mod1(x))


def arcs_measure(arcs: Iterable[Arc]) -> Fraction:
    """Total measure of a union of pairwise disjoint arcs."""
    return sum((a.length for a in arcs), start=ZERO)


def arcs_contain(arcs: Iterable[Arc], x: Fraction) -> bool:
    return any(a.contains(x) for a in arcs)


# ---------------------------------------------------------------------------
# Base-l words


@dataclass(frozen=True)
class Word:
    """Finite word over the alphabet {0, ..., base-1}."""

    base: int
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.base < 2:
            raise ValueError(f"alphabet size must be >= 2, got {self.base}")
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} outside alphabet of size {self.base}")

    @staticmethod
    def from_string(text: str, base: int) -> "Word":
        return Word(base, tuple(int(c) for c in text))

    @staticmethod
    def from_value(value: int, base: int, length: int) -> "Word":
        digits = []
        for _ in range(length):
            value, d = divmod(value, base)
            digits.append(d)
        if value:
            raise ValueError("value does not fit in word length")
        return Word(base, tuple(reversed(digits)))

    def __len__(self) -> int:
        return len(self.digits)

    def __str__(self) -> str:
        return "".join(str(d) for d in self.digits)

    @property
    def value(self) -> int:
        """The word read as a natural number in base ``base``."""
        v = 0
        for d in self.digits:
            v = v * self.base + d
        return v

    def concat(self, other: "Word") -> "Word":
        if self.base != other.base:
            raise ValueError(
                f"cannot concatenate words over different alphabets "
                f"({self.base} vs {other.base})"
            )
        return Word(self.base, self.digits + other.digits)

    def interval(self) -> Arc:
        """The cylinder arc [v/base^p, (v+1)/base^p) coded by this word."""
        p = len(self.digits)
        scale = self.base**p
        return Arc(Fraction(self.value, scale), Fraction(1, scale))


def word_concat(a: Word, b: Word) -> Word:
    return a.concat(b)


def word_interval(a: Word) -> Arc:
    return a.interval()


def all_words(base: int, length: int) -> Iterator[Word]:
    """All base-l words of the given length, in base-l numeric order."""
    for v in range(base**length):
        yield Word.from_value(v, base, length)


# ---------------------------------------------------------------------------
# Interval sets with explicit endpoint topology.
#
# Used by the shredder's verifier, where open/closed distinctions matter
# (trapping regions are open, their closures are checked against them).
# Intervals live on the line; circle sets are stored via representatives
# inside [0, 1].


@dataclass(frozen=True)
class Iv:
    """One interval with endpoint flags; lo == hi means a single point."""

    lo: Fraction
    lo_closed: bool
    hi: Fraction
    hi_closed: bool

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise ValueError("degenerate interval must be a closed point")

    def contains(self, x: Fraction) -> bool:
        if x < self.lo or x > self.hi:
            return False
        if x == self.lo and not self.lo_closed:
            return False
        if x == self.hi and not self.hi_closed:
            return False
        return True


class IntervalSet:
    """Finite union of intervals in [0, 1] with exact endpoint topology.

    Canonical form: sorted, pairwise disjoint, and non-touching (touching
    intervals whose union is an interval are merged).  The circle is modeled
    by identifying 0 with 1: canonicalization glues a part ending closed/open
    at 1 with a part starting at 0 only for membership queries via mod1.
    """

    __slots__ = ("ivs",)

    def __init__(self, ivs: Iterable[Iv] = ()):
        self.ivs: tuple[Iv, ...] = self._canonical(list(ivs))

    @staticmethod
    def _canonical(items: list[Iv]) -> tuple[Iv, ...]:
        items = sorted(items, key=lambda iv: (iv.lo, not iv.lo_closed))
        out: list[Iv] = []
        for iv in items:
            if not out:
                out.append(iv)
                continue
            last = out[-1]
            # merge when overlapping or touching with at least one closed end
            if iv.lo < last.hi or (
                iv.lo == last.hi and (iv.lo_closed or last.hi_closed)
            ):
                if iv.hi > last.hi:
                    hi, hic = iv.hi, iv.hi_closed
                elif iv.hi == last.hi:
                    hi, hic = last.hi, last.hi_closed or iv.hi_closed
                else:
                    hi, hic = last.hi, last.hi_closed
                lo, loc = last.lo, last.lo_closed or (
                    iv.lo == last.lo and iv.lo_closed
                )
                out[-1] = Iv(lo, loc, hi, hic)
            else:
                out.append(iv)
        return tuple(out)

    # -- constructors

    @staticmethod
    def empty() -> "IntervalSet":
        return IntervalSet()

    @staticmethod
    def closed(lo: Fraction, hi: Fraction) -> "IntervalSet":
        return IntervalSet([Iv(lo, True, hi, True)])

    @staticmethod
    def open(lo: Fraction, hi: Fraction) -> "IntervalSet":
        if lo >= hi:
            return IntervalSet()
        return IntervalSet([Iv(lo, False, hi, False)])

    @staticmethod
    def point(x: Fraction) -> "IntervalSet":
        return IntervalSet([Iv(x, True, x, True)])

    @staticmethod
    def from_arc_open(a: Arc) -> "IntervalSet":
        """Interior of a half-open arc as an open set in [0, 1]."""
        return IntervalSet.union_all(
            IntervalSet.open(lo, hi) for lo, hi in a.intervals()
        )

    @staticmethod
    def from_arc_closed(a: Arc) -> "IntervalSet":
        """Closure of an arc: [start, end] with wrap pieces closed."""
        parts = a.intervals()
        if not parts:
            return IntervalSet.point(a.start)
        return IntervalSet.union_all(
            IntervalSet.closed(lo, hi) for lo, hi in parts
        )

    @staticmethod
    def union_all(sets: Iterable["IntervalSet"]) -> "IntervalSet":
        items: list[Iv] = []
        for s in sets:
            items.extend(s.ivs)
        return IntervalSet(items)

    # -- queries

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.ivs + other.ivs)

    def measure(self) -> Fraction:
        return sum((iv.hi - iv.lo for iv in self.ivs), start=ZERO)

    def is_empty(self) -> bool:
        return not self.ivs

    def contains_point(self, x: Fraction) -> bool:
        x = mod1(x)
        if any(iv.contains(x) for iv in self.ivs):
            return True
        # circle identification: 0 and 1 are the same point
        return x == ZERO and any(iv.contains(ONE) for iv in self.ivs)

    def covers(self, other: "IntervalSet") -> bool:
        """True iff other is a subset of self (both as subsets of the circle).

        Endpoint topology is honored exactly; the identification 0 ~ 1 is
        applied for single endpoint membership.
        """
        for iv in other.ivs:
            if not self._covers_iv(iv):
                return False
        return True

    def _covers_iv(self, target: Iv) -> bool:
        if target.lo == target.hi:
            return self.contains_point(target.lo)
        pos = target.lo
        pos_needed_closed = target.lo_closed
        while True:
            host = None
            for iv in self.ivs:
                if iv.lo < pos < iv.hi:
                    host = iv
                    break
                if iv.lo == pos and (iv.lo_closed or not pos_needed_closed):
                    if iv.hi > pos:
                        host = iv
                        break
                if iv.hi == pos and iv.hi_closed and not pos_needed_closed:
                    continue
            if host is None:
                # try the wrap identification for the single point pos
                if pos_needed_closed and self.contains_point(pos):
                    pos_needed_closed = False
                    continue
                return False
            if host.hi > target.hi:
                return True
            if host.hi == target.hi:
                return host.hi_closed or not target.hi_closed
            pos = host.hi
            pos_needed_closed = not host.hi_closed

    def min_gap_to_boundary(self, inner: "IntervalSet") -> Fraction:
        """Minimal distance from points of ``inner`` to boundary of self.

        Assumes self.covers(inner); used for robustness margins.  Each inner
        interval is matched to a covering interval of self.
        """
        best: Fraction | None = None
        for iv in inner.ivs:
            for host in self.ivs:
                if host.lo <= iv.lo and iv.hi <= host.hi:
                    for gap in (iv.lo - host.lo, host.hi - iv.hi):
                        if best is None or gap < best:
                            best = gap
                    break
        if best is None:
            raise ValueError("inner set not covered interval-by-interval")
        return best

    def __eq__(self, other: object) -> bool:
        return isinstance(other, IntervalSet) and self.ivs == other.ivs

    def __repr__(self) -> str:
        parts = []
        for iv in self.ivs:
            lb = "[" if iv.lo_closed else "("
            rb = "]" if iv.hi_closed else ")"
            parts.append(f"{lb}{iv.lo},{iv.hi}{rb}")
        return "IntervalSet(" + " u ".join(parts) + ")"
