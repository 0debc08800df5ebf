"""Exact probability measures on the circle and cylinder-value vectors.

A measure is finitely many atoms plus a piecewise-constant density; this
class is closed under push-forward by piecewise-linear maps (flat pieces
turn absolutely continuous mass into atoms), so every identity checked in
the package is a rational equality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInput, ResourceCap
from .exact import ONE, ZERO, Arc, all_words, mod1, Word
from .plmaps import Observable, PLCircleMap

DEFAULT_COMPLEXITY_CAP = 100_000


class CircleMeasure:
    """Probability measure: atoms + piecewise-constant density, canonical.

    Internal form: atoms as sorted (point, mass > 0) pairs with distinct
    points; density as sorted disjoint tuples (lo, hi, density > 0) covering
    subintervals of [0, 1), adjacent pieces with equal density merged.
    Overlapping inputs are accumulated additively.
    """

    __slots__ = ("atoms", "pieces")

    def __init__(
        self,
        atoms: Iterable[tuple[Fraction, Fraction]] = (),
        pieces: Iterable[tuple[Fraction, Fraction, Fraction]] = (),
        require_probability: bool = True,
    ):
        acc: dict[Fraction, Fraction] = {}
        for p, w in atoms:
            if w < 0:
                raise InvalidInput("atom masses must be >= 0")
            if w == 0:
                continue
            p = mod1(p)
            acc[p] = acc.get(p, ZERO) + w
        self.atoms: tuple[tuple[Fraction, Fraction], ...] = tuple(
            sorted(acc.items())
        )
        self.pieces = self._canonical_pieces(pieces)
        if require_probability and self.total_mass != ONE:
            raise InvalidInput(
                f"measure must have total mass 1, got {self.total_mass}"
            )

    @staticmethod
    def _canonical_pieces(
        pieces: Iterable[tuple[Fraction, Fraction, Fraction]],
    ) -> tuple[tuple[Fraction, Fraction, Fraction], ...]:
        items = []
        for lo, hi, d in pieces:
            if d < 0:
                raise InvalidInput("densities must be >= 0")
            if not (ZERO <= lo < hi <= ONE):
                raise InvalidInput(f"density piece [{lo},{hi}) outside [0,1)")
            if d > 0:
                items.append((lo, hi, d))
        if not items:
            return ()
        cuts = sorted({lo for lo, _, _ in items} | {hi for _, hi, _ in items})
        out: list[tuple[Fraction, Fraction, Fraction]] = []
        for i in range(len(cuts) - 1):
            a, b = cuts[i], cuts[i + 1]
            d = sum((dd for lo, hi, dd in items if lo <= a and b <= hi), start=ZERO)
            if d == 0:
                continue
            if out and out[-1][1] == a and out[-1][2] == d:
                out[-1] = (out[-1][0], b, d)
            else:
                out.append((a, b, d))
        return tuple(out)

    # -- constructors

    @staticmethod
    def lebesgue() -> "CircleMeasure":
        return CircleMeasure(pieces=[(ZERO, ONE, ONE)])

    @staticmethod
    def dirac(p: Fraction) -> "CircleMeasure":
        return CircleMeasure(atoms=[(mod1(Fraction(p)), ONE)])

    @staticmethod
    def from_arcs(arc_pieces: Iterable[tuple[Arc, Fraction]],
                  atoms: Iterable[tuple[Fraction, Fraction]] = ()) -> "CircleMeasure":
        flat = []
        for arc, d in arc_pieces:
            for lo, hi in arc.intervals():
                flat.append((lo, hi, d))
        return CircleMeasure(atoms=atoms, pieces=flat)

    @staticmethod
    def convex_combination(
        parts: Sequence[tuple[Fraction, "CircleMeasure"]]
    ) -> "CircleMeasure":
        weights = sum((w for w, _ in parts), start=ZERO)
        if weights != ONE:
            raise InvalidInput("convex combination weights must sum to 1")
        atoms = []
        pieces = []
        for w, mu in parts:
            if w == 0:
                continue
            atoms.extend((p, w * m) for p, m in mu.atoms)
            pieces.extend((lo, hi, w * d) for lo, hi, d in mu.pieces)
        return CircleMeasure(atoms=atoms, pieces=pieces)

    # -- structure

    @property
    def total_mass(self) -> Fraction:
        am = sum((w for _, w in self.atoms), start=ZERO)
        pm = sum(((hi - lo) * d for lo, hi, d in self.pieces), start=ZERO)
        return am + pm

    @property
    def complexity(self) -> int:
        return len(self.atoms) + len(self.pieces)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, CircleMeasure)
            and self.atoms == other.atoms
            and self.pieces == other.pieces
        )

    def __repr__(self) -> str:
        return f"CircleMeasure({len(self.atoms)} atoms, {len(self.pieces)} density pieces)"

    # -- evaluation

    def measure_of_interval(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Mass of the half-open [lo, hi) inside [0, 1]."""
        if lo >= hi:
            return ZERO
        total = sum((w for p, w in self.atoms if lo <= p < hi), start=ZERO)
        for a, b, d in self.pieces:
            left = max(a, lo)
            right = min(b, hi)
            if left < right:
                total += (right - left) * d
        return total

    def measure_of_arc(self, arc: Arc) -> Fraction:
        return sum(
            (self.measure_of_interval(lo, hi) for lo, hi in arc.intervals()),
            start=ZERO,
        )

    def measure_of_arcs(self, arcs: Iterable[Arc]) -> Fraction:
        return sum((self.measure_of_arc(a) for a in arcs), start=ZERO)

    def cdf(self, x: Fraction) -> Fraction:
        """Mass of [0, x), for x in [0, 1]."""
        return self.measure_of_interval(ZERO, x)

    def cdf_closed(self, x: Fraction) -> Fraction:
        """Mass of [0, x]."""
        extra = sum((w for p, w in self.atoms if p == x), start=ZERO)
        return self.measure_of_interval(ZERO, x) + extra

    # -- operations

    def pushforward(self, f: PLCircleMap) -> "CircleMeasure":
        atoms = [(f.evaluate(p), w) for p, w in self.atoms]
        pieces: list[tuple[Fraction, Fraction, Fraction]] = []
        bps = f.breakpoints
        for lo, hi, d in self.pieces:
            cuts = [lo] + [b for b in bps if lo < b < hi] + [hi]
            for i in range(len(cuts) - 1):
                a, b = cuts[i], cuts[i + 1]
                fa, fb = f.lift_evaluate(a), f.lift_evaluate(b)
                if fa == fb:
                    atoms.append((mod1(fa), d * (b - a)))
                    continue
                u, v = (fa, fb) if fa < fb else (fb, fa)
                dens = d * (b - a) / (v - u)
                span = v - u
                wraps = math.floor(span)
                if wraps:
                    pieces.append((ZERO, ONE, dens * wraps))
                    u = u + wraps
                shift = u.numerator // u.denominator
                u, v2 = u - shift, v - shift
                if u < v2:
                    if v2 <= ONE:
                        pieces.append((u, v2, dens))
                    else:
                        pieces.append((u, ONE, dens))
                        pieces.append((ZERO, v2 - ONE, dens))
        return CircleMeasure(atoms=atoms, pieces=pieces)

    def integrate(self, phi: Observable) -> Fraction:
        total = sum((w * phi.evaluate(p) for p, w in self.atoms), start=ZERO)
        for lo, hi, d in self.pieces:
            total += d * phi.integral_on_interval(lo, hi)
        return total

    def restrict_normalize(self, arcs: Sequence[Arc]) -> "CircleMeasure":
        total = self.measure_of_arcs(arcs)
        if total == 0:
            raise InvalidInput("conditioning set has measure zero")
        atoms = [
            (p, w / total)
            for p, w in self.atoms
            if any(a.contains(p) for a in arcs)
        ]
        pieces = []
        spans = [iv for a in arcs for iv in a.intervals()]
        for lo, hi, d in self.pieces:
            for slo, shi in spans:
                left, right = max(lo, slo), min(hi, shi)
                if left < right:
                    pieces.append((left, right, d / total))
        return CircleMeasure(atoms=atoms, pieces=pieces)

    def cylinder_vector(self, ell: int, p: int) -> "CylinderSpec":
        scale = ell**p
        values = {}
        for v in range(scale):
            lo = Fraction(v, scale)
            hi = Fraction(v + 1, scale)
            values[Word.from_value(v, ell, p).digits] = self.measure_of_interval(lo, hi)
        return CylinderSpec(ell, p, values)

    def w1_distance(self, other: "CircleMeasure") -> Fraction:
        """Exact L1 distance between CDFs anchored at 0 (interval convention)."""
        cuts = sorted(
            {ZERO, ONE}
            | {p for p, _ in self.atoms}
            | {p for p, _ in other.atoms}
            | {e for lo, hi, _ in self.pieces for e in (lo, hi)}
            | {e for lo, hi, _ in other.pieces for e in (lo, hi)}
        )
        total = ZERO
        for i in range(len(cuts) - 1):
            a, b = cuts[i], cuts[i + 1]
            # difference of CDFs is affine on (a, b); one-sided limits:
            u = self.cdf_closed(a) - other.cdf_closed(a)
            v = self.cdf(b) - other.cdf(b)
            if u == 0 and v == 0:
                continue
            if (u >= 0 and v >= 0) or (u <= 0 and v <= 0):
                total += (abs(u) + abs(v)) * (b - a) / 2
            else:
                t = (b - a) * abs(u) / (abs(u) + abs(v))
                total += (abs(u) * t + abs(v) * ((b - a) - t)) / 2
        return total


# ---------------------------------------------------------------------------
# Cylinder specs


@dataclass(frozen=True)
class CylinderSpec:
    """A measure described by its values on the level-p base-l intervals."""

    ell: int
    level: int
    values: dict[tuple[int, ...], Fraction]

    def __post_init__(self) -> None:
        if self.ell < 2:
            raise InvalidInput("alphabet size must be >= 2")
        if self.level < 1:
            raise InvalidInput("cylinder level must be >= 1")
        full = dict(self.values)
        for w in all_words(self.ell, self.level):
            full.setdefault(w.digits, ZERO)
        for w, v in full.items():
            if len(w) != self.level:
                raise InvalidInput(f"word {w} has wrong length")
            if v < 0:
                raise InvalidInput("cylinder values must be >= 0")
        if sum(full.values(), start=ZERO) != ONE:
            raise InvalidInput("cylinder values must sum to 1")
        object.__setattr__(self, "values", full)

    # -- constructors

    @staticmethod
    def lebesgue(ell: int, p: int) -> "CylinderSpec":
        v = Fraction(1, ell**p)
        return CylinderSpec(
            ell, p, {w.digits: v for w in all_words(ell, p)}
        )

    @staticmethod
    def dirac_zero(ell: int, p: int) -> "CylinderSpec":
        return CylinderSpec(ell, p, {tuple([0] * p): ONE})

    @staticmethod
    def bernoulli(probs: Sequence[Fraction], p: int) -> "CylinderSpec":
        ell = len(probs)
        if sum(probs, start=ZERO) != ONE:
            raise InvalidInput("digit probabilities must sum to 1")
        values = {}
        for w in all_words(ell, p):
            v = ONE
            for d in w.digits:
                v *= probs[d]
            values[w.digits] = v
        return CylinderSpec(ell, p, values)

    @staticmethod
    def from_strings(ell: int, p: int, table: dict[str, Fraction]) -> "CylinderSpec":
        return CylinderSpec(
            ell, p, {Word.from_string(k, ell).digits: v for k, v in table.items()}
        )

    # -- queries

    def value(self, digits: tuple[int, ...]) -> Fraction:
        return self.values.get(digits, ZERO)

    def marginal(self, q: int) -> "CylinderSpec":
        """Refinement marginal at a coarser level q <= level."""
        if not 1 <= q <= self.level:
            raise InvalidInput("marginal level out of range")
        out: dict[tuple[int, ...], Fraction] = {}
        for w, v in self.values.items():
            key = w[:q]
            out[key] = out.get(key, ZERO) + v
        return CylinderSpec(self.ell, q, out)

    def is_invariant(self) -> bool:
        """Double-marginalization test: refinement vs. preimage marginals.

        For every word a of length level-1, the mass of the children a*c must
        equal the mass of the translates b*a; a level-1 spec passes vacuously
        (its product extension is always invariant).
        """
        if self.level == 1:
            return True
        left: dict[tuple[int, ...], Fraction] = {}
        right: dict[tuple[int, ...], Fraction] = {}
        for w, v in self.values.items():
            left[w[:-1]] = left.get(w[:-1], ZERO) + v
            right[w[1:]] = right.get(w[1:], ZERO) + v
        return left == right

    def distance(self, other: "CylinderSpec") -> Fraction:
        if self.ell != other.ell or self.level != other.level:
            raise InvalidInput("cylinder specs have mismatched dimensions")
        return max(
            abs(self.values[w] - other.values[w]) for w in self.values
        )

    # -- stationary extension (used to extend targets below their level)

    def extension_table(self, depth: int, max_cells: int = 1_000_000
                        ) -> list[dict[tuple[int, ...], Fraction]]:
        """Positive cylinder values at levels 1..depth.

        Levels above ``level`` are filled by the stationary memory-(level-1)
        Markov extension of the table: each new digit is drawn conditionally
        on the previous level-1 digits.  Only positive entries are stored.
        """
        tables: list[dict[tuple[int, ...], Fraction]] = []
        for q in range(1, min(depth, self.level) + 1):
            marg = self.marginal(q) if q < self.level else self
            tables.append({w: v for w, v in marg.values.items() if v > 0})
        if depth <= self.level:
            return tables
        ctx_mass: dict[tuple[int, ...], Fraction] = {}
        for w, v in self.values.items():
            ctx_mass[w[:-1]] = ctx_mass.get(w[:-1], ZERO) + v
        cells = sum(len(t) for t in tables)
        for q in range(self.level + 1, depth + 1):
            prev = tables[-1]
            nxt: dict[tuple[int, ...], Fraction] = {}
            for w, v in prev.items():
                ctx = w[len(w) - (self.level - 1):] if self.level > 1 else ()
                denom = ctx_mass.get(ctx, ZERO)
                if denom == 0:
                    continue
                for c in range(self.ell):
                    num = self.values.get(ctx + (c,), ZERO)
                    if num == 0:
                        continue
                    nxt[w + (c,)] = v * num / denom
            cells += len(nxt)
            if cells > max_cells:
                raise ResourceCap(
                    f"cylinder extension exceeds {max_cells} positive cells"
                )
            tables.append(nxt)
        return tables


# ---------------------------------------------------------------------------
# Module-level operations


def pushforward(f: PLCircleMap, mu: CircleMeasure) -> CircleMeasure:
    return mu.pushforward(f)


def cesaro(
    f: PLCircleMap,
    mu0: CircleMeasure,
    n: int,
    complexity_cap: int | None = None,
) -> CircleMeasure:
    """(1/n) sum of the first n push-forward iterates of mu0."""
    if n < 1:
        raise InvalidInput("cesaro horizon must be >= 1")
    cap = DEFAULT_COMPLEXITY_CAP if complexity_cap is None else complexity_cap
    weight = Fraction(1, n)
    parts = []
    mu = mu0
    for k in range(n):
        if k:
            mu = mu.pushforward(f)
            if mu.complexity > cap:
                raise ResourceCap(
                    f"measure complexity {mu.complexity} exceeds cap {cap}"
                )
        parts.append((weight, mu))
    return CircleMeasure.convex_combination(parts)


def integrate(phi: Observable, mu: CircleMeasure) -> Fraction:
    return mu.integrate(phi)


def cylinder_vector(mu: CircleMeasure, ell: int, p: int) -> CylinderSpec:
    return mu.cylinder_vector(ell, p)


def w1_distance(mu: CircleMeasure, nu: CircleMeasure) -> Fraction:
    return mu.w1_distance(nu)


def spec_distance(a: CylinderSpec, b: CylinderSpec) -> Fraction:
    return a.distance(b)


def neighborhood_member(
    mu: CircleMeasure,
    observables: Sequence[Observable],
    targets: Sequence[Fraction],
    epsilons: Sequence[Fraction],
) -> bool:
    """Membership in a weak*-basis neighborhood given by finitely many tests."""
    if not (len(observables) == len(targets) == len(epsilons)):
        raise InvalidInput("observables, targets, epsilons must align")
    for phi, t, e in zip(observables, targets, epsilons):
        if abs(mu.integrate(phi) - t) >= e:
            return False
    return True


def restrict_normalize(mu: CircleMeasure, arcs: Sequence[Arc]) -> CircleMeasure:
    return mu.restrict_normalize(arcs)


def dirac_periodic(f: PLCircleMap, p: Fraction, k: int) -> CircleMeasure:
    """Uniform probability on the exact period-k orbit of p under f."""
    if k < 1:
        raise InvalidInput("period must be >= 1")
    p = mod1(Fraction(p))
    orbit = [p]
    y = p
    for j in range(1, k + 1):
        y = f.evaluate(y)
        if y == p:
            if j < k:
                raise InvalidInput(
                    f"point has smaller period {j}, expected minimal period {k}"
                )
            break
        if j == k:
            raise InvalidInput("point is not periodic with the given period")
        orbit.append(y)
    mass = Fraction(1, k)
    return CircleMeasure(atoms=[(q, mass) for q in orbit])
