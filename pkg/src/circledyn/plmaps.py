"""Piecewise-linear circle maps and observables, all exact.

A map is stored through its lift: rational breakpoints 0 = x0 < ... < xm = 1
and lift values F(x0), ..., F(xm), extended by F(t+1) = F(t) + degree.
Composition, inversion, iteration, C0 distance, and periodic-point solving
are closed operations on this class and produce exact rationals.
"""

from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput, ResourceCap
from .exact import (
    HALF,
    ONE,
    ZERO,
    Arc,
    IntervalSet,
    Iv,
    mod1,
)

DEFAULT_BREAKPOINT_CAP = 10**6


def _dist_to_int(x: Fraction) -> Fraction:
    r = mod1(x)
    return r if r <= HALF else ONE - r


def _locate(bps: tuple[Fraction, ...], hints: list[float], x: Fraction) -> int:
    """Index i with bps[i] <= x < bps[i+1]; float bisect hint, exact fixup."""
    i = bisect_right(hints, float(x)) - 1
    if i < 0:
        i = 0
    last = len(bps) - 2
    if i > last:
        i = last
    while i < last and bps[i + 1] <= x:
        i += 1
    while i > 0 and bps[i] > x:
        i -= 1
    return i


class PLCircleMap:
    """Continuous piecewise-linear circle map given by its lift."""

    __slots__ = ("breakpoints", "lift_values", "degree", "_slopes", "_bps_float")

    def __init__(
        self,
        breakpoints: Sequence[Fraction],
        lift_values: Sequence[Fraction],
    ):
        bps = tuple(Fraction(b) for b in breakpoints)
        vals = tuple(Fraction(v) for v in lift_values)
        if len(bps) != len(vals) or len(bps) < 2:
            raise InvalidInput("need equally many breakpoints and lift values, at least two")
        if bps[0] != ZERO or bps[-1] != ONE:
            raise InvalidInput("breakpoints must start at 0 and end at 1")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise InvalidInput("breakpoints must be strictly increasing")
        deg = vals[-1] - vals[0]
        if deg.denominator != 1:
            raise InvalidInput(f"lift endpoint difference must be an integer, got {deg}")
        # canonical lift representative: F(0) in [0, 1)
        shift = vals[0].numerator // vals[0].denominator
        if shift:
            vals = tuple(v - shift for v in vals)
        bps, vals = self._strip_collinear(bps, vals)
        self.breakpoints = bps
        self.lift_values = vals
        self.degree = int(deg)
        self._slopes = tuple(
            (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i])
            for i in range(len(bps) - 1)
        )
        self._bps_float = [float(b) for b in bps]

    @staticmethod
    def _strip_collinear(
        bps: tuple[Fraction, ...], vals: tuple[Fraction, ...]
    ) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        keep_b = [bps[0]]
        keep_v = [vals[0]]
        for i in range(1, len(bps) - 1):
            sl = (vals[i] - keep_v[-1]) / (bps[i] - keep_b[-1])
            sr = (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i])
            if sl != sr:
                keep_b.append(bps[i])
                keep_v.append(vals[i])
        keep_b.append(bps[-1])
        keep_v.append(vals[-1])
        return tuple(keep_b), tuple(keep_v)

    # -- basic structure

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PLCircleMap)
            and self.breakpoints == other.breakpoints
            and self.lift_values == other.lift_values
        )

    def __repr__(self) -> str:
        return (
            f"PLCircleMap({len(self.breakpoints)} breakpoints, degree {self.degree})"
        )

    @property
    def is_homeomorphism(self) -> bool:
        if abs(self.degree) != 1:
            return False
        inc = all(s > 0 for s in self._slopes)
        dec = all(s < 0 for s in self._slopes)
        return (inc and self.degree == 1) or (dec and self.degree == -1)

    @property
    def orientation_preserving(self) -> bool:
        return self.is_homeomorphism and self.degree == 1

    @property
    def lipschitz(self) -> Fraction:
        """Exact Lipschitz constant: max absolute slope."""
        return max(abs(s) for s in self._slopes)

    # -- evaluation

    def lift_evaluate(self, t: Fraction) -> Fraction:
        """Affine interpolant of the lift, extended by F(t+1) = F(t) + degree."""
        k = t.numerator // t.denominator
        t0 = t - k
        i = _locate(self.breakpoints, self._bps_float, t0)
        base = self.lift_values[i] + self._slopes[i] * (t0 - self.breakpoints[i])
        return base + k * self.degree

    def evaluate(self, x: Fraction) -> Fraction:
        return mod1(self.lift_evaluate(mod1(x)))

    def __call__(self, x: Fraction) -> Fraction:
        return self.evaluate(x)

    def orbit(self, x: Fraction, n: int) -> list[Fraction]:
        """[x, f(x), ..., f^(n-1)(x)], exact pointwise iteration."""
        pts = [mod1(x)]
        for _ in range(n - 1):
            pts.append(self.evaluate(pts[-1]))
        return pts

    # -- constructors

    @staticmethod
    def identity() -> "PLCircleMap":
        return PLCircleMap([ZERO, ONE], [ZERO, ONE])

    @staticmethod
    def rotation(angle: Fraction) -> "PLCircleMap":
        a = mod1(Fraction(angle))
        return PLCircleMap([ZERO, ONE], [a, a + 1])

    @staticmethod
    def from_lift_points(points: Sequence[tuple[Fraction, Fraction]]) -> "PLCircleMap":
        """Build from lift graph points over any interval [t0, t0+1].

        ``points`` must have strictly increasing abscissas spanning exactly one
        period; the ordinate difference across the period is the degree.  The
        result is renormalized to canonical breakpoints in [0, 1].
        """
        if len(points) < 2:
            raise InvalidInput("need at least two lift points")
        ts = [Fraction(t) for t, _ in points]
        ws = [Fraction(w) for _, w in points]
        if any(ts[i] >= ts[i + 1] for i in range(len(ts) - 1)):
            raise InvalidInput("lift point abscissas must be strictly increasing")
        if ts[-1] - ts[0] != ONE:
            raise InvalidInput("lift points must span exactly one period")
        deg = ws[-1] - ws[0]
        if deg.denominator != 1:
            raise InvalidInput("degree (period ordinate change) must be an integer")
        degree = int(deg)

        def raw(t: Fraction) -> Fraction:
            # evaluate the input graph extended by periodicity
            k = 0
            tt = t
            while tt < ts[0]:
                tt += ONE
                k -= 1
            while tt >= ts[-1]:
                tt -= ONE
                k += 1
            i = bisect_right(ts, tt) - 1
            if i == len(ts) - 1:
                i -= 1
            s = (ws[i + 1] - ws[i]) / (ts[i + 1] - ts[i])
            return ws[i] + s * (tt - ts[i]) + k * degree

        bset = {ZERO, ONE}
        for t in ts[:-1]:
            bset.add(mod1(t))
        bps = sorted(bset)
        vals = [raw(b) for b in bps]
        return PLCircleMap(bps, vals)

    # -- composition and friends

    def compose(
        self, inner: "PLCircleMap", max_breakpoints: int | None = None
    ) -> "PLCircleMap":
        """Exact composition self(inner(x))."""
        cap = DEFAULT_BREAKPOINT_CAP if max_breakpoints is None else max_breakpoints
        g = inner
        f = self
        cuts = set(g.breakpoints)
        levels = [mod1(b) for b in f.breakpoints[:-1]]
        for i in range(len(g.breakpoints) - 1):
            a, b = g.breakpoints[i], g.breakpoints[i + 1]
            s = g._slopes[i]
            if s == 0:
                continue
            ga, gb = g.lift_values[i], g.lift_values[i + 1]
            lo, hi = (ga, gb) if ga < gb else (gb, ga)
            for c in levels:
                kmin = math.ceil(lo - c)
                kmax = math.floor(hi - c)
                for k in range(kmin, kmax + 1):
                    t = a + (c + k - ga) / s
                    if a < t < b:
                        cuts.add(t)
            if len(cuts) > cap:
                raise ResourceCap(
                    f"composition would exceed breakpoint cap {cap}"
                )
        bps = sorted(cuts)
        vals = [f.lift_evaluate(g.lift_evaluate(b)) for b in bps]
        return PLCircleMap(bps, vals)

    def iterate(self, n: int, max_breakpoints: int | None = None) -> "PLCircleMap":
        if n < 0:
            raise InvalidInput("iteration count must be >= 0")
        result = PLCircleMap.identity()
        for _ in range(n):
            result = self.compose(result, max_breakpoints=max_breakpoints)
        return result

    def invert(self) -> "PLCircleMap":
        if not self.is_homeomorphism:
            raise InvalidInput("only homeomorphisms can be inverted")
        pts = list(zip(self.lift_values, self.breakpoints))
        if self.degree == -1:
            pts.reverse()
        return PLCircleMap.from_lift_points(pts)

    # -- distance

    def c0_distance(self, other: "PLCircleMap") -> Fraction:
        """Exact sup over the circle of d(f(x), g(x))."""
        bps = sorted(set(self.breakpoints) | set(other.breakpoints))
        deltas = [self.lift_evaluate(b) - other.lift_evaluate(b) for b in bps]
        best = ZERO
        for i in range(len(bps) - 1):
            u, v = deltas[i], deltas[i + 1]
            lo, hi = (u, v) if u <= v else (v, u)
            # sup of dist-to-integers over an affine segment is 1/2 as soon as
            # the value range contains a half-integer
            m_lo = math.ceil(2 * lo)
            m_hi = math.floor(2 * hi)
            has_odd = m_lo <= m_hi and (m_lo % 2 == 1 or m_lo + 1 <= m_hi)
            cand = HALF if has_odd else max(_dist_to_int(u), _dist_to_int(v))
            if cand > best:
                best = cand
            if best == HALF:
                return HALF
        return best

    # -- fixed and periodic points

    def _displacement_values(self) -> list[Fraction]:
        return [v - b for v, b in zip(self.lift_values, self.breakpoints)]

    def _psi_sign_beyond(self, pos: Fraction, k: Fraction, direction: int) -> int:
        """Sign of F(x) - x - k immediately left (-1) or right (+1) of pos.

        Walks across flat-zero stretches, wrapping around the circle with the
        level shifted by degree - 1 per wrap.  Returns 0 when the displacement
        vanishes identically around the whole circle.
        """
        bps = self.breakpoints
        psi = self._displacement_values()
        shift = self.degree - 1
        level = Fraction(k)
        cur = pos
        traveled = ZERO
        while traveled <= ONE:
            if direction > 0:
                if cur >= ONE:
                    cur -= ONE
                    level -= shift
                i = bisect_right(bps, cur) - 1
                if i == len(bps) - 1:
                    i -= 1
                a, b = bps[i], bps[i + 1]
                ua, ub = psi[i] - level, psi[i + 1] - level
                vcur = ua + (ub - ua) * (cur - a) / (b - a)
                if vcur != 0:
                    return 1 if vcur > 0 else -1
                if ub != 0:
                    return 1 if ub > 0 else -1
                traveled += b - cur
                cur = b
            else:
                if cur <= ZERO:
                    cur += ONE
                    level += shift
                i = bisect_right(bps, cur) - 1
                if i >= 1 and bps[i] == cur:
                    i -= 1
                if i == len(bps) - 1:
                    i -= 1
                a, b = bps[i], bps[i + 1]
                ua, ub = psi[i] - level, psi[i + 1] - level
                vcur = ua + (ub - ua) * (cur - a) / (b - a)
                if vcur != 0:
                    return 1 if vcur > 0 else -1
                if ua != 0:
                    return 1 if ua > 0 else -1
                traveled += cur - a
                cur = a
        return 0

    def fixed_point_components(self) -> list["FixedComponent"]:
        """Maximal solution components of f(x) = x on the circle.

        Point solutions carry a transversality tag (strict sign change of the
        displacement); interval solutions are tangential arcs.  The whole
        circle is returned as a single tangential full arc for the identity.
        """
        bps = self.breakpoints
        psi = self._displacement_values()
        lo_psi = min(psi)
        hi_psi = max(psi)
        # merged solution components of F(x) - x = k on [0, 1], per level k
        raw: list[tuple[Fraction, Fraction, int]] = []
        for k in range(math.ceil(lo_psi), math.floor(hi_psi) + 1):
            comps: list[tuple[Fraction, Fraction]] = []
            for i in range(len(bps) - 1):
                a, b = bps[i], bps[i + 1]
                ua, ub = psi[i] - k, psi[i + 1] - k
                if ua == 0 and ub == 0:
                    comps.append((a, b))
                elif ua == 0:
                    comps.append((a, a))
                elif ub == 0:
                    comps.append((b, b))
                elif (ua < 0 < ub) or (ub < 0 < ua):
                    t = a + (-ua) * (b - a) / (ub - ua)
                    comps.append((t, t))
            comps.sort()
            merged: list[list[Fraction]] = []
            for lo, hi in comps:
                if merged and lo <= merged[-1][1]:
                    merged[-1][1] = max(merged[-1][1], hi)
                else:
                    merged.append([lo, hi])
            raw.extend((lo, hi, k) for lo, hi in merged)

        if not raw:
            return []

        total = sum((hi - lo for lo, hi, _ in raw), start=ZERO)
        if total == ONE:
            return [FixedComponent(Arc.full(), transversal=False)]

        # Solutions at x=1 (level k) and x=0 (level k - (degree-1)) are the
        # same circle point and always occur together; glue them.
        shift = self.degree - 1
        end_comp = next((c for c in raw if c[1] == ONE), None)
        start_comp = None
        if end_comp is not None:
            start_comp = next(
                (c for c in raw if c[0] == ZERO and c[2] == end_comp[2] - shift),
                None,
            )
        out: list[FixedComponent] = []
        for lo, hi, k in raw:
            if end_comp is not None and (lo, hi, k) == end_comp:
                continue
            if start_comp is not None and (lo, hi, k) == start_comp:
                elo, _ehi, ek = end_comp
                length = (ONE - elo) + hi
                if length == 0:
                    left = self._psi_sign_beyond(ONE, Fraction(ek), -1)
                    right = self._psi_sign_beyond(ZERO, Fraction(k), +1)
                    out.append(
                        FixedComponent(ZERO, transversal=(left * right < 0))
                    )
                else:
                    out.append(
                        FixedComponent(
                            Arc.make(mod1(elo), length), transversal=False
                        )
                    )
                continue
            if lo == hi:
                left = self._psi_sign_beyond(lo, Fraction(k), -1)
                right = self._psi_sign_beyond(hi, Fraction(k), +1)
                out.append(FixedComponent(lo, transversal=(left * right < 0)))
            else:
                out.append(
                    FixedComponent(Arc.make(mod1(lo), hi - lo), transversal=False)
                )
        return out

    def fixed_points(self) -> list["FixedComponent"]:
        return self.fixed_point_components()

    def periodic_points(
        self, period: int, max_breakpoints: int | None = None
    ) -> list["PeriodicComponent"]:
        """Solution components of f^period(x) = x with exact minimal periods."""
        if period < 1:
            raise InvalidInput("period must be >= 1")
        g = self.iterate(period, max_breakpoints=max_breakpoints)
        comps = g.fixed_point_components()
        out = []
        for c in comps:
            if c.is_point:
                p = c.point
                minimal = period
                y = p
                for d in range(1, period + 1):
                    y = self.evaluate(y)
                    if y == p:
                        minimal = d
                        break
                out.append(PeriodicComponent(c.set, c.transversal, minimal))
            else:
                minimal = period
                for d in range(1, period):
                    if period % d:
                        continue
                    gd = self.iterate(d, max_breakpoints=max_breakpoints)
                    if _identity_on_arc(gd, c.arc):
                        minimal = d
                        break
                out.append(PeriodicComponent(c.set, c.transversal, minimal))
        return out

    # -- set images and preimages (endpoint topology exact)

    def image_of_set(self, s: IntervalSet) -> IntervalSet:
        """Exact image of an interval set under the map."""
        pieces: list[IntervalSet] = []
        for iv in s.ivs:
            pieces.extend(self._image_of_iv(iv))
        return IntervalSet.union_all(pieces)

    def _image_of_iv(self, iv: Iv) -> list[IntervalSet]:
        out: list[IntervalSet] = []
        bps = self.breakpoints
        i_lo = bisect_right(bps, iv.lo)
        i_hi = bisect_right(bps, iv.hi) - 1
        inner = [b for b in bps[i_lo : i_hi + 1] if b < iv.hi]
        cuts = [iv.lo] + inner + [iv.hi]
        for j in range(len(cuts) - 1):
            a, b = cuts[j], cuts[j + 1]
            fa, fb = self.lift_evaluate(a), self.lift_evaluate(b)
            a_closed = iv.lo_closed if a == iv.lo else True
            b_closed = iv.hi_closed if b == iv.hi else True
            if fa == fb:
                out.append(IntervalSet.point(mod1(fa)))
                continue
            if fa < fb:
                lo, loc, hi, hic = fa, a_closed, fb, b_closed
            else:
                lo, loc, hi, hic = fb, b_closed, fa, a_closed
            out.append(_wrap_lift_interval(lo, loc, hi, hic))
        if iv.lo == iv.hi:
            out.append(IntervalSet.point(self.evaluate(iv.lo)))
        return out

    def preimage_of_set(self, s: IntervalSet) -> IntervalSet:
        """Exact full preimage of an interval set (as a subset of [0,1])."""
        out: list[IntervalSet] = []
        bps = self.breakpoints
        for i in range(len(bps) - 1):
            a, b = bps[i], bps[i + 1]
            fa, fb = self.lift_values[i], self.lift_values[i + 1]
            slope = self._slopes[i]
            lo_v, hi_v = (fa, fb) if fa <= fb else (fb, fa)
            for iv in s.ivs:
                for k in range(
                    math.floor(lo_v - iv.hi), math.ceil(hi_v - iv.lo) + 1
                ):
                    u, v = iv.lo + k, iv.hi + k
                    if v < lo_v or u > hi_v:
                        continue
                    if slope == 0:
                        if iv.contains(fa - k):
                            out.append(IntervalSet.closed(a, b))
                        continue
                    t1 = a + (u - fa) / slope
                    t2 = a + (v - fa) / slope
                    if slope > 0:
                        plo, ploc, phi, phic = t1, iv.lo_closed, t2, iv.hi_closed
                    else:
                        plo, ploc, phi, phic = t2, iv.hi_closed, t1, iv.lo_closed
                    # clip to the piece [a, b] (closed)
                    if plo < a:
                        plo, ploc = a, True
                    if phi > b:
                        phi, phic = b, True
                    if plo > phi or (plo == phi and not (ploc and phic)):
                        continue
                    out.append(IntervalSet([Iv(plo, ploc, phi, phic)]))
        return IntervalSet.union_all(out)


def _wrap_lift_interval(
    lo: Fraction, loc: bool, hi: Fraction, hic: bool
) -> IntervalSet:
    """Wrap a lift-space interval into circle representatives in [0, 1]."""
    if hi - lo >= ONE:
        return IntervalSet.closed(ZERO, ONE)
    shift = lo.numerator // lo.denominator
    lo, hi = lo - shift, hi - shift
    if hi <= ONE:
        return IntervalSet([Iv(lo, loc, hi, hic)])
    return IntervalSet(
        [Iv(lo, loc, ONE, True), Iv(ZERO, True, hi - ONE, hic)]
    )


def _identity_on_arc(g: PLCircleMap, arc: Arc) -> bool:
    """True iff g equals the identity pointwise on the (closed) arc."""
    for lo, hi in arc.intervals():
        samples = [lo, hi] + [b for b in g.breakpoints if lo < b < hi]
        for t in samples:
            if g.lift_evaluate(t) - t != round(g.lift_evaluate(t) - t):
                return False
        vals = sorted(set(samples))
        for j in range(len(vals) - 1):
            if g.lift_evaluate(vals[j]) - vals[j] != g.lift_evaluate(
                vals[j + 1]
            ) - vals[j + 1]:
                return False
    return True


@dataclass(frozen=True)
class FixedComponent:
    """A maximal fixed-point component: a point or a tangential arc."""

    set: Fraction | Arc
    transversal: bool

    @property
    def is_point(self) -> bool:
        return isinstance(self.set, Fraction)

    @property
    def point(self) -> Fraction:
        if not self.is_point:
            raise ValueError("component is an arc")
        return self.set  # type: ignore[return-value]

    @property
    def arc(self) -> Arc:
        if self.is_point:
            raise ValueError("component is a point")
        return self.set  # type: ignore[return-value]


@dataclass(frozen=True)
class PeriodicComponent:
    set: Fraction | Arc
    transversal: bool
    minimal_period: int

    @property
    def is_point(self) -> bool:
        return isinstance(self.set, Fraction)

    @property
    def point(self) -> Fraction:
        if not self.is_point:
            raise ValueError("component is an arc")
        return self.set  # type: ignore[return-value]

    @property
    def arc(self) -> Arc:
        if self.is_point:
            raise ValueError("component is a point")
        return self.set  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# Module-level operation aliases matching the documented API


def evaluate(f: PLCircleMap, x: Fraction) -> Fraction:
    return f.evaluate(x)


def lift_evaluate(f: PLCircleMap, t: Fraction) -> Fraction:
    return f.lift_evaluate(t)


def compose(f: PLCircleMap, g: PLCircleMap, max_breakpoints: int | None = None) -> PLCircleMap:
    """f after g."""
    return f.compose(g, max_breakpoints=max_breakpoints)


def iterate(f: PLCircleMap, n: int, max_breakpoints: int | None = None) -> PLCircleMap:
    return f.iterate(n, max_breakpoints=max_breakpoints)


def invert(f: PLCircleMap) -> PLCircleMap:
    return f.invert()


def c0_distance(f: PLCircleMap, g: PLCircleMap) -> Fraction:
    return f.c0_distance(g)


def fixed_points(f: PLCircleMap) -> list[FixedComponent]:
    return f.fixed_point_components()


def periodic_points(f: PLCircleMap, period: int) -> list[PeriodicComponent]:
    return f.periodic_points(period)


# ---------------------------------------------------------------------------
# Observables


class Observable:
    """Continuous piecewise-linear real function on the circle."""

    __slots__ = ("breakpoints", "values", "_slopes", "_bps_float", "_tent_center")

    def __init__(self, breakpoints: Sequence[Fraction], values: Sequence[Fraction]):
        bps = tuple(Fraction(b) for b in breakpoints)
        vals = tuple(Fraction(v) for v in values)
        if len(bps) != len(vals) or len(bps) < 2:
            raise InvalidInput("need equally many breakpoints and values")
        if bps[0] != ZERO or bps[-1] != ONE:
            raise InvalidInput("observable breakpoints must span [0, 1]")
        if any(bps[i] >= bps[i + 1] for i in range(len(bps) - 1)):
            raise InvalidInput("breakpoints must be strictly increasing")
        if vals[0] != vals[-1]:
            raise InvalidInput("observable must close up: value(1) == value(0)")
        self.breakpoints = bps
        self.values = vals
        self._slopes = tuple(
            (vals[i + 1] - vals[i]) / (bps[i + 1] - bps[i])
            for i in range(len(bps) - 1)
        )
        self._bps_float = [float(b) for b in bps]
        self._tent_center: Fraction | None = None

    @staticmethod
    def constant(c: Fraction) -> "Observable":
        return Observable([ZERO, ONE], [Fraction(c), Fraction(c)])

    @staticmethod
    def tent(center: Fraction) -> "Observable":
        """Peak 1 at ``center``, 0 at the antipode, slopes +-2."""
        c = mod1(Fraction(center))
        anti = mod1(c + HALF)

        def val(x: Fraction) -> Fraction:
            r = mod1(x - c)
            d = r if r <= HALF else ONE - r
            return ONE - 2 * d

        bset = sorted({ZERO, c, anti})
        bps = bset + [ONE]
        phi = Observable(bps, [val(b) for b in bps])
        phi._tent_center = c
        return phi

    def evaluate(self, x: Fraction) -> Fraction:
        c = self._tent_center
        if c is not None:
            r = mod1(x - c)
            d = r if r <= HALF else ONE - r
            return ONE - 2 * d
        x = mod1(x)
        i = _locate(self.breakpoints, self._bps_float, x)
        return self.values[i] + self._slopes[i] * (x - self.breakpoints[i])

    def __call__(self, x: Fraction) -> Fraction:
        return self.evaluate(x)

    @property
    def sup_norm(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def range_on_arc(self, arc: Arc) -> tuple[Fraction, Fraction]:
        """Exact (min, max) over the closed arc."""
        cands: list[Fraction] = []
        for lo, hi in arc.intervals() or [(arc.start, arc.start)]:
            cands.append(self.evaluate(lo))
            cands.append(self.evaluate(hi))
            cands.extend(
                self.values[i]
                for i, b in enumerate(self.breakpoints)
                if lo < b < hi
            )
        return min(cands), max(cands)

    def oscillation_on_arc(self, arc: Arc) -> Fraction:
        lo, hi = self.range_on_arc(arc)
        return hi - lo

    def integral_on_interval(self, lo: Fraction, hi: Fraction) -> Fraction:
        """Exact integral over [lo, hi] inside [0, 1]."""
        if lo >= hi:
            return ZERO
        cuts = [lo] + [b for b in self.breakpoints if lo < b < hi] + [hi]
        total = ZERO
        for i in range(len(cuts) - 1):
            a, b = cuts[i], cuts[i + 1]
            total += (b - a) * (self.evaluate(a) + self.evaluate(b)) / 2
        return total
