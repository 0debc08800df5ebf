"""Exact Birkhoff averages along orbits, with cycle detection.

Point orbits of rational points under PL maps are exact; orbits that become
periodic (anchors of shredded maps, rational rotations, base-l expansions of
rationals) are detected by exact repetition, after which every average has a
closed form.  Denominator growth is guarded: maps that contract onto
irrational-like grids blow up rational complexity, and such points are
reported as inconclusive rather than approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput
from .exact import ZERO, mod1
from .plmaps import Observable, PLCircleMap


@dataclass
class OrbitAverages:
    """Averages of a battery of observables at several horizons."""

    horizons: tuple[int, ...]
    averages: list[dict[int, Fraction]]  # per observable: horizon -> average
    eventually_periodic: bool
    preperiod: int | None
    period: int | None
    limits: list[Fraction] | None  # per observable, when periodic
    inconclusive: bool
    steps_computed: int
    cycle_min: Fraction | None = None  # smallest point on the detected cycle

    def gap(self, obs_index: int) -> Fraction:
        """Spread of the finite averages across horizons for one observable.

        Exactly zero when the orbit was proven eventually periodic: the
        Birkhoff limit exists and the asymptotic spread vanishes.
        """
        if self.eventually_periodic:
            return ZERO
        vals = list(self.averages[obs_index].values())
        return max(vals) - min(vals)

    def max_gap(self) -> Fraction:
        return max(self.gap(i) for i in range(len(self.averages)))


def _replay(
    f: PLCircleMap,
    observables: Sequence[Observable],
    x0: Fraction,
    s: int,
    period: int,
    rems: Sequence[int],
) -> tuple[tuple[Fraction, ...], dict[int, tuple[Fraction, ...]]]:
    """Cumulative observable sums at step s and at s+rem for each rem."""
    n_obs = len(observables)
    sums = [ZERO] * n_obs
    cur = x0
    prefix_s: tuple[Fraction, ...] | None = None
    partials: dict[int, tuple[Fraction, ...]] = {}
    want = set(rems)
    if 0 in want:
        partials[0] = (ZERO,) * n_obs
        want.discard(0)
    last = s + (max(want) if want else 0)
    for step in range(last + 1):
        if step == s:
            prefix_s = tuple(sums)
        if step > s and (step - s) in want:
            partials[step - s] = tuple(
                sums[i] - prefix_s[i] for i in range(n_obs)
            )
        if step == last:
            break
        for i, phi in enumerate(observables):
            sums[i] += phi.evaluate(cur)
        cur = f.evaluate(cur)
    if prefix_s is None:
        prefix_s = tuple(sums)
    return prefix_s, partials


def _orbit_averages_tent_fast(
    f: PLCircleMap,
    x: Fraction,
    centers: list[Fraction],
    horizons: tuple[int, ...],
    denominator_bit_cap: int,
) -> OrbitAverages:
    """Integer-arithmetic engine for batteries of tent observables.

    Works on unreduced integer pairs for the map step and accumulates tent
    values as integer sums grouped by denominator; exactness is identical to
    the generic path, only the representation differs.
    """
    hs = horizons
    n_max = hs[-1]
    hset = set(hs)
    n_obs = len(centers)
    cns = [c.numerator for c in centers]
    cds = [c.denominator for c in centers]

    bps = f.breakpoints
    hints = f._bps_float
    pieces = []
    for i in range(len(bps) - 1):
        s = f._slopes[i]
        b = bps[i]
        v = f.lift_values[i]
        pieces.append(
            (b.numerator, b.denominator, s.numerator, s.denominator,
             v.numerator, v.denominator)
        )
    from bisect import bisect_right

    def locate(p: int, q: int, xf: float) -> int:
        i = bisect_right(hints, xf) - 1
        if i < 0:
            i = 0
        last = len(bps) - 2
        if i > last:
            i = last
        while i < last:
            nb = bps[i + 1]
            if nb.numerator * q <= p * nb.denominator:
                i += 1
            else:
                break
        while i > 0:
            cb = bps[i]
            if cb.numerator * q > p * cb.denominator:
                i -= 1
            else:
                break
        return i

    from math import gcd

    # accumulators: per observable, integer sums grouped by 2*q*cd
    acc: list[dict[int, int]] = [dict() for _ in range(n_obs)]
    averages: list[dict[int, Fraction]] = [dict() for _ in range(n_obs)]
    seen: dict[tuple[int, int], int] = {}

    def totals() -> list[Fraction]:
        out = []
        for j in range(n_obs):
            t = ZERO
            for den, num in acc[j].items():
                t += Fraction(num, den)
            out.append(t)
        return out

    p, q = x.numerator, x.denominator
    step = 0
    while step < n_max:
        key = (p, q)
        prev = seen.get(key)
        if prev is not None:
            sums = totals()
            averages_done = averages
            s0 = prev
            period = step - s0
            rems = {(n - s0) % period for n in hs if n > step}
            observables = [Observable.tent(c) for c in centers]
            prefix_s, partials = _replay(
                f, observables, x, s0, period, rems
            )
            cycle_sums = tuple(sums[i] - prefix_s[i] for i in range(n_obs))
            for n in hs:
                if n <= step:
                    continue
                whole, rem = divmod(n - s0, period)
                tail = partials.get(rem, (ZERO,) * n_obs)
                for i in range(n_obs):
                    total = prefix_s[i] + whole * cycle_sums[i] + tail[i]
                    averages_done[i][n] = total / n
            limits = [cycle_sums[i] / period for i in range(n_obs)]
            return OrbitAverages(
                hs, averages_done, True, s0, period, limits, False, step,
                cycle_min=_cycle_min(f, Fraction(p, q), period),
            )
        seen[key] = step
        if q.bit_length() > denominator_bit_cap:
            return OrbitAverages(
                hs, averages, False, None, None, None, True, step
            )
        # accumulate tent values: tent(x) = (q*cd - 2*fold) / (q*cd)
        for j in range(n_obs):
            cd = cds[j]
            qc = q * cd
            n_off = (p * cd - cns[j] * q) % qc
            if 2 * n_off > qc:
                n_off = qc - n_off
            d = acc[j]
            d[qc] = d.get(qc, 0) + (qc - 2 * n_off)
        step += 1
        if step in hset:
            t = totals()
            for i in range(n_obs):
                averages[i][step] = t[i] / step
        # map step in integers
        i = locate(p, q, p / q)
        bn, bd, sn, sd, vn, vd = pieces[i]
        tn = p * bd - bn * q
        td = q * bd
        yn = vn * sd * td + vd * sn * tn
        yd = vd * sd * td
        yn %= yd
        g = gcd(yn, yd)
        p, q = yn // g, yd // g

    cur = Fraction(p, q)
    eventually_periodic = False
    preperiod = period_val = None
    limits = None
    cyc_min = None
    prev = seen.get((p, q))
    if prev is not None:
        sums = totals()
        eventually_periodic = True
        preperiod = prev
        period_val = step - prev
        observables = [Observable.tent(c) for c in centers]
        prefix_s, _ = _replay(f, observables, x, prev, period_val, ())
        cycle_sums = tuple(sums[i] - prefix_s[i] for i in range(n_obs))
        limits = [cycle_sums[i] / period_val for i in range(n_obs)]
        cyc_min = _cycle_min(f, cur, period_val)
    return OrbitAverages(
        hs, averages, eventually_periodic, preperiod, period_val, limits,
        False, step, cycle_min=cyc_min,
    )


def orbit_averages(
    f: PLCircleMap,
    x: Fraction,
    observables: Sequence[Observable],
    horizons: Sequence[int],
    denominator_bit_cap: int = 4096,
    detect_cycles: bool = True,
) -> OrbitAverages:
    """Exact (1/n) sums of phi over the orbit of x, at each horizon n."""
    if not horizons or min(horizons) < 1:
        raise InvalidInput("horizons must be positive")
    hs = tuple(sorted(set(int(h) for h in horizons)))
    n_max = hs[-1]
    n_obs = len(observables)
    x = mod1(Fraction(x))

    centers = [phi._tent_center for phi in observables]
    if detect_cycles and n_obs and all(c is not None for c in centers):
        return _orbit_averages_tent_fast(
            f, x, centers, hs, denominator_bit_cap
        )

    sums = [ZERO] * n_obs
    averages: list[dict[int, Fraction]] = [dict() for _ in range(n_obs)]
    seen: dict[tuple[int, int], int] = {}
    hset = set(hs)

    cur = x
    step = 0
    evaluate = f.evaluate
    while step < n_max:
        if detect_cycles:
            key = (cur.numerator, cur.denominator)
            prev = seen.get(key)
            if prev is not None:
                s = prev
                period = step - s
                rems = {(n - s) % period for n in hs if n > step}
                prefix_s, partials = _replay(
                    f, observables, x, s, period, rems
                )
                cycle_sums = tuple(
                    sums[i] - prefix_s[i] for i in range(n_obs)
                )
                for n in hs:
                    if n <= step:
                        continue
                    whole, rem = divmod(n - s, period)
                    tail = partials.get(rem, (ZERO,) * n_obs)
                    for i in range(n_obs):
                        total = (
                            prefix_s[i] + whole * cycle_sums[i] + tail[i]
                        )
                        averages[i][n] = total / n
                limits = [cycle_sums[i] / period for i in range(n_obs)]
                return OrbitAverages(
                    hs, averages, True, s, period, limits, False, step,
                    cycle_min=_cycle_min(f, cur, period),
                )
            seen[key] = step
        if cur.denominator.bit_length() > denominator_bit_cap:
            return OrbitAverages(
                hs, averages, False, None, None, None, True, step
            )
        for i in range(n_obs):
            sums[i] += observables[i].evaluate(cur)
        step += 1
        if step in hset:
            for i in range(n_obs):
                averages[i][step] = sums[i] / step
        cur = evaluate(cur)

    eventually_periodic = False
    preperiod = period_val = None
    limits = None
    cyc_min = None
    if detect_cycles:
        key = (cur.numerator, cur.denominator)
        prev = seen.get(key)
        if prev is not None:
            s = prev
            eventually_periodic = True
            preperiod = s
            period_val = step - s
            prefix_s, _ = _replay(f, observables, x, s, step - s, ())
            cycle_sums = tuple(sums[i] - prefix_s[i] for i in range(n_obs))
            limits = [cycle_sums[i] / period_val for i in range(n_obs)]
            cyc_min = _cycle_min(f, cur, period_val)
    return OrbitAverages(
        hs, averages, eventually_periodic, preperiod, period_val, limits,
        False, step, cycle_min=cyc_min,
    )


def _cycle_min(f: PLCircleMap, point_on_cycle: Fraction, period: int) -> Fraction:
    best = point_on_cycle
    y = point_on_cycle
    for _ in range(period - 1):
        y = f.evaluate(y)
        if y < best:
            best = y
    return best


def birkhoff_average(
    f: PLCircleMap, x: Fraction, phi: Observable, n: int
) -> Fraction:
    """Exact finite Birkhoff average (1/n) sum_{k<n} phi(f^k(x))."""
    res = orbit_averages(f, x, [phi], [n])
    return res.averages[0][n]


def birkhoff_gap(
    f: PLCircleMap,
    x: Fraction,
    phi: Observable,
    horizons: Sequence[int],
) -> Fraction:
    """Spread max-min of the exact averages over the given horizons."""
    res = orbit_averages(f, x, [phi], horizons)
    if res.inconclusive:
        raise InvalidInput("orbit complexity exceeded the exact-arithmetic cap")
    return max(res.averages[0].values()) - min(res.averages[0].values())
