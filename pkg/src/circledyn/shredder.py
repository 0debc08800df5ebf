"""Shredding perturbation for continuous PL circle maps, with exact verifier.

Given f and a scale eps, the constructor subdivides the circle into cells and
subcells, replaces f on the interior of every subcell by a constant anchor
value (keeping f's values at subcell boundaries, affine on two thin collars),
and returns the perturbed map together with a full report: trapping regions
built from interiors of subcells grouped by the eventual cycles of the cell
transition map, the per-region cyclic sets, and exact verification of the
five trapping properties.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InvalidInput, ResourceCap, VerificationFailure
from .exact import (
    ONE,
    ZERO,
    Arc,
    IntervalSet,
    mod1,
    signed_circle_offset,
)
from .orbits import orbit_averages
from .plmaps import Observable, PLCircleMap


@dataclass(frozen=True)
class ShredConfig:
    """Partition geometry knobs; default policies fill unset fields.

    ``cells`` is the coarse cell count (must satisfy the fineness condition
    (Lip(f)+1)/cells < eps), ``subdivisions`` the per-cell subcell count
    (must exceed 1/eps), ``delta`` the collar half-width.
    """

    cells: int | None = None
    subdivisions: int | None = None
    delta: Fraction | None = None

    def resolved(self, f: PLCircleMap, eps: Fraction) -> "ResolvedConfig":
        lip = f.lipschitz
        min_cells = math.floor((lip + 1) / eps) + 1
        cells = self.cells if self.cells is not None else min_cells
        if (lip + 1) * Fraction(1, cells) >= eps:
            raise InvalidInput(
                f"infeasible fineness: {cells} cells cannot keep the "
                f"perturbation below {eps}; need at least {min_cells} cells"
            )
        subs = (
            self.subdivisions
            if self.subdivisions is not None
            else math.floor(1 / eps) + 1
        )
        if subs * eps <= 1:
            raise InvalidInput(
                f"subdivision count {subs} must exceed 1/eps = {1 / eps}"
            )
        sub_len = Fraction(1, cells * subs)
        delta = self.delta
        if delta is None:
            delta = min(sub_len / 4, eps * sub_len / 4)
        if not (ZERO < delta < sub_len / 2):
            raise InvalidInput("delta must lie in (0, subcell/2)")
        if 2 * delta * cells * subs >= eps:
            raise InvalidInput(
                "delta too large: interiors would not cover measure > 1 - eps"
            )
        return ResolvedConfig(cells, subs, delta, sub_len)


@dataclass(frozen=True)
class ResolvedConfig:
    cells: int
    subdivisions: int
    delta: Fraction
    subcell_length: Fraction


@dataclass(frozen=True)
class Region:
    """One trapping region: interiors of the j-th subcells over a tau basin."""

    label: tuple[int, int]  # (orbit index r, subdivision j)
    arcs: tuple[Arc, ...]  # open delta-interiors
    cell_indices: tuple[int, ...]

    def measure(self) -> Fraction:
        return sum((a.length for a in self.arcs), start=ZERO)

    def open_set(self) -> IntervalSet:
        return IntervalSet.union_all(
            IntervalSet.open(lo, hi) for a in self.arcs for lo, hi in a.intervals()
        )

    def closed_set(self) -> IntervalSet:
        return IntervalSet.union_all(
            IntervalSet.from_arc_closed(a) for a in self.arcs
        )


@dataclass
class ItemVerdict:
    passed: bool
    slack: Fraction | None
    detail: str


@dataclass
class TrappingReport:
    """Everything the shredder built, plus verification results."""

    eps: Fraction
    delta: Fraction
    cells: tuple[Arc, ...]
    subcells: tuple[tuple[Arc, ...], ...]
    tau: tuple[int, ...]
    interior_cells: tuple[tuple[Arc, ...], ...]
    anchors: tuple[tuple[Fraction, ...], ...]
    orbits: tuple[tuple[int, ...], ...]  # periodic orbits of tau
    regions: tuple[Region, ...]
    cycles: dict[tuple[int, int], tuple[Arc, ...]]
    verification: "ShredVerification | None" = None

    @property
    def region_count(self) -> int:
        return len(self.regions)

    def region_of_point(self, x: Fraction) -> Region | None:
        x = mod1(x)
        for reg in self.regions:
            if any(a.contains(x) and a.length > 0 for a in reg.arcs):
                return reg
        return None


@dataclass
class ShredVerification:
    items: dict[str, ItemVerdict]

    @property
    def all_passed(self) -> bool:
        return all(v.passed for v in self.items.values())

    def summary_rows(self) -> list[tuple[str, str, str, str]]:
        rows = []
        for key in ("i", "ii", "iii", "iv", "v"):
            v = self.items[key]
            slack = "-" if v.slack is None else f"{v.slack}"
            rows.append(
                (key, "pass" if v.passed else "FAIL", slack, v.detail)
            )
        return rows


# ---------------------------------------------------------------------------
# Construction


def _tau_orbits(tau: Sequence[int]) -> tuple[tuple[tuple[int, ...], ...], list[int]]:
    """Periodic orbits of a functional graph and the orbit index of each i."""
    n = len(tau)
    landing = []
    for i in range(n):
        j = i
        for _ in range(n):
            j = tau[j]
        landing.append(j)
    cyclic = sorted(set(landing))
    orbits: list[tuple[int, ...]] = []
    assigned: dict[int, int] = {}
    for c in cyclic:
        if c in assigned:
            continue
        orbit = [c]
        j = tau[c]
        while j != c:
            orbit.append(j)
            j = tau[j]
        idx = len(orbits)
        orbits.append(tuple(orbit))
        for member in orbit:
            assigned[member] = idx
    basin = [assigned[landing[i]] for i in range(n)]
    return tuple(orbits), basin


def shred(
    f: PLCircleMap,
    eps: Fraction,
    cfg: ShredConfig | None = None,
) -> tuple[PLCircleMap, TrappingReport]:
    """Perturb f at scale eps into a map with small trapping regions.

    Returns the perturbed map g (c0-distance to f strictly below eps) and the
    report describing cells, anchors, regions, and cycles.  Verification is
    left to ``verify_shredding``.
    """
    eps = Fraction(eps)
    if not (ZERO < eps < ONE):
        raise InvalidInput("eps must lie in (0, 1)")
    rc = (cfg or ShredConfig()).resolved(f, eps)
    n_cells, n_subs, delta, sub_len = (
        rc.cells,
        rc.subdivisions,
        rc.delta,
        rc.subcell_length,
    )
    cell_len = Fraction(1, n_cells)

    cells = tuple(Arc(Fraction(i, n_cells), cell_len) for i in range(n_cells))
    subcells = tuple(
        tuple(
            Arc(Fraction(i, n_cells) + j * sub_len, sub_len)
            for j in range(n_subs)
        )
        for i in range(n_cells)
    )
    interiors = tuple(
        tuple(sc.shrink(delta) for sc in row) for row in subcells
    )
    anchors = tuple(tuple(sc.midpoint for sc in row) for row in subcells)

    # cell transition: where the midpoint of each cell lands
    tau = []
    mid_images = []
    for i in range(n_cells):
        y = f.evaluate(cells[i].midpoint)
        mid_images.append(y)
        tau.append(int(y * n_cells))  # floor: y in [t/n, (t+1)/n)
    tau = tuple(tau)

    # perturbed map: keep f at subcell boundaries, constant anchor on the
    # interior, affine collars; anchor lift representative chosen nearest the
    # image of the defining midpoint so the lift stays within the fine scale
    bps: list[Fraction] = []
    vals: list[Fraction] = []
    for i in range(n_cells):
        y_hat = f.lift_evaluate(cells[i].midpoint)
        for j in range(n_subs):
            a = subcells[i][j].start
            target = anchors[tau[i]][j]
            a_hat = y_hat + signed_circle_offset(target, mod1(y_hat))
            bps.extend([a, a + delta, a + sub_len - delta])
            vals.extend([f.lift_evaluate(a), a_hat, a_hat])
    bps.append(ONE)
    vals.append(f.lift_evaluate(ONE))
    g = PLCircleMap(bps, vals)

    orbits, basin = _tau_orbits(tau)
    regions = []
    for r in range(len(orbits)):
        members = tuple(i for i in range(n_cells) if basin[i] == r)
        for j in range(n_subs):
            regions.append(
                Region(
                    label=(r, j),
                    arcs=tuple(interiors[i][j] for i in members),
                    cell_indices=members,
                )
            )
    cycles: dict[tuple[int, int], tuple[Arc, ...]] = {}
    for r, orbit in enumerate(orbits):
        alpha = min(orbit)
        k = len(orbit)
        chain = []
        cur = alpha
        for _ in range(k):
            cur = tau[cur]
            chain.append(cur)
        for j in range(n_subs):
            cycles[(r, j)] = tuple(interiors[i][j] for i in chain)

    report = TrappingReport(
        eps=eps,
        delta=delta,
        cells=cells,
        subcells=subcells,
        tau=tau,
        interior_cells=interiors,
        anchors=anchors,
        orbits=orbits,
        regions=tuple(regions),
        cycles=cycles,
    )
    return g, report


# ---------------------------------------------------------------------------
# Verification


def _is_plateau(g: PLCircleMap, arc: Arc) -> Fraction | None:
    """The constant value of g on the closed arc, or None if not constant."""
    from bisect import bisect_left, bisect_right

    vals = set()
    for lo, hi in arc.intervals():
        vals.add(g.lift_evaluate(lo))
        vals.add(g.lift_evaluate(hi))
        i_lo = bisect_right(g.breakpoints, lo)
        i_hi = bisect_left(g.breakpoints, hi)
        vals.update(
            g.lift_evaluate(b) for b in g.breakpoints[i_lo:i_hi]
        )
        if len(vals) > 1:
            return None
    if len(vals) == 1:
        return mod1(vals.pop())
    return None


def verify_shredding(
    g: PLCircleMap,
    report: TrappingReport,
    preimage_interval_cap: int = 100_000,
) -> ShredVerification:
    """Exact verification of the five trapping-region properties."""
    eps = report.eps
    items: dict[str, ItemVerdict] = {}
    n_steps = len(report.tau)

    region_open = {reg.label: reg.open_set() for reg in report.regions}
    region_closed = {reg.label: reg.closed_set() for reg in report.regions}
    region_images = {
        reg.label: g.image_of_set(region_closed[reg.label])
        for reg in report.regions
    }

    # i) forward invariance: g(closure U) inside the open U
    ok_i = True
    slack_i: Fraction | None = None
    detail_i = ""
    for reg in report.regions:
        img = region_images[reg.label]
        u = region_open[reg.label]
        if not u.covers(img):
            ok_i = False
            detail_i = f"region {reg.label}: image escapes"
            slack_i = None
            break
        gap = u.min_gap_to_boundary(img)
        slack_i = gap if slack_i is None or gap < slack_i else slack_i
    items["i"] = ItemVerdict(ok_i, slack_i, detail_i or "g(cl U) strictly inside U")

    # ii) each region has measure < eps
    max_measure = max(reg.measure() for reg in report.regions)
    items["ii"] = ItemVerdict(
        max_measure < eps, eps - max_measure, f"max m(U) = {max_measure}"
    )

    # iii) regions cover measure > 1 - eps
    covered = sum((reg.measure() for reg in report.regions), start=ZERO)
    items["iii"] = ItemVerdict(
        covered > ONE - eps, covered - (ONE - eps), f"m(union U) = {covered}"
    )

    # iv) crushing: m(g(U)) < eps * m(U)
    ok_iv = True
    slack_iv: Fraction | None = None
    detail_iv = ""
    for reg in report.regions:
        img_measure = region_images[reg.label].measure()
        bound = eps * reg.measure()
        if img_measure >= bound:
            ok_iv = False
            detail_iv = (
                f"region {reg.label}: m(g(U)) = {img_measure} >= {bound}"
            )
            slack_iv = None
            break
        gap = bound - img_measure
        slack_iv = gap if slack_iv is None or gap < slack_iv else slack_iv
    items["iv"] = ItemVerdict(ok_iv, slack_iv, detail_iv or "images crushed")

    # v) cycles of small diameter absorbing the region
    ok_v = True
    slack_v: Fraction | None = None
    details_v = []
    for reg in report.regions:
        cyc = report.cycles[reg.label]
        k = len(cyc)
        # (a) diameters
        for w in cyc:
            d = w.diameter()
            if d >= eps:
                ok_v = False
                details_v.append(f"{reg.label}: diam W = {d} >= eps")
                break
            gap = eps - d
            slack_v = gap if slack_v is None or gap < slack_v else slack_v
        if not ok_v:
            break
        # (b) cyclic forward containment
        for idx in range(k):
            w_closed = IntervalSet.from_arc_closed(cyc[idx])
            nxt = IntervalSet.union_all(
                IntervalSet.open(lo, hi)
                for lo, hi in cyc[(idx + 1) % k].intervals()
            )
            img = g.image_of_set(w_closed)
            if not nxt.covers(img):
                ok_v = False
                details_v.append(f"{reg.label}: g(cl W^{idx+1}) escapes")
                break
            gap = nxt.min_gap_to_boundary(img)
            slack_v = gap if slack_v is None or gap < slack_v else slack_v
        if not ok_v:
            break
        # (c) closure(U) absorbed by the cycle within n_steps preimages
        w_union_open = IntervalSet.union_all(
            IntervalSet.open(lo, hi) for w in cyc for lo, hi in w.intervals()
        )
        plateau_values = []
        plateaus_ok = True
        for arc in reg.arcs:
            v = _is_plateau(g, arc)
            if v is None:
                plateaus_ok = False
                break
            plateau_values.append(v)
        if plateaus_ok:
            # g collapses each interior to a point, so absorption reduces to
            # chasing the anchor chain: g^m(closure arc) = {y_m} for m >= 1
            for arc, v in zip(reg.arcs, plateau_values):
                y = v
                absorbed = False
                for _ in range(n_steps):
                    if w_union_open.contains_point(y):
                        absorbed = True
                        break
                    y = g.evaluate(y)
                if not absorbed:
                    ok_v = False
                    details_v.append(
                        f"{reg.label}: plateau value never reaches cycle"
                    )
                    break
        else:
            # general route: iterated preimages of the open cycle union
            s = w_union_open
            absorbed = False
            for _ in range(n_steps + 1):
                if s.covers(region_closed[reg.label]):
                    absorbed = True
                    break
                s = s.union(g.preimage_of_set(s))
                if len(s.ivs) > preimage_interval_cap:
                    raise ResourceCap(
                        "preimage iteration exceeded the interval cap"
                    )
            if not (absorbed or s.covers(region_closed[reg.label])):
                ok_v = False
                details_v.append(f"{reg.label}: closure(U) not absorbed")
        if not ok_v:
            break
    items["v"] = ItemVerdict(
        ok_v, slack_v, "; ".join(details_v) or "cycles absorb the regions"
    )

    verification = ShredVerification(items)
    report.verification = verification
    return verification


# ---------------------------------------------------------------------------
# Witnesses


def singularity_witness(
    g: PLCircleMap, report: TrappingReport
) -> tuple[tuple[Arc, ...], Fraction, Fraction]:
    """The total-singularity witness V: m(V) > 1-eps while m(g(V)) < eps."""
    if report.verification is None or not report.verification.all_passed:
        raise VerificationFailure(
            "singularity witness requires a fully verified report"
        )
    arcs = tuple(a for reg in report.regions for a in reg.arcs)
    m_v = sum((a.length for a in arcs), start=ZERO)
    closed = IntervalSet.union_all(
        IntervalSet.from_arc_closed(a) for a in arcs
    )
    m_gv = g.image_of_set(closed).measure()
    if not (m_v > ONE - report.eps and m_gv < report.eps):
        raise VerificationFailure(
            f"no valid witness: m(V) = {m_v}, m(g(V)) = {m_gv}"
        )
    return arcs, m_v, m_gv


@dataclass(frozen=True)
class BirkhoffBracket:
    cycle_mean: Fraction  # average of phi over one exact cycle from x
    oscillation: Fraction  # max oscillation of phi over the cycle sets
    remainder: int  # r = n mod k
    lower: Fraction
    upper: Fraction
    empirical: Fraction
    contains: bool


def birkhoff_gap_bound(
    g: PLCircleMap,
    report: TrappingReport,
    phi: Observable,
    x: Fraction,
    n: int,
) -> BirkhoffBracket:
    """Exact finite-average bracket around the cycle mean for x in a cycle set."""
    if n < 1:
        raise InvalidInput("horizon must be >= 1")
    x = mod1(Fraction(x))
    home = None
    for label, cyc in report.cycles.items():
        for idx, w in enumerate(cyc):
            if w.length > 0 and w.contains(x):
                home = (label, idx)
                break
        if home:
            break
    if home is None:
        raise InvalidInput("point does not lie in any cycle set of the report")
    label, _ = home
    cyc = report.cycles[label]
    k = len(cyc)
    orbit = [x]
    for _ in range(k - 1):
        orbit.append(g.evaluate(orbit[-1]))
    gamma = sum((phi.evaluate(p) for p in orbit), start=ZERO) / k
    osc = max(phi.oscillation_on_arc(w) for w in cyc)
    r = n % k
    norm = phi.sup_norm
    lower = gamma - osc - Fraction(r, n) * norm
    upper = gamma + osc + Fraction(r, n) * norm
    res = orbit_averages(g, x, [phi], [n])
    empirical = res.averages[0][n]
    return BirkhoffBracket(
        cycle_mean=gamma,
        oscillation=osc,
        remainder=r,
        lower=lower,
        upper=upper,
        empirical=empirical,
        contains=lower <= empirical <= upper,
    )
