"""File formats: JSON records with rationals as "num/den" strings, CSV exports.

All writers emit canonical JSON (sorted keys, fixed separators, trailing
newline) so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Sequence

from .errors import InvalidInput
from .exact import Arc, format_rational, parse_rational
from .measures import CircleMeasure, CylinderSpec
from .partitions import ConsistentFamily
from .plmaps import Observable, PLCircleMap
from .shredder import Region, TrappingReport


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ": "), indent=1) + "\n"


def _rat(x: Fraction) -> str:
    return format_rational(x)


# -- maps


def map_to_record(f: PLCircleMap) -> dict:
    return {
        "breakpoints": [_rat(b) for b in f.breakpoints],
        "liftValues": [_rat(v) for v in f.lift_values],
    }


def map_from_record(rec: dict) -> PLCircleMap:
    try:
        bps = [parse_rational(s) for s in rec["breakpoints"]]
        vals = [parse_rational(s) for s in rec["liftValues"]]
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed map record: {exc}") from exc
    return PLCircleMap(bps, vals)


def observable_to_record(phi: Observable) -> dict:
    return {
        "breakpoints": [_rat(b) for b in phi.breakpoints],
        "values": [_rat(v) for v in phi.values],
    }


def observable_from_record(rec: dict) -> Observable:
    try:
        bps = [parse_rational(s) for s in rec["breakpoints"]]
        vals = [parse_rational(s) for s in rec["values"]]
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed observable record: {exc}") from exc
    return Observable(bps, vals)


# -- measures


def measure_to_record(mu: CircleMeasure) -> dict:
    return {
        "atoms": [
            {"at": _rat(p), "mass": _rat(w)} for p, w in mu.atoms
        ],
        "pieces": [
            {"start": _rat(lo), "length": _rat(hi - lo), "density": _rat(d)}
            for lo, hi, d in mu.pieces
        ],
    }


def measure_from_record(rec: dict) -> CircleMeasure:
    try:
        atoms = [
            (parse_rational(a["at"]), parse_rational(a["mass"]))
            for a in rec.get("atoms", [])
        ]
        pieces = []
        for p in rec.get("pieces", []):
            start = parse_rational(p["start"])
            length = parse_rational(p["length"])
            density = parse_rational(p["density"])
            arc = Arc.make(start, length)
            for lo, hi in arc.intervals():
                pieces.append((lo, hi, density))
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed measure record: {exc}") from exc
    return CircleMeasure(atoms=atoms, pieces=pieces)


# -- cylinder specs


def spec_to_record(spec: CylinderSpec) -> dict:
    return {
        "ell": spec.ell,
        "p": spec.level,
        "values": {
            "".join(map(str, w)): _rat(v)
            for w, v in sorted(spec.values.items())
            if v > 0
        },
    }


def spec_from_record(rec: dict) -> CylinderSpec:
    try:
        ell = int(rec["ell"])
        p = int(rec["p"])
        table = {k: parse_rational(v) for k, v in rec["values"].items()}
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed cylinder spec record: {exc}") from exc
    return CylinderSpec.from_strings(ell, p, table)


# -- families


def family_to_record(fam: ConsistentFamily) -> dict:
    return {
        "ell": fam.ell,
        "depth": fam.depth,
        "levels": [
            [
                {"start": _rat(c.start), "length": _rat(c.length)}
                for c in level
            ]
            for level in fam.levels
        ],
    }


def family_from_record(rec: dict, allow_degenerate: bool = False) -> ConsistentFamily:
    try:
        ell = int(rec["ell"])
        depth = int(rec["depth"])
        levels = tuple(
            tuple(
                Arc(parse_rational(c["start"]), parse_rational(c["length"]))
                for c in level
            )
            for level in rec["levels"]
        )
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed family record: {exc}") from exc
    return ConsistentFamily(ell, depth, levels, allow_degenerate=allow_degenerate)


# -- trapping reports


def _arc_record(a: Arc) -> dict:
    return {"start": _rat(a.start), "length": _rat(a.length)}


def report_to_record(report: TrappingReport) -> dict:
    rec = {
        "eps": _rat(report.eps),
        "delta": _rat(report.delta),
        "cells": [_arc_record(c) for c in report.cells],
        "subcells": [
            [_arc_record(c) for c in row] for row in report.subcells
        ],
        "tau": list(report.tau),
        "interiorCells": [
            [_arc_record(c) for c in row] for row in report.interior_cells
        ],
        "anchors": [[_rat(p) for p in row] for row in report.anchors],
        "orbits": [list(o) for o in report.orbits],
        "regions": [
            {
                "label": list(reg.label),
                "cells": list(reg.cell_indices),
                "arcs": [_arc_record(a) for a in reg.arcs],
            }
            for reg in report.regions
        ],
        "cycles": [
            {
                "label": list(label),
                "sets": [_arc_record(a) for a in arcs],
            }
            for label, arcs in sorted(report.cycles.items())
        ],
    }
    if report.verification is not None:
        rec["verification"] = {
            key: {
                "passed": v.passed,
                "slack": None if v.slack is None else _rat(v.slack),
                "detail": v.detail,
            }
            for key, v in report.verification.items.items()
        }
    return rec


def _arc_from_record(rec: dict) -> Arc:
    return Arc(parse_rational(rec["start"]), parse_rational(rec["length"]))


def report_from_record(rec: dict) -> TrappingReport:
    try:
        regions = tuple(
            Region(
                label=tuple(r["label"]),
                arcs=tuple(_arc_from_record(a) for a in r["arcs"]),
                cell_indices=tuple(r["cells"]),
            )
            for r in rec["regions"]
        )
        cycles = {
            tuple(c["label"]): tuple(_arc_from_record(a) for a in c["sets"])
            for c in rec["cycles"]
        }
        report = TrappingReport(
            eps=parse_rational(rec["eps"]),
            delta=parse_rational(rec["delta"]),
            cells=tuple(_arc_from_record(a) for a in rec["cells"]),
            subcells=tuple(
                tuple(_arc_from_record(a) for a in row)
                for row in rec["subcells"]
            ),
            tau=tuple(rec["tau"]),
            interior_cells=tuple(
                tuple(_arc_from_record(a) for a in row)
                for row in rec["interiorCells"]
            ),
            anchors=tuple(
                tuple(parse_rational(p) for p in row)
                for row in rec["anchors"]
            ),
            orbits=tuple(tuple(o) for o in rec["orbits"]),
            regions=regions,
            cycles=cycles,
        )
    except (KeyError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed report record: {exc}") from exc
    return report


# -- CSV helpers


def csv_lines(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    out = [",".join(header)]
    for row in rows:
        out.append(",".join(str(c) for c in row))
    return "\n".join(out) + "\n"


def cdf_samples(mu: CircleMeasure, count: int = 256) -> list[tuple[str, str]]:
    rows = []
    for i in range(count + 1):
        x = Fraction(i, count)
        rows.append((_rat(x), _rat(mu.cdf_closed(x) if x < 1 else mu.total_mass)))
    return rows
