import json
from fractions import Fraction
from pathlib import Path

import pytest

from circledyn import formats
from circledyn.cli import main
from circledyn.expanding import expanding_map
from circledyn.measures import CircleMeasure, CylinderSpec
from circledyn.partitions import family_from_homeo
from circledyn.plmaps import Observable, PLCircleMap
from circledyn.shredder import shred, verify_shredding

from conftest import random_pl_homeo, random_pl_map

F = Fraction


class TestFormats:
    def test_map_roundtrip(self, rng):
        f = random_pl_map(rng, degree=2)
        rec = formats.map_to_record(f)
        assert formats.map_from_record(json.loads(json.dumps(rec))) == f

    def test_measure_roundtrip(self):
        mu = CircleMeasure(
            atoms=[(F(1, 3), F(1, 4))],
            pieces=[(F(0), F(1, 4), F(2)), (F(1, 2), F(3, 4), F(1))],
        )
        rec = formats.measure_to_record(mu)
        assert formats.measure_from_record(rec) == mu

    def test_spec_roundtrip(self):
        spec = CylinderSpec.bernoulli([F(2, 3), F(1, 3)], 3)
        rec = formats.spec_to_record(spec)
        assert formats.spec_from_record(rec) == spec

    def test_family_roundtrip(self, rng):
        fam = family_from_homeo(random_pl_homeo(rng), 2, 3)
        rec = formats.family_to_record(fam)
        assert formats.family_from_record(rec) == fam

    def test_report_roundtrip(self):
        g, report = shred(expanding_map(2), F(1, 2))
        rec = formats.report_to_record(report)
        report2 = formats.report_from_record(json.loads(json.dumps(rec)))
        assert report2.tau == report.tau
        assert report2.regions == report.regions
        assert report2.cycles == report.cycles
        assert verify_shredding(g, report2).all_passed

    def test_observable_roundtrip(self):
        phi = Observable.tent(F(3, 8))
        rec = formats.observable_to_record(phi)
        phi2 = formats.observable_from_record(rec)
        assert phi2.breakpoints == phi.breakpoints
        assert phi2.values == phi.values

    def test_malformed_rejected(self):
        from circledyn.errors import InvalidInput

        with pytest.raises(InvalidInput):
            formats.map_from_record({"breakpoints": ["0/1"]})


@pytest.fixture
def workdir(tmp_path: Path) -> Path:
    ident = formats.dumps(formats.map_to_record(PLCircleMap.identity()))
    (tmp_path / "identity.json").write_text(ident)
    e2 = formats.dumps(formats.map_to_record(expanding_map(2)))
    (tmp_path / "e2.json").write_text(e2)
    rot = formats.dumps(formats.map_to_record(PLCircleMap.rotation(F(2, 5))))
    (tmp_path / "r25.json").write_text(rot)
    leb = formats.dumps(formats.measure_to_record(CircleMeasure.lebesgue()))
    (tmp_path / "lebesgue.json").write_text(leb)
    dirac = formats.dumps(
        formats.spec_to_record(CylinderSpec.dirac_zero(2, 3))
    )
    (tmp_path / "dirac.json").write_text(dirac)
    return tmp_path


class TestCli:
    def test_demo_figure3(self, workdir, capsys):
        code = main(
            ["--out-dir", str(workdir / "out"), "demo", "--figure3"]
        )
        out = capsys.readouterr().out
        assert code == 0
        assert "trapping regions: 8" in out

    def test_shred_identity(self, workdir, capsys):
        code = main(
            [
                "--out-dir", str(workdir / "out"),
                "shred", str(workdir / "identity.json"), "--eps", "1/2",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "pass" in out
        assert "tau = " in out
        report = json.loads((workdir / "out" / "report.json").read_text())
        assert report["verification"]["iv"]["passed"]

    def test_shred_e2_exact_distance_under_eps(self, workdir, capsys):
        code = main(
            [
                "--out-dir", str(workdir / "out2"),
                "shred", str(workdir / "e2.json"), "--eps", "1/10",
            ]
        )
        assert code == 0
        g = formats.map_from_record(
            json.loads((workdir / "out2" / "perturbed.json").read_text())
        )
        assert expanding_map(2).c0_distance(g) < F(1, 10)

    def test_rotation_command(self, workdir, capsys):
        code = main(["rotation", str(workdir / "r25.json")])
        assert code == 0
        assert capsys.readouterr().out.strip() == "2/5"

    def test_pushforward_invariance(self, workdir):
        code = main(
            [
                "--out-dir", str(workdir / "out3"),
                "pushforward", str(workdir / "e2.json"),
                str(workdir / "lebesgue.json"), "--iters", "5",
            ]
        )
        assert code == 0
        mu = formats.measure_from_record(
            json.loads((workdir / "out3" / "measure.json").read_text())
        )
        assert mu == CircleMeasure.lebesgue()

    def test_wicked_window(self, workdir, capsys):
        code = main(
            [
                "--out-dir", str(workdir / "out4"),
                "wicked", str(workdir / "identity.json"),
                str(workdir / "dirac.json"),
                "--ell", "2", "--eps", "1/4", "--n", "8",
            ]
        )
        assert code == 0
        rows = (workdir / "out4" / "window.csv").read_text().strip().splitlines()
        assert rows[0] == "k,spec_distance,in_window"
        for line in rows[1:]:
            k, dist, inw = line.split(",")
            if int(inw) and int(k) >= 2:
                assert dist == "0/1"

    def test_wicked_lebesgue_target_all_zeros(self, workdir, tmp_path):
        leb_spec = formats.dumps(
            formats.spec_to_record(CylinderSpec.lebesgue(2, 2))
        )
        (tmp_path / "leb_spec.json").write_text(leb_spec)
        code = main(
            [
                "--out-dir", str(workdir / "outL"),
                "wicked", str(workdir / "identity.json"),
                str(tmp_path / "leb_spec.json"),
                "--ell", "2", "--eps", "1/4", "--n", "7",
            ]
        )
        assert code == 0
        rows = (workdir / "outL" / "window.csv").read_text().strip().splitlines()
        assert all(line.split(",")[1] == "0/1" for line in rows[1:])

    def test_classify_identity(self, workdir, capsys):
        code = main(
            [
                "--out-dir", str(workdir / "out5"),
                "classify", str(workdir / "identity.json"),
                "--grid", "50", "--horizons", "10,100",
            ]
        )
        assert code == 0
        rec = json.loads((workdir / "out5" / "classification.json").read_text())
        assert rec["wholesome"]["status"] == "witnessed"
        assert rec["wonderful"]["status"] == "refuted"

    def test_birkhoff_command(self, workdir, capsys):
        code = main(
            [
                "birkhoff", str(workdir / "identity.json"),
                "--x", "1/3", "--obs", "tent:1/3", "--horizons", "10,100",
            ]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "10,1/1" in out

    def test_invalid_input_exit_code(self, workdir, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"breakpoints": ["0/1"], "liftValues": ["0/1"]}')
        code = main(["shred", str(bad), "--eps", "1/2"])
        assert code == 2

    def test_determinism_byte_identical(self, workdir):
        outs = []
        for name in ("d1", "d2"):
            main(
                [
                    "--out-dir", str(workdir / name),
                    "shred", str(workdir / "e2.json"), "--eps", "1/5",
                ]
            )
            outs.append(
                {
                    p.name: p.read_bytes()
                    for p in sorted((workdir / name).iterdir())
                    if p.name != "manifest.json"
                }
            )
        assert outs[0] == outs[1]

    def test_cesaro_command(self, workdir):
        code = main(
            [
                "--out-dir", str(workdir / "out6"),
                "cesaro", str(workdir / "e2.json"),
                str(workdir / "lebesgue.json"), "--n", "4",
            ]
        )
        assert code == 0
        mu = formats.measure_from_record(
            json.loads((workdir / "out6" / "measure.json").read_text())
        )
        assert mu == CircleMeasure.lebesgue()

    def test_resource_cap_exit_code(self, workdir, tmp_path):
        # uneven degree-3 map: push-forward complexity grows per step and a
        # tiny cap must trip the resource exit code
        bumpy = formats.map_to_record(
            PLCircleMap([F(0), F(1, 3), F(1)], [F(0), F(3, 2), F(3)])
        )
        (tmp_path / "bumpy.json").write_text(formats.dumps(bumpy))
        code = main(
            [
                "--out-dir", str(workdir / "out8"),
                "--max-breakpoints", "10",
                "cesaro", str(tmp_path / "bumpy.json"),
                str(workdir / "lebesgue.json"), "--n", "30",
            ]
        )
        assert code == 3

    def test_verify_command(self, workdir):
        main(
            [
                "--out-dir", str(workdir / "out7"),
                "shred", str(workdir / "e2.json"), "--eps", "1/5",
            ]
        )
        code = main(
            [
                "verify",
                str(workdir / "out7" / "perturbed.json"),
                str(workdir / "out7" / "report.json"),
            ]
        )
        assert code == 0
