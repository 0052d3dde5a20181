"""Report rendering: line formats, identity slugs, deterministic JSON."""
import json
from fractions import Fraction

from spin_g.chartcalc import ResidualReport
from spin_g.homogeneous import LiftReport
from spin_g.report import CheckRecord, Report, frac_str
from spin_g.scalars import Scalar


class TestCheckRecord:
    def test_exact_line(self):
        r = CheckRecord("torsion holds", "connection-torsion", True, True)
        assert r.line() == "[PASS] torsion holds: exact [connection-torsion]"

    def test_residual_line(self):
        r = CheckRecord(
            "some identity", "check", False, False, residual=3.25e-7, tolerance=1e-8
        )
        assert r.line() == "[FAIL] some identity: residual 3.250e-07 tol 1e-08 [check]"

    def test_note_suffix(self):
        r = CheckRecord("a", "check", True, True, note="2 points dropped")
        assert r.line().endswith("[check]  (2 points dropped)")

    def test_dict_omits_residual_when_exact(self):
        r = CheckRecord("a", "check", True, True)
        assert "residual" not in r.to_dict()
        r2 = CheckRecord("a", "check", True, False, residual=0.0, tolerance=1e-8)
        assert r2.to_dict()["residual"] == 0.0


class TestIdentityTags:
    def test_known_names_resolve(self):
        rep = Report("verify", "s")
        rep.add_exact("first Bianchi identity", True)
        assert rep.checks[0].identity == "first-bianchi"

    def test_prefix_rule(self):
        rep = Report("verify", "s")
        rep.add_residual("Killing equation for field 'rot'", 0.0, 1e-8)
        assert rep.checks[0].identity == "killing-equation"

    def test_lift_prefix_stripped(self):
        rep = Report("lift", "s")
        rep.add_exact(
            "[charge1] torsion: so-parts reproduce the m-component of every bracket",
            True,
        )
        assert rep.checks[0].identity == "connection-torsion"

    def test_unknown_name_falls_back(self):
        rep = Report("verify", "s")
        rep.add_exact("novelty", True)
        assert rep.checks[0].identity == "check"


class TestReport:
    def make(self):
        rep = Report("nomizu", "scene-x")
        rr = ResidualReport()
        rr.add("Killing equation for field 'T1'", 1.2e-10, 1e-8)
        rep.extend_residuals(rr)
        lr = LiftReport(
            [("torsion: so-parts reproduce the m-component of every bracket", True, "")]
        )
        rep.extend_exact(lr, prefix="[euclidean] ")
        rep.payload["dimension"] = 0
        rep.payload["curvature"] = {"so": [["0", "1"]], "aux": ["-1/2"]}
        return rep

    def test_ok_aggregates(self):
        rep = self.make()
        assert rep.ok
        rep.add_exact("x", False)
        assert not rep.ok

    def test_text_layout(self):
        lines = self.make().to_text().splitlines()
        assert lines[0] == "spin-g report: nomizu"
        assert lines[1] == "scene: scene-x"
        assert lines[-1] == "result: PASS"
        # payload keys render sorted
        ci = next(i for i, l in enumerate(lines) if l == "curvature:")
        assert lines[ci + 1].startswith("  aux:")
        di = next(i for i, l in enumerate(lines) if l.startswith("dimension:"))
        assert di > ci

    def test_prefixed_name_in_text_but_tagged(self):
        text = self.make().to_text()
        assert "[PASS] [euclidean] torsion" in text
        assert "[connection-torsion]" in text

    def test_json_deterministic_and_versioned(self):
        rep = self.make()
        j1, j2 = rep.to_json(), rep.to_json()
        assert j1 == j2
        doc = json.loads(j1)
        assert doc["report_version"] == 1
        assert doc["ok"] is True
        assert doc["command"] == "nomizu"
        assert [c["identity"] for c in doc["checks"]] == [
            "killing-equation",
            "connection-torsion",
        ]
        # key order is sorted at every level
        assert j1.index('"checks"') < j1.index('"command"') < j1.index('"ok"')

    def test_json_ends_with_newline(self):
        assert self.make().to_json().endswith("\n")
        assert self.make().to_text().endswith("\n")


class TestFracStr:
    def test_fraction(self):
        assert frac_str(Fraction(-3, 2)) == "-3/2"

    def test_scalar(self):
        assert frac_str(Scalar.of(Fraction(5, 4))) == "5/4"
