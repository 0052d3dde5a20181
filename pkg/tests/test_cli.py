"""End-to-end command line contract: golden reports, exit codes, diagnostics."""
import json

import pytest

from conftest import GOLDEN_REPORTS, ROOT, run_cli

# every frozen report with the invocation that produced it and its exit status
GOLDEN = [
    ("flat-gauge-vector.verify.txt", ["verify", "scenes/flat-gauge-vector.json"], 0),
    ("flat-gauge-spinor.verify.txt", ["verify", "scenes/flat-gauge-spinor.json"], 0),
    ("polar-chart.verify.txt", ["verify", "scenes/polar-chart.json"], 0),
    ("round-sphere-lifts.verify.txt", ["verify", "scenes/round-sphere-lifts.json"], 0),
    (
        "flat-plane-klein.nomizu.txt",
        ["nomizu", "scenes/flat-plane-klein.json", "--torsion-free"],
        0,
    ),
    (
        "round-sphere-lifts.nomizu.json",
        ["nomizu", "scenes/round-sphere-lifts.json", "--torsion-free", "--json"],
        0,
    ),
    (
        "round-sphere-lifts.conjugacy.txt",
        ["lift", "scenes/round-sphere-lifts.json", "conjugacy"],
        0,
    ),
    ("round-sphere-lifts.parity.txt", ["lift", "scenes/round-sphere-lifts.json", "parity"], 0),
    (
        "sphere-su2-lifts.reducibility.txt",
        ["lift", "scenes/sphere-su2-lifts.json", "reducibility"],
        0,
    ),
    ("boost-time-reversal.orient.txt", ["lift", "scenes/boost-time-reversal.json", "orient"], 1),
]


@pytest.fixture(autouse=True)
def repo_cwd(monkeypatch):
    monkeypatch.chdir(ROOT)
    monkeypatch.delenv("SPIN_G_TOL", raising=False)


class TestGoldenReports:
    @pytest.mark.parametrize("frozen,argv,want_code", GOLDEN, ids=[g[0] for g in GOLDEN])
    def test_byte_identical_across_runs(self, frozen, argv, want_code):
        code1, out1, err1 = run_cli(argv)
        code2, out2, _err2 = run_cli(argv)
        assert (code1, code2) == (want_code, want_code)
        assert err1 == ""
        assert out1 == out2
        assert out1 == (GOLDEN_REPORTS / frozen).read_text()

    def test_json_report_is_valid_json(self):
        _code, out, _err = run_cli(
            ["nomizu", "scenes/round-sphere-lifts.json", "--torsion-free", "--json"]
        )
        doc = json.loads(out)
        assert doc["report_version"] == 1
        assert doc["ok"] is True
        assert doc["payload"]["nomizu"]["charge1"]["dimension"] == 0


class TestNegativeControls:
    def test_corrupt_killing_field(self):
        code, out, err = run_cli(["verify", "scenes/controls/corrupt-killing.json"])
        assert code == 1
        assert err == ""
        fails = [l for l in out.splitlines() if l.startswith("[FAIL]")]
        assert len(fails) == 1
        assert "Killing equation for field 'rot'" in fails[0]

    def test_malformed_expression(self):
        code, out, err = run_cli(["verify", "scenes/controls/malformed-expression.json"])
        assert code == 2
        assert out == ""
        assert err.startswith("error: at chart_scene.gauge[0][0]: bad expression 'sin('")

    def test_bad_eta(self):
        code, out, err = run_cli(["lift", "scenes/controls/bad-eta.json", "verify"])
        assert code == 2
        assert out == ""
        assert (
            "error: at klein_pair: invalid Klein pair: "
            "isotropy of k-vector 0 does not preserve eta" in err
        )


class TestUsageErrors:
    def test_nomizu_needs_klein(self):
        code, _out, err = run_cli(["nomizu", "scenes/polar-chart.json"])
        assert code == 2
        assert "error: nomizu requires a klein_pair scene" in err

    def test_lift_needs_klein(self):
        code, _out, err = run_cli(["lift", "scenes/polar-chart.json", "orient"])
        assert code == 2
        assert "error: lift requires a klein_pair scene" in err

    def test_conjugacy_needs_two_lifts(self):
        code, _out, err = run_cli(["lift", "scenes/flat-plane-klein.json", "conjugacy"])
        assert code == 2
        assert "needs at least 2 lift(s) in the scene, found 1" in err

    def test_missing_file(self):
        code, _out, err = run_cli(["verify", "scenes/does-not-exist.json"])
        assert code == 2
        assert err.startswith("error: cannot read")

    def test_unknown_action_rejected_by_parser(self):
        code, _out, _err = run_cli(["lift", "scenes/flat-plane-klein.json", "explode"])
        assert code == 2

    def test_filter_without_match(self):
        code, _out, err = run_cli(
            ["verify", "scenes/flat-gauge-vector.json", "--filter", "zzz-no-such"]
        )
        assert code == 2
        assert "error: filter 'zzz-no-such' matches no checks" in err

    def test_negative_tol(self):
        code, _out, err = run_cli(["verify", "scenes/flat-gauge-vector.json", "--tol", "-1"])
        assert code == 2
        assert "tolerance must be positive" in err


class TestTolChain:
    def test_bad_env_value_rejected(self, monkeypatch):
        monkeypatch.setenv("SPIN_G_TOL", "not-a-number")
        code, _out, err = run_cli(["lift", "scenes/round-sphere-lifts.json", "parity"])
        assert code == 2
        assert "error: bad SPIN_G_TOL value 'not-a-number'" in err

    def test_cli_flag_beats_env(self, monkeypatch):
        monkeypatch.setenv("SPIN_G_TOL", "not-a-number")
        code, out, _err = run_cli(
            ["lift", "scenes/round-sphere-lifts.json", "parity", "--tol", "1e-8"]
        )
        assert code == 0
        assert "tol 1e-08" in out

    def test_env_applies_when_no_flag(self, monkeypatch):
        monkeypatch.setenv("SPIN_G_TOL", "1e-6")
        code, out, _err = run_cli(["lift", "scenes/round-sphere-lifts.json", "parity"])
        assert code == 0
        assert "tol 1e-06" in out

    def test_tiny_tol_clamped(self):
        code, out, _err = run_cli(
            ["lift", "scenes/round-sphere-lifts.json", "parity", "--tol", "1e-30"]
        )
        assert code == 0
        assert "tol 1e-12" in out


class TestFilter:
    def test_filter_keeps_matching_checks(self):
        code, out, _err = run_cli(
            ["verify", "scenes/flat-gauge-vector.json", "--filter", "Killing equation"]
        )
        assert code == 0
        body = [l for l in out.splitlines() if l.startswith("[")]
        assert len(body) == 3
        assert all("Killing equation" in l for l in body)


class TestLiftActions:
    def test_verify_action(self):
        code, out, _err = run_cli(["lift", "scenes/round-sphere-lifts.json", "verify"])
        assert code == 0
        assert "[charge1] projection" in out and "[charge2] projection" in out

    def test_su2_pair_distinguished_exactly(self):
        code, out, _err = run_cli(["lift", "scenes/sphere-su2-lifts.json", "conjugacy"])
        assert code == 0
        assert "NotConjugate: invariant trace form differs" in out
