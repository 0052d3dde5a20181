"""Scene file parsing, canonical serialization, and the error contract."""
import copy
import json

import pytest

from conftest import CONTROLS, SCENES
from spin_g.scenefile import (
    SceneFileError,
    load_scene,
    load_scene_text,
    save_scene,
    scene_to_text,
)

CORPUS = [
    "boost-time-reversal.json",
    "flat-gauge-spinor.json",
    "flat-gauge-vector.json",
    "flat-plane-klein.json",
    "polar-chart.json",
    "round-sphere-lifts.json",
    "sphere-su2-lifts.json",
]

CHART_TEMPLATE = {
    "schema_version": 1,
    "name": "tiny",
    "signature": {"s": 2, "t": 0},
    "aux_group": {"family": "U1"},
    "representation": {"kind": "vector"},
    "chart_scene": {
        "metric": [["1", "0"], ["0", "1"]],
        "coframe": [["1", "0"], ["0", "1"]],
        "gauge": [["0"], ["0"]],
        "killing_fields": {"T1": ["1", "0"]},
        "sections": {},
        "test_points": [[0.1, 0.2]],
    },
}

KLEIN_TEMPLATE = {
    "schema_version": 1,
    "name": "tiny-klein",
    "signature": {"s": 2, "t": 0},
    "aux_group": {"family": "U1"},
    "representation": {"kind": "vector"},
    "klein_pair": {
        "dim": 3,
        "k_indices": [2],
        "brackets": {"0,1": {"2": "1"}, "1,2": {"0": "1"}, "2,0": {"1": "1"}},
        "eta": [["1", "0"], ["0", "1"]],
    },
}


def loads(obj):
    return load_scene_text(json.dumps(obj))


def mutated(template, fn):
    d = copy.deepcopy(template)
    fn(d)
    return d


class TestCorpus:
    def test_six_plus_scenes(self):
        assert len(CORPUS) >= 6

    @pytest.mark.parametrize("name", CORPUS)
    def test_loads(self, name):
        m = load_scene(str(SCENES / name))
        assert m.name == name[: -len(".json")]
        assert m.kind in ("chart", "klein")
        assert (m.chart is not None) == (m.kind == "chart")
        assert (m.pair is not None) == (m.kind == "klein")

    @pytest.mark.parametrize("name", CORPUS)
    def test_round_trip_identity(self, name):
        text = (SCENES / name).read_text()
        m1 = load_scene_text(text)
        canon = scene_to_text(m1)
        m2 = load_scene_text(canon)
        assert m2 == m1
        assert scene_to_text(m2) == canon

    def test_representation_builds_lazily(self):
        m = load_scene(str(SCENES / "round-sphere-lifts.json"))
        assert m.representation.dim_W == 4
        assert len(m.lifts) == 2
        assert [l.name for l in m.lifts] == ["charge1", "charge2"]

    def test_save_and_reload(self, tmp_path):
        m = load_scene(str(SCENES / "sphere-su2-lifts.json"))
        out = tmp_path / "copy.json"
        save_scene(m, str(out))
        assert load_scene(str(out)) == m


class TestTopLevelErrors:
    def test_invalid_json(self):
        with pytest.raises(SceneFileError, match="not valid JSON"):
            load_scene_text("{")

    def test_duplicate_keys(self):
        with pytest.raises(SceneFileError, match="duplicate key 'schema_version'"):
            load_scene_text('{"schema_version": 1, "schema_version": 2}')

    def test_unsupported_version(self):
        bad = mutated(CHART_TEMPLATE, lambda d: d.update(schema_version=2))
        with pytest.raises(SceneFileError, match="unsupported version 2, expected 1"):
            loads(bad)

    def test_missing_signature(self):
        bad = mutated(CHART_TEMPLATE, lambda d: d.pop("signature"))
        with pytest.raises(SceneFileError, match="missing required key 'signature'"):
            loads(bad)

    def test_unknown_family(self):
        bad = mutated(CHART_TEMPLATE, lambda d: d["aux_group"].update(family="E8"))
        with pytest.raises(SceneFileError, match="at aux_group.family: .*unknown auxiliary family"):
            loads(bad)

    def test_unknown_rep_kind(self):
        bad = mutated(CHART_TEMPLATE, lambda d: d["representation"].update(kind="mystery"))
        with pytest.raises(SceneFileError, match="unknown representation kind 'mystery'"):
            loads(bad)

    def test_rep_family_mismatch_surfaces_early(self):
        bad = mutated(CHART_TEMPLATE, lambda d: d.update(representation={"kind": "su2_defining"}))
        with pytest.raises(SceneFileError, match="at representation: "):
            loads(bad)

    def test_exactly_one_payload(self):
        bad = mutated(CHART_TEMPLATE, lambda d: d.update(klein_pair=KLEIN_TEMPLATE["klein_pair"]))
        with pytest.raises(SceneFileError, match="exactly one of 'chart_scene' or 'klein_pair'"):
            loads(bad)
        bad = mutated(CHART_TEMPLATE, lambda d: d.pop("chart_scene"))
        with pytest.raises(SceneFileError, match="exactly one of"):
            loads(bad)

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(SceneFileError, match="cannot read"):
            load_scene(str(tmp_path / "nope.json"))


class TestChartErrors:
    def test_malformed_expression_control(self):
        with pytest.raises(
            SceneFileError,
            match=r"at chart_scene\.gauge\[0\]\[0\]: bad expression 'sin\('",
        ):
            load_scene(str(CONTROLS / "malformed-expression.json"))

    def test_float_rejected_in_expression_slot(self):
        bad = mutated(
            CHART_TEMPLATE, lambda d: d["chart_scene"]["metric"][0].__setitem__(0, 1.5)
        )
        with pytest.raises(SceneFileError, match="expression string expected, found 1.5"):
            loads(bad)

    def test_matrix_shape(self):
        bad = mutated(
            CHART_TEMPLATE, lambda d: d["chart_scene"].update(coframe=[["1", "0"]])
        )
        with pytest.raises(SceneFileError, match="at chart_scene.coframe: 2 rows expected, found 1"):
            loads(bad)

    def test_point_arity(self):
        bad = mutated(
            CHART_TEMPLATE, lambda d: d["chart_scene"].update(test_points=[[0.1, 0.2, 0.3]])
        )
        with pytest.raises(
            SceneFileError, match=r"at chart_scene.test_points\[0\]: 2 coordinates expected"
        ):
            loads(bad)

    def test_points_required(self):
        bad = mutated(CHART_TEMPLATE, lambda d: d["chart_scene"].update(test_points=[]))
        with pytest.raises(SceneFileError, match="at least one test point required"):
            loads(bad)

    def test_bad_tol(self):
        bad = mutated(CHART_TEMPLATE, lambda d: d["chart_scene"].update(tol=-1))
        with pytest.raises(SceneFileError, match="at chart_scene.tol: positive number expected"):
            loads(bad)

    def test_section_length_checked_in_context(self):
        bad = mutated(
            CHART_TEMPLATE, lambda d: d["chart_scene"].update(sections={"u": ["1"]})
        )
        with pytest.raises(SceneFileError, match=r"at chart_scene\.sections"):
            loads(bad)


class TestKleinErrors:
    def test_bad_eta_control(self):
        with pytest.raises(
            SceneFileError,
            match="at klein_pair: invalid Klein pair: isotropy of k-vector 0 does not preserve eta",
        ):
            load_scene(str(CONTROLS / "bad-eta.json"))

    def test_bare_float_in_rational_slot(self):
        bad = mutated(
            KLEIN_TEMPLATE, lambda d: d["klein_pair"]["eta"][0].__setitem__(0, 1.0)
        )
        with pytest.raises(
            SceneFileError,
            match=r'bare float 1\.0 not accepted here; write an exact string like "3/2"',
        ):
            loads(bad)

    def test_bracket_key_shape(self):
        bad = mutated(
            KLEIN_TEMPLATE, lambda d: d["klein_pair"]["brackets"].update({"0": {"1": "1"}})
        )
        with pytest.raises(SceneFileError, match="key must be 'i,j'"):
            loads(bad)

    def test_bracket_index_range(self):
        bad = mutated(
            KLEIN_TEMPLATE, lambda d: d["klein_pair"]["brackets"].update({"0,7": {"1": "1"}})
        )
        with pytest.raises(SceneFileError, match=r"indices must lie in 0\.\.2"):
            loads(bad)

    def test_duplicate_bracket(self):
        bad = mutated(
            KLEIN_TEMPLATE, lambda d: d["klein_pair"]["brackets"].update({"1,0": {"2": "-1"}})
        )
        with pytest.raises(SceneFileError, match=r"bracket \(1,0\) given twice"):
            loads(bad)

    def test_lift_aux_arity(self):
        def mut(d):
            d["klein_pair"]["lifts"] = [
                {"dlift": [{"so": [["0", "-1"], ["1", "0"]], "aux": ["0", "0"]}]}
            ]

        bad = mutated(KLEIN_TEMPLATE, mut)
        with pytest.raises(SceneFileError, match=r"aux: 1 coordinates expected, found 2"):
            loads(bad)

    def test_lift_so_must_be_antisymmetric(self):
        def mut(d):
            d["klein_pair"]["lifts"] = [
                {"dlift": [{"so": [["0", "1"], ["1", "0"]], "aux": ["0"]}]}
            ]

        bad = mutated(KLEIN_TEMPLATE, mut)
        with pytest.raises(SceneFileError, match="eta-antisymmetric"):
            loads(bad)
