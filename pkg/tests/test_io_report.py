import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toriclag import io
from toriclag.report import FAIL, PASS, SKIP, CHECK_NAMES, PipelineConfig, Tolerances, run_pipeline
from toriclag.svg import emit_svg, gluing_svg, slice_svg


def test_generate_example_listing():
    assert io.generate_example(1).conormals == ((1, -1, -1), (1, 0, -1), (1, 1, 0), (1, 2, 3))
    g2 = io.generate_example(2)
    assert len(g2.conormals) == 5 and g2.conormals[-1] == (1, -2, 4)
    g3 = io.generate_example(3)
    assert len(g3.conormals) == 6 and g3.conormals[-1] == (1, -2, 9)
    assert g3.gamma == (1, 0, 0)
    assert g3.reeb == (6, 3, 18)
    assert g3.slice == (g3.reeb, Fraction(3))


@pytest.mark.parametrize("bad", [0, -2])
def test_generate_example_rejects_genus(bad):
    with pytest.raises(io.DocumentError):
        io.generate_example(bad)


@pytest.mark.parametrize("g", range(1, 11))
def test_round_trip(g):
    doc = io.generate_example(g)
    text = io.serialize(doc)
    assert io.parse(text) == doc
    assert io.serialize(io.parse(text)) == text


def test_rationals_are_strings():
    data = json.loads(io.serialize(io.generate_example(2)))
    assert data["slice"]["c"] == "5/2"
    assert all(isinstance(x, str) for x in data["reeb"])


rat = st.fractions(min_value=-50, max_value=50, max_denominator=40)


@settings(max_examples=80, deadline=None)
@given(st.lists(rat, min_size=3, max_size=3), rat, st.sampled_from([None, "sine-slag", "slag-line"]), rat)
def test_round_trip_arbitrary_fields(zeta, c, profile, C):
    prof = None
    if profile == "sine-slag":
        prof = {"name": profile}
    elif profile == "slag-line":
        prof = {"name": profile, "C": C, "t_min": Fraction(-1), "t_max": Fraction(1)}
    doc = io.ConeSpecDocument(3, ((1, 0, 0), (0, 1, 0), (0, 0, 1)), tuple(zeta), (1, 1, 1),
                              (tuple(zeta), c), prof)
    assert io.parse(io.serialize(doc), validate=False) == doc


@pytest.mark.parametrize("text,msg", [
    ('{"dim": 3, "conormals": [[1,0,0]], "extra": 1}', "unknown field"),
    ('{"dim": 3}', "missing field"),
    ('{"dim": 3, "conormals": [[1,0]]}', "length"),
    ('{"dim": 2, "conormals": [[1,0],[0,1]], "slice": {"zeta": ["1","1"], "c": 1, "w": 0}}', "unknown field"),
    ('{"dim": 2, "conormals": [[1,0],[0,1]], "reeb": [0.5, 1]}', "rationals"),
    ('{"dim": 2, "conormals": [[1,0],[0,1]], "profile": {"name": "nope"}}', "unknown profile"),
    ('{"dim": 2, "conormals": [[1,0],[0,1]], "profile": {"name": "sine-slag", "C": 1}}', "unknown field"),
    ('{"dim": 2, "conormals": [[2,0],[0,1]]}', "invalid cone"),
    ('[1, 2]', "JSON object"),
    ('{not json', "not valid JSON"),
])
def test_parse_errors(text, msg):
    with pytest.raises(io.DocumentError, match=msg):
        io.parse(text)


def _statuses(rep):
    return {r.name: r.status for r in rep.records}


@pytest.mark.parametrize("g", [1, 4])
def test_pipeline_family(g):
    rep = run_pipeline(io.generate_example(g))
    st_ = _statuses(rep)
    assert list(st_) == list(CHECK_NAMES)
    for name in ("validity", "goodness", "calabi_yau", "reeb", "slice_assumptions", "slice", "topology",
                 "slag", "shrinker"):
        assert st_[name] == PASS, rep.get(name)
    assert rep.get("topology").values["genus"] == g
    assert all(st_[n] == SKIP for n in CHECK_NAMES if n.startswith("oracle"))


def test_pipeline_flat():
    rep = run_pipeline(io.flat_example(3))
    assert all(r.status == PASS for r in rep.records), rep.to_text()
    assert rep.get("oracle_shrinker").values["predicted_lambda"] == -1.0
    assert rep.get("topology").values["genus"] == 0


def test_pipeline_skips_downstream_of_failure():
    doc = io.ConeSpecDocument(3, ((1, 0, 0), (-1, 0, 0)))
    rep = run_pipeline(doc)
    st_ = _statuses(rep)
    assert st_["validity"] == FAIL
    assert all(s == SKIP for n, s in st_.items() if n != "validity")
    assert "validity" in rep.get("goodness").detail


def test_pipeline_invalid_cone_reported_not_raised():
    doc = io.parse('{"dim": 3, "conormals": [[2,0,0],[0,1,0],[0,0,1]]}', validate=False)
    rep = run_pipeline(doc, ["goodness"])
    assert rep.get("validity").status == FAIL and "primitive" in rep.get("validity").detail
    assert rep.get("goodness").status == SKIP


def test_pipeline_bad_goodness_and_topology():
    doc = io.ConeSpecDocument(3, ((1, 0, 0), (1, 2, 0), (1, 0, 1)))
    rep = run_pipeline(doc, ["goodness", "topology"])
    g = rep.get("goodness")
    assert g.status == FAIL and g.values["divisors"] == (1, 2)
    assert rep.get("topology").status == FAIL
    assert rep.get("topology").values["components"] == 2


def test_pipeline_selection_includes_dependencies_only():
    rep = run_pipeline(io.generate_example(1), ["slice"])
    # the document declares its slice, so gamma is not needed to build it
    assert [r.name for r in rep.records] == ["validity", "reeb", "slice_assumptions", "slice"]
    bare = io.ConeSpecDocument(3, io.generate_example(1).conormals)
    rep = run_pipeline(bare, ["slice"])
    assert [r.name for r in rep.records] == ["validity", "calabi_yau", "reeb", "slice_assumptions", "slice"]
    assert rep.get("slice_assumptions").values["c"] == 2
    with pytest.raises(KeyError):
        run_pipeline(io.generate_example(1), ["nope"])


def test_pipeline_higher_dimension_skips():
    rep = run_pipeline(io.flat_example(4), ["slice", "goodness", "calabi_yau"])
    st_ = _statuses(rep)
    assert st_["validity"] == PASS and st_["calabi_yau"] == PASS
    assert st_["goodness"] == SKIP and st_["reeb"] == SKIP and st_["slice"] == SKIP


def test_pipeline_profiles_select_checks():
    base = io.generate_example(1)
    slag_doc = io.ConeSpecDocument(base.dim, base.conormals, base.reeb, base.gamma, base.slice,
                                   {"name": "slag-line", "C": Fraction(3), "t_min": Fraction(-2),
                                    "t_max": Fraction(2)})
    rep = run_pipeline(slag_doc, ["slag", "shrinker"])
    assert rep.get("slag").status == PASS and rep.get("slag").values["conserved"] == pytest.approx(3.0)
    assert rep.get("shrinker").status == SKIP
    shr_doc = io.ConeSpecDocument(base.dim, base.conormals, base.reeb, base.gamma, base.slice,
                                  {"name": "circle-shrinker", "A": Fraction(-1), "t_end": Fraction(1, 4)})
    rep = run_pipeline(shr_doc, ["slag", "shrinker"])
    assert rep.get("slag").status == SKIP
    s = rep.get("shrinker")
    assert s.status == PASS and "max_error_c" not in s.values


def test_tolerance_override_can_fail_checks():
    cfg = PipelineConfig(tol=Tolerances().uniform(1e-20))
    rep = run_pipeline(io.flat_example(3), ["shrinker"], cfg)
    assert rep.get("shrinker").status == FAIL


def test_report_deterministic_and_consistent():
    a = run_pipeline(io.flat_example(3))
    b = run_pipeline(io.flat_example(3))
    assert a.to_json() == b.to_json() and a.to_text() == b.to_text()
    data = json.loads(a.to_json())
    assert [c["name"] for c in data["checks"]] == [r.name for r in a.records]
    # every value in the JSON sidecar appears in the text report
    text = a.to_text()
    for c in data["checks"]:
        for k, v in c["values"].items():
            assert f"    {k} = {json.dumps(v)}" in text


def test_svg_outputs():
    rep = run_pipeline(io.generate_example(2), ["topology"])
    poly, surf = rep.context["slice"], rep.context["surface"]
    s1 = slice_svg(poly)
    assert s1 == slice_svg(poly) == emit_svg(poly)
    assert s1.startswith("<svg") and s1.count("<text") == 5
    for j in range(1, 6):
        assert f">E{j}<" in s1
    s2 = gluing_svg(poly, surf)
    assert s2 == emit_svg(poly, surf)
    assert s2.count("<polygon") == 8
    # each glued edge label appears exactly twice, once on each side
    import re
    labels = re.findall(r">E(\d+):(\d+)<", s2)
    assert len(labels) == 8 * 5
    for p in surf.pairings:
        assert (str(p.edge + 1), str(p.face2)) in labels and (str(p.edge2 + 1), str(p.face)) in labels
