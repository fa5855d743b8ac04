import json

import pytest

from tgwa.errors import InfiniteDimension
from tgwa.module import WeightModule
from tgwa.qwa import example_instances, example_proper_break_module
from tgwa.verify import (apply_relation, burnside_span_dim, check_relations, check_simplicity,
                         check_weight_grading, cyclic_span_dim, default_window, inner_breaks,
                         qwa_relations, relation_id_str, separating_eigenvalues, verify_module)

INSTANCES = example_instances()


def _n1_break():
    return INSTANCES[1].build()


def _doubled(m):
    """m + m, with the copy index in the weight-space slot."""
    def lift(fn):
        def act(i, lab):
            e = fn(i, (lab[0], 0))
            return None if e is None else ((e[0][0], lab[1]), e[1])
        return act

    return WeightModule(m.case, m.env, m.p, m.base, 2, m._reps, True, lift(m.x), lift(m.y),
                        algebra=m.algebra)


def _without(m, letter, i):
    keep_x, keep_y = m.x, m.y

    def x(k, lab):
        return None if (letter, k) == ("X", i) else keep_x(k, lab)

    def y(k, lab):
        return None if (letter, k) == ("Y", i) else keep_y(k, lab)

    return WeightModule(m.case, m.env, m.p, m.base, m.dim_m, m._reps, True, x, y,
                        algebra=m.algebra)


def test_relation_ids():
    m = _n1_break()
    names = sorted(relation_id_str(r) for r in qwa_relations(m))
    assert names == ["xx12", "xy11", "xy12", "xy21", "xy22", "yy12"]


def test_relations_hold_and_residuals_vanish():
    m = _n1_break()
    assert not any(check_relations(m).values())
    for rel in qwa_relations(m).values():
        for lab in m.labels():
            assert apply_relation(m, rel, lab) == {}


def test_broken_module_fails_relations():
    bad = _without(_n1_break(), "Y", 1)
    fails = check_relations(bad)
    assert fails["xy11"]
    assert "residual" in fails["xy11"][0].detail


def test_grading_detects_wrong_points():
    m = _n1_break()
    assert check_weight_grading(m) == []
    lab = m.labels()[0]
    m.point_overrides[lab] = m.point_of(m.labels()[1])
    assert check_weight_grading(m)


def test_simplicity_by_graph():
    m = _n1_break()
    res = check_simplicity(m)
    assert res.simple is True and res.method == "graph"
    sig = separating_eigenvalues(m)
    assert len(set(sig.values())) == m.dim


def test_non_simple_by_graph():
    res = check_simplicity(_without(_n1_break(), "Y", 1))
    assert res.simple is False and res.method == "graph"
    assert res.witness


def test_direct_sum_is_not_simple():
    m = _doubled(_n1_break())
    assert m.dim == 6
    res = check_simplicity(m)
    assert res.simple is False and res.method == "burnside"
    # the first copy is a proper submodule
    assert res.witness and cyclic_span_dim(m, m.labels(), 0) == 3
    # operators act as A + A, so they span a copy of End(M) only
    assert burnside_span_dim(m, m.labels()) == 9


def test_small_span_without_witness_is_undecided(monkeypatch):
    import tgwa.verify as verify

    m = _doubled(_n1_break())
    monkeypatch.setattr(verify, "cyclic_span_dim", lambda mod, labels, k: len(labels))
    res = verify.check_simplicity(m)
    assert res.simple is None and res.method == "undecided"
    assert verify_module(m).ok


def test_burnside_on_repeated_weights():
    # the rank-two instance with lambda12^12 = -1 has two vectors per weight
    m = INSTANCES[15].build()
    assert m.dim_m == 2
    assert check_simplicity(m).simple is True


def test_infinite_modules_need_a_window():
    m = INSTANCES[16].build()
    with pytest.raises(InfiniteDimension):
        check_simplicity(m)
    assert default_window(m) == 4
    # the base point sits at the end of the ray, so G-tilde is [0, inf) x Z
    assert default_window(INSTANCES[18].build()) == 2
    assert default_window(_n1_break()) is None


def test_inner_breaks_of_a_finite_family():
    m = _n1_break()
    breaks = inner_breaks(m)
    assert {b.direction for b in breaks} == {1}
    assert len(breaks) == 2


def test_report_serializes():
    m = example_proper_break_module()
    report = verify_module(m)
    data = report.to_json()
    assert data["ok"] is True
    assert data["proper_inner_breaks"][0]["degree"] == [-2, 1]
    assert json.loads(json.dumps(data)) == data
    text = report.to_text()
    assert "proper breaks" in text and "PASS (proper inner breaks flagged)" in text


def test_report_fails_on_broken_module():
    report = verify_module(_without(_n1_break(), "X", 2))
    assert not report.ok
    assert "FAIL" in report.to_text()


def test_scalars_in_failures_are_formatted():
    m = _n1_break()
    m._y = lambda i, lab: None
    m._cache.clear()
    fails = check_relations(m)["xy11"]
    assert fails and fails[0].to_json()["detail"].startswith("residual")
