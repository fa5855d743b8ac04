import pytest

from tgwa.errors import CertificationFailed
from tgwa.lattice import hnf
from tgwa.orbit import n2_point
from tgwa.qwa import (CASES, build_generic_induced, build_module, c1_inverse_formula,
                      c2_inverse_formula, classify_case, compare_modules, example_instances,
                      example_proper_break_module, example_sign_flip_module, induced_constants,
                      power_factor, r_g, weight_space_spec, wrap_constant_formula)
from tgwa.scalars import ONE, ParameterEnv, Scalar
from tgwa.verify import check_relations, verify_module

INSTANCES = example_instances()
IDS = ["%d-%s" % (i, inst.case) for i, inst in enumerate(INSTANCES)]

# slow oracle runs get a smaller window; the acceptance suite covers window 3
ORACLE_WINDOW = {"N2_RANK0": 2, "Z x Z": 1, "Z^- x Z": 2, "Z^+ x Z": 2, "G_m = <(4, -2)>": 2}


def test_every_family_has_an_instance():
    assert {inst.case for inst in INSTANCES} == set(CASES)
    assert len(CASES) == 11


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_instances_classify(inst):
    assert classify_case(inst.point, inst.env) == inst.case


def test_build_rejects_wrong_family():
    inst = INSTANCES[0]
    with pytest.raises(ValueError):
        build_module("N2_RANK2", inst.point, inst.env, Scalar.param("rho"))


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_instances_verify(inst):
    m = inst.build()
    report = verify_module(m, window=None if m.finite else 3, breaks=False)
    assert report.relations_ok, report.to_text()
    assert not report.grading, report.to_text()
    if m.finite:
        assert report.simplicity.simple is True, report.to_text()


@pytest.mark.parametrize("inst", INSTANCES, ids=IDS)
def test_matches_induced_module(inst):
    m = inst.build()
    window = ORACLE_WINDOW.get(inst.case, ORACLE_WINDOW.get(inst.note, 3))
    oracle = build_generic_induced(m.base, inst.env, weight_space_spec(m),
                                   basis=m.gm_basis or None)
    # on infinite coordinates the GENERIC_OTHER basis agrees up to a diagonal rescaling
    diffs = compare_modules(m, oracle, window=window, gauge=inst.case == "GENERIC_OTHER")
    assert diffs == []


def _perturbed(m, label, factor):
    """Copy of the action of m with one X_1 coefficient rescaled."""
    orig = m._x

    def x(i, lab):
        out = orig(i, lab)
        if i == 1 and lab == label and out is not None:
            return out[0], out[1] * factor
        return out

    m._x = x
    m._cache.clear()
    return m


def test_oracle_comparison_detects_a_changed_coefficient():
    inst = INSTANCES[12]
    m = inst.build()
    oracle = build_generic_induced(m.base, inst.env, weight_space_spec(m), basis=m.gm_basis)
    assert compare_modules(m, oracle) == []
    bad = _perturbed(inst.build(), m.labels()[0], Scalar.eps(1, 10))
    assert compare_modules(bad, oracle) != []
    assert any(check_relations(bad).values())


def test_two_row_module_shape():
    m = INSTANCES[12].build()
    c = m.constants
    assert (c.d1, c.d2, c.s) == (5, 2, 2)
    degrees = {lab[0] for lab in m.labels()}
    assert len(degrees) == 10
    assert len({m.point_of(lab) for lab in m.labels()}) == 10


# ---------------------------------------------------------------------------
# constants of the rank-two n^(2) family


def _lattice_env(a, b, l12=None):
    """q_1, q_2 chosen so that G_m is exactly the lattice spanned by a and b."""
    (h1, k), (_, D) = hnf([a, b], 2).basis
    assert h1 == 1
    bind = {"q1": "e^%d" % ((-k) % D), "q2": "e"}
    if l12:
        bind["l12"] = l12
    return ParameterEnv(D, bind)


BASES = [((2, -2), (3, 2)), ((1, 1), (0, 2)), ((2, 1), (1, 3)), ((1, -1), (1, 2)),
         ((1, 2), (1, 5)), ((1, -3), (1, 2)), ((1, 3), (0, 5)), ((3, -1), (1, 2)),
         ((1, -2), (2, 1))]


@pytest.mark.parametrize("a,b", BASES)
def test_constants_are_certified(a, b):
    env = _lattice_env(a, b)
    pt = n2_point(Scalar.param("a"), env)
    c = induced_constants(a, b, pt, env)
    for name in ("nu", "c1", "c2", "wrap"):
        assert getattr(c, name) == c.oracle[name], name
    assert c.d1 * c.d2 == a[0] * b[1] - b[0] * a[1]


def test_certification_failure_is_raised(monkeypatch):
    import tgwa.qwa as qwa

    a, b = BASES[0]
    env = _lattice_env(a, b)
    monkeypatch.setattr(qwa, "wrap_constant_formula", lambda *args, **kw: ONE)
    with pytest.raises(CertificationFailed):
        qwa.induced_constants(a, b, n2_point(Scalar.param("a"), env), env)


def test_printed_forms_disagree_with_the_oracle():
    """The negative-power exponent and the wrap constant as printed do not
    match normalize-and-evaluate; the corrected forms do (see test above)."""
    a, b = BASES[0]
    env = _lattice_env(a, b)
    pt = n2_point(Scalar.param("a"), env)
    lam = pt.alpha[1]
    c = induced_constants(a, b, pt, env)
    assert c1_inverse_formula(a, b, lam, env, printed=True).inverse() == c.oracle["c1"]
    assert c2_inverse_formula(a, b, lam, env, printed=True).inverse() != c.oracle["c2"]
    assert wrap_constant_formula(c.s, c.d2, lam, env, printed=True) != c.oracle["wrap"]
    a, b = (2, 1), (1, 3)
    env = _lattice_env(a, b)
    pt = n2_point(Scalar.param("a"), env)
    c = induced_constants(a, b, pt, env)
    assert c1_inverse_formula(a, b, pt.alpha[1], env, printed=True).inverse() != c.oracle["c1"]


def test_power_factor_positive_powers_agree():
    env = ParameterEnv()
    lam = Scalar.param("lam")
    for v in [(2, -2), (3, 2), (1, -1)]:
        for n in range(0, 4):
            assert power_factor(v, n, lam, env) == power_factor(v, n, lam, env, printed=True)
    assert power_factor((2, 1), -2, lam, env) != power_factor((2, 1), -2, lam, env, printed=True)


def test_r_g_table_holds_on_a_box():
    env = _lattice_env((2, -2), (3, 2))
    c = induced_constants((2, -2), (3, 2), n2_point(Scalar.param("a"), env), env, r_window=3)
    assert len(c.r_table) == 49
    assert c.r_table[(0, 0)] == r_g((0, 0), Scalar.param("a"), env) == ONE


# ---------------------------------------------------------------------------
# fixtures


def test_proper_break_fixture():
    m = example_proper_break_module()
    # dimension is the order of q_1 lambda_12 = e_6^3 = -1
    assert m.dim == 2
    report = verify_module(m)
    assert report.relations_ok and report.simplicity.simple is True
    assert (0, 1) in [b.degree for b in report.proper_breaks]
    assert all(b.degree[1] >= 1 for b in report.proper_breaks)


def test_sign_flip_fixture():
    m = example_sign_flip_module()
    report = verify_module(m)
    assert report.ok
    assert report.proper_breaks == []
    # the point m = (t_1, t_2 + 1) is a 1-break with its neighbours in the support
    m_point = [Scalar(0), Scalar(-1)]
    assert any(list(b.point.alpha) == m_point and b.direction == 1 for b in report.breaks)
