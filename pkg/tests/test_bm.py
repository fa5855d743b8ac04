import itertools

import pytest
from hypothesis import given, seed, strategies as st

from conftest import SEED
from tgwa.bm import (TorusModuleSpec, bm_presentation, c_swap, commutation_scalars,
                     default_torus_spec, integer_inverse, lattice_coordinates, nu_formula,
                     simple_torus_module, torus_decompose)
from tgwa.core import qwa_presentation
from tgwa.errors import NotRootOfUnity
from tgwa.lattice import mat_mul
from tgwa.orbit import n0_point, n1_point, n2_point
from tgwa.scalars import ONE, ParameterEnv, Scalar


def test_lattice_coordinates():
    assert lattice_coordinates([(2, -2), (3, 2)], (1, 4)) == [-1, 1]
    assert lattice_coordinates([], (0, 0)) == []
    with pytest.raises(ValueError):
        lattice_coordinates([(2, 0)], (1, 0))
    with pytest.raises(ValueError):
        lattice_coordinates([(1, 0)], (0, 1))


def test_integer_inverse():
    u = [[2, 1], [7, 4]]
    assert mat_mul(u, integer_inverse(u)) == [[1, 0], [0, 1]]
    with pytest.raises(ValueError):
        integer_inverse([[2, 0], [0, 1]])


@pytest.mark.parametrize("a,b", [((2, -2), (3, 2)), ((4, -2), (1, 3)), ((1, -1), (0, 3)),
                                 ((3, 0), (0, 4)), ((1, 2), (2, -3)), ((0, 1), (5, -2))])
def test_nu_formula_matches_brute_force(a, b):
    env = ParameterEnv()
    pt = n2_point(Scalar.param("lam"), env)
    lam = commutation_scalars([a, b], pt, qwa_presentation(2, env))
    assert lam[0][1] == nu_formula(a, b, env)
    assert lam[1][0] == lam[0][1].inverse()


def test_nu_two_row_value():
    env = ParameterEnv()
    q1, q2, l12 = env.q(1), env.q(2), env.lam(1, 2)
    assert nu_formula((2, -2), (3, 2), env) == l12 ** 10 * q1 ** 4 * q2 ** -4


def test_c_swap():
    q = Scalar.param("q")
    assert c_swap(2, 3, q).is_one()
    assert c_swap(0, -3, q).is_one()
    assert c_swap(1, -1, q) == q ** 2 * q ** -1
    assert c_swap(-1, 1, q) == c_swap(1, -1, q).inverse()


def test_bm_presentation_examples(rou12):
    pres = bm_presentation(n0_point(rou12), rou12)
    assert pres.basis == [(1, 0)]
    assert pres.lam == [[ONE]]
    pres = bm_presentation(n2_point(Scalar.param("a"), rou12), rou12)
    assert pres.basis == [(3, 0), (0, 4)]
    env = ParameterEnv(10, {"q1": "e^6", "q2": "e", "l12": "e"})
    pres = bm_presentation(n2_point(Scalar.param("a"), env), env, [(2, -2), (3, 2)])
    assert pres.lam[0][1].is_one()
    with pytest.raises(ValueError):
        bm_presentation(n2_point(Scalar.param("a"), env), env, [(4, -4), (3, 2)])
    assert bm_presentation(n1_point(1, rou12), rou12).basis == [(0, 1)]


def test_torus_decomposition_of_rank_two_instance():
    env = ParameterEnv(20, {"q1": "e^12", "q2": "e^2", "l12": "e"})
    pres = bm_presentation(n2_point(Scalar.param("a"), env), env, [(2, -2), (3, 2)])
    assert pres.lam[0][1] == Scalar(-1)
    dec = torus_decompose(pres.lam, env)
    assert dec.p == 2 and dec.thetas == [1] and dec.laurent_rank == 0


def test_symbolic_scalars_are_rejected():
    env = ParameterEnv()
    lam = [[ONE, env.lam(1, 2)], [env.lam(2, 1), ONE]]
    with pytest.raises(NotRootOfUnity):
        torus_decompose(lam, env)


def _block(values, N):
    """Commutation matrix of T_{v_1} x ... x T_{v_k} on generators a_1, b_1, a_2, b_2, ..."""
    k = 2 * len(values)
    lam = [[ONE] * k for _ in range(k)]
    for i, v in enumerate(values):
        x = Scalar.eps(v, N)
        lam[2 * i][2 * i + 1] = x
        lam[2 * i + 1][2 * i] = x.inverse()
    return lam


def test_tensor_product_of_tori():
    env = ParameterEnv(6)
    lam = _block([1, 2], 6)
    dec = torus_decompose(lam, env)
    rho = [Scalar.param("r1"), Scalar.param("r2")]
    mu = [Scalar.param("m1"), Scalar.param("m2")]
    mod = simple_torus_module(dec, TorusModuleSpec(list(zip(rho, mu)), []))
    assert mod.dim == 18
    assert sorted(mod.orders) == [3, 6]
    assert mod.relation_failures(lam) == []


@st.composite
def root_matrices(draw):
    """lambda_ij = e_N^{E_ij} with E skew-symmetric mod N."""
    k = draw(st.integers(2, 4))
    N = draw(st.sampled_from([2, 3, 4, 6, 12]))
    E = [[0] * k for _ in range(k)]
    for i, j in itertools.combinations(range(k), 2):
        x = draw(st.integers(0, N - 1))
        E[i][j], E[j][i] = x, -x
    return N, E


def _character_count(N, E):
    """Index of the radical {v : sum_j E_ij v_j = 0 mod N for all i} in Z^k."""
    k = len(E)
    chars = {tuple(sum(E[i][j] * v[j] for j in range(k)) % N for i in range(k))
             for v in itertools.product(range(N), repeat=k)}
    return len(chars)


@seed(SEED)
@given(root_matrices())
def test_torus_modules_satisfy_relations(data):
    N, E = data
    lam = [[Scalar.eps(x, N) for x in row] for row in E]
    dec = torus_decompose(lam, ParameterEnv(N))
    params = [(Scalar.param("r%d" % i), Scalar.param("m%d" % i)) for i in range(len(dec.thetas))]
    chars = [Scalar.param("c%d" % i) for i in range(dec.laurent_rank)]
    mod = simple_torus_module(dec, TorusModuleSpec(params, chars))
    assert mod.relation_failures(lam) == []
    # a simple module of a quantum torus has dimension squared equal to the
    # index of the radical of its commutation form
    assert mod.dim ** 2 == _character_count(N, E)


def test_default_torus_spec():
    env = ParameterEnv(6)
    dec = torus_decompose(_block([1], 6), env)
    spec = default_torus_spec(dec, Scalar.param("rho"), Scalar.param("mu"))
    assert len(spec.params) == 1 and spec.characters == []
    dec = torus_decompose([[ONE, ONE], [ONE, ONE]], env)
    assert len(default_torus_spec(dec, Scalar(2), Scalar(3)).characters) == 2
