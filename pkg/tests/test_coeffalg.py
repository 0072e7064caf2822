import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import rand_mat, rand_vec
from oracles import antipode_oracle
from qsl2r import coeffalg as ca
from qsl2r.coeffalg import CoeffElement, DualElement
from qsl2r.uqsu2 import make_rep, q_dim, tensor_rep

Q = 0.5
seeds = st.integers(0, 2 ** 32 - 1)
qs = st.sampled_from([0.3, 0.5, 0.8])


def rand_elem(rng, q, ns=(0, 1, 2)):
    return CoeffElement.random(ns, q, rng)


def test_construction_validates_shape():
    with pytest.raises(ValueError):
        CoeffElement({1: np.eye(3)}, Q)
    assert CoeffElement({2: np.zeros((3, 3))}, Q).blocks == {}
    with pytest.raises(ValueError):
        CoeffElement.unit(0.5) * CoeffElement.unit(0.3)
    with pytest.raises(TypeError):
        CoeffElement.unit(Q).allclose("x", 1e-9)


def test_pair_examples():
    x = DualElement.generator("k", Q)
    assert ca.pair(CoeffElement.unit(Q), x) == pytest.approx(1)
    assert ca.pair(CoeffElement.basis(1, 0, 0, Q), x) == pytest.approx(Q)
    assert ca.pair(CoeffElement.basis(1, 0, 1, Q), x) == 0


def test_pair_of_coefficient_is_matrix_element(rng):
    xi, eta = rand_vec(rng, 3), rand_vec(rng, 3)
    E = DualElement.generator("e", Q)
    a = CoeffElement.coefficient(2, xi, eta, Q)
    assert ca.pair(a, E) == pytest.approx(np.vdot(xi, make_rep(2, Q).E @ eta))


def test_product_unit_and_ladder(rng):
    b = rand_elem(rng, Q)
    assert (CoeffElement.unit(Q) * b).allclose(b, 1e-12)
    assert (b * 1.0).allclose(b, 0)
    p = CoeffElement.basis(1, 0, 1, Q) * CoeffElement.basis(1, 1, 0, Q)
    assert set(p.support()) <= {0, 2}


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_defining_relations(q):
    al, be, ga, de = ca.generators(q)
    one = CoeffElement.unit(q)
    assert (al * be - q * be * al).max_abs() < 1e-12
    assert (al * ga - q * ga * al).max_abs() < 1e-12
    assert (be * ga - ga * be).max_abs() < 1e-12
    assert (be * de - q * de * be).max_abs() < 1e-12
    assert (ga * de - q * de * ga).max_abs() < 1e-12
    assert (al * de - q * be * ga - one).max_abs() < 1e-12
    assert (de * al - ga * be / q - one).max_abs() < 1e-12


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_star_on_generators(q):
    al, be, ga, de = ca.generators(q)
    assert al.star().allclose(de, 1e-12)
    assert ga.star().allclose(-be / q, 1e-12)
    assert be.star().allclose(-q * ga, 1e-12)
    assert de.star().allclose(al, 1e-12)


@given(qs, seeds)
def test_pairing_is_dual_to_coproduct(q, seed):
    # tau(ab, x) = tau(a (x) b, Delta x) with Delta of generators written out directly
    rng = np.random.default_rng(seed)
    n1, n2 = rng.integers(0, 4, size=2)
    a = CoeffElement({n1: rand_mat(rng, n1 + 1)}, q)
    b = CoeffElement({n2: rand_mat(rng, n2 + 1)}, q)
    t = tensor_rep(make_rep(n1, q), make_rep(n2, q))
    M = np.kron(a.block(n1), b.block(n2))
    for name, big in (("e", t.E), ("f", t.F), ("k", t.K)):
        lhs = ca.pair(a * b, DualElement.generator(name, q))
        assert lhs == pytest.approx(np.sum(M * big), abs=1e-9 * max(1, np.abs(M).max()) * q ** -8)


@given(qs, seeds)
def test_star_is_dual_to_antipode(q, seed):
    # <a*, x> = conj <a, S(x)*>
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, 5))
    a = CoeffElement({n: rand_mat(rng, n + 1)}, q)
    X = rand_mat(rng, n + 1)
    lhs = np.sum(a.star().block(n) * X)
    rhs = np.conj(np.sum(a.block(n) * antipode_oracle(n, q, X).conj().T))
    assert abs(lhs - rhs) < 1e-8 * max(1, abs(rhs))


@given(qs, seeds)
def test_antipode_A_is_dual(q, seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(0, 5))
    a = CoeffElement({n: rand_mat(rng, n + 1)}, q)
    X = rand_mat(rng, n + 1)
    for d in (1, -1):
        lhs = np.sum(ca.antipode_A(a, d).block(n) * X)
        rhs = np.sum(a.block(n) * antipode_oracle(n, q, X, d))
        assert abs(lhs - rhs) < 1e-8 * max(1, abs(rhs))
    with pytest.raises(ValueError):
        ca.antipode_A(a, 2)


@given(qs, seeds)
def test_algebra_laws(q, seed):
    rng = np.random.default_rng(seed)
    a, b, c = (rand_elem(rng, q, (0, 1, 2)) for _ in range(3))
    assert ((a * b) * c - a * (b * c)).max_abs() < 1e-9
    assert a.star().star().allclose(a, 1e-9)
    assert ((a * b).star() - b.star() * a.star()).max_abs() < 1e-9
    assert ca.counit(a * b) == pytest.approx(ca.counit(a) * ca.counit(b))


def test_counit_examples():
    assert ca.counit(CoeffElement.unit(Q)) == 1
    assert ca.counit(CoeffElement.basis(1, 0, 1, Q)) == 0
    assert CoeffElement.unit(Q).star().allclose(CoeffElement.unit(Q), 0)


def test_haar_examples(rng):
    assert ca.haar(CoeffElement.unit(Q)) == 1
    a = CoeffElement.basis(1, 0, 0, Q)
    assert ca.haar(a * a.star()) == pytest.approx(Q ** -1 / (Q + 1 / Q))
    assert ca.haar(a * a.star()) == pytest.approx(0.8)
    assert ca.haar(CoeffElement.coefficient(2, rand_vec(rng, 3), rand_vec(rng, 3), Q)) == 0


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_haar_is_invariant(q, rng):
    a = rand_elem(rng, q, (0, 2, 3))
    for name in ("e", "f", "k"):
        x = DualElement.generator(name, q)
        eps = x.block(0)[0, 0]
        assert ca.haar(ca.right_leg_act(a, x)) == pytest.approx(eps * ca.haar(a), abs=1e-12)
        assert ca.haar(ca.left_leg_act(a, x)) == pytest.approx(eps * ca.haar(a), abs=1e-12)


@pytest.mark.parametrize("q", [0.3, 0.8])
@pytest.mark.parametrize("n", range(5))
def test_gram_positive_definite(q, n):
    basis = [CoeffElement.basis(n, i, j, q) for i in range(n + 1) for j in range(n + 1)]
    G = np.array([[ca.haar(x.star() * y) for y in basis] for x in basis])
    assert np.allclose(G, G.conj().T, atol=1e-12)
    assert np.linalg.eigvalsh(G).min() > 0


@pytest.mark.parametrize("q", [0.3, 0.5, 0.8])
def test_peter_weyl(q, rng):
    for n1 in range(4):
        K = make_rep(n1, q).K
        for n2 in range(4):
            x1, y1, x2, y2 = (rand_vec(rng, d) for d in (n1 + 1, n1 + 1, n2 + 1, n2 + 1))
            a = CoeffElement.coefficient(n1, x1, y1, q)
            b = CoeffElement.coefficient(n2, x2, y2, q)
            want1 = want2 = 0
            if n1 == n2:
                want1 = np.vdot(x1, x2) * np.vdot(y2, np.linalg.solve(K, y1)) / q_dim(n1, q)
                want2 = np.vdot(x1, K @ x2) * np.vdot(y2, y1) / q_dim(n1, q)
            assert ca.haar(a * b.star()) == pytest.approx(want1, abs=1e-10)
            assert ca.haar(b.star() * a) == pytest.approx(want2, abs=1e-10)


def test_sigma_A_examples(rng):
    a = rand_elem(rng, Q)
    assert ca.sigma_A(a, 0).allclose(a, 0)
    e00 = CoeffElement.basis(1, 0, 0, Q)
    assert ca.sigma_A(e00).allclose(Q ** -2 * e00, 1e-12)
    assert ca.sigma_A(e00).block(1)[0, 0] == pytest.approx(4)


@given(qs, seeds)
def test_modular_property(q, seed):
    rng = np.random.default_rng(seed)
    a, b = rand_elem(rng, q, (0, 1, 2)), rand_elem(rng, q, (0, 1, 2))
    assert ca.haar(a * b) == pytest.approx(ca.haar(b * ca.sigma_A(a)), abs=1e-9)


@given(qs, seeds, st.floats(-2, 2), st.floats(-2, 2))
def test_sigma_group_law(q, seed, z, w):
    rng = np.random.default_rng(seed)
    a = rand_elem(rng, q, (1, 2))
    lhs = ca.sigma_A(ca.sigma_A(a, z), w)
    assert (lhs - ca.sigma_A(a, z + w)).max_abs() < 1e-9 * max(1, lhs.max_abs())


def test_tau_A(rng):
    a = rand_elem(rng, Q)
    assert ca.tau_A(a, 0).allclose(a, 0)
    s2 = ca.antipode_A(ca.antipode_A(a))
    assert ca.tau_A(a).allclose(s2, 1e-10)
    assert ca.haar(ca.tau_A(a)) == pytest.approx(ca.haar(a))
    xi, eta = rand_vec(rng, 2), rand_vec(rng, 2)
    K = make_rep(1, Q).K
    c = CoeffElement.coefficient(1, xi, eta, Q)
    want = CoeffElement.coefficient(1, np.linalg.solve(K, xi), K @ eta, Q)
    assert ca.tau_A(c).allclose(want, 1e-12)


def test_modular_element_and_k_power():
    d = ca.modular_element(Q, 0.5)
    assert np.allclose(d.block(1), np.diag([Q, 1 / Q]))
    assert np.allclose(DualElement.k_power(1, Q).block(2), make_rep(2, Q).K)


def test_dual_element_arithmetic():
    E, F = DualElement.generator("e", Q), DualElement.generator("f", Q)
    K, Ki = DualElement.generator("k", Q), DualElement.generator("kinv", Q)
    comm = E * F - F * E
    rhs = (K - Ki) * (1 / (Q - 1 / Q))
    assert np.allclose(comm.block(3), rhs.block(3))
    assert np.allclose(E.adjoint().block(2), (F * K).block(2))
    assert np.allclose((2 * DualElement.identity()).block(1), 2 * np.eye(2))
    x = DualElement.from_blocks({1: np.ones((2, 2))})
    assert np.all(x.block(2) == 0) and x(1)[0, 0] == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_boundedness_column_sum(n, rng):
    # sum_i pi(xi, K^1/2 e_i)^* pi(xi, K^1/2 e_i) = ||K^1/2 xi||^2 1
    K = make_rep(n, Q).K
    Kh = np.sqrt(np.diag(K).real)
    xi = rand_vec(rng, n + 1)
    tot = CoeffElement.zero(Q)
    for i in range(n + 1):
        c = CoeffElement.coefficient(n, xi, Kh * np.eye(n + 1)[i], Q)
        tot = tot + c.star() * c
    assert tot.allclose(np.linalg.norm(Kh * xi) ** 2 * CoeffElement.unit(Q), 1e-10)
