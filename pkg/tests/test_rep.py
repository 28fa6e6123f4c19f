import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import tensors

from g2q import rep
from g2q.exactq import ONE, RatFunc, parse_laurent
from g2q.tensorla import LinMap, SparseTensor, apply_at

S = rep.structure_maps()
gens = st.sampled_from(rep.GENERATORS)


def test_rep_suite_passes():
    R = rep.rep_suite()
    assert R.passed, R.failures()


def test_structure_suite_passes():
    R = rep.gamma_p_suite()
    assert R.passed, R.failures()


def test_quantum_dimension():
    want = RatFunc.from_laurent(parse_laurent("q^10 + q^8 + q^2 + 1 + q^-2 + q^-8 + q^-10"))
    assert rep.quantum_dim(1) == want
    assert S.dim_q == want
    # the loop equals the trace of K_{2rho} on the identity
    assert rep.quantum_dim(S.P0.scale(S.dim_q)) == want


def test_weights_of_the_basis():
    assert rep.weight(0, 1) == (2, 1)
    assert rep.weight(3, 1) == (0, 0)
    assert rep.weight(6, 1) == (-2, -1)


@pytest.mark.parametrize("n,dim", [(0, 1), (1, 0), (2, 1), (3, 1), (4, 4)])
def test_invariant_space_dimensions(n, dim):
    assert rep.invariant_space(n).dim == dim


def test_c0_spans_the_quadratic_invariants():
    assert rep.is_invariant(S.c0)
    assert rep.invariant_space(2).contains(S.c0)


@given(gens, tensors(2))
def test_braiding_is_equivariant(g, x):
    assert rep.act(g, S.R(x)) == S.R(rep.act(g, x))


@given(gens, tensors(1))
def test_gamma_is_equivariant(g, x):
    assert rep.act(g, S.gamma(x)) == S.gamma(rep.act(g, x))


@given(tensors(3))
def test_braid_relation(x):
    def r(i, y):
        return apply_at(S.R, i, y)

    assert r(0, r(1, r(0, x))) == r(1, r(0, r(1, x)))


@given(tensors(2))
def test_braiding_inverse(x):
    assert S.Rinv(S.R(x)) == x


@given(tensors(2))
def test_k_acts_diagonally_and_invertibly(x):
    for k in ("K1", "K2"):
        assert rep.act(k + "inv", rep.act(k, x)) == x


def test_projectors_are_orthogonal_idempotents():
    P = [S.P0, S.P2l1, S.Pl2, S.Pl1]
    total = P[0] + P[1] + P[2] + P[3]
    assert total == LinMap.identity(2)
    for i, a in enumerate(P):
        assert a @ a == a
        for b in P[i + 1:]:
            assert (a @ b).is_zero()


def test_generators_need_a_leg():
    with pytest.raises(ValueError):
        rep.act("E1", SparseTensor.scalar(ONE))
