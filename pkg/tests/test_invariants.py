import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from g2q import invariants as inv
from g2q import rep
from g2q.algebra import AlgElem, X
from g2q.diagrams import ev
from g2q.exactq import q
from g2q.tensorla import LABELS, SparseTensor


def by_products(x, bands, m):
    """sum x_a X_{b1 a1} X_{b2 a2} ... computed with the algebra product."""
    out = AlgElem.zero(m)
    for labels, c in x.items_labels():
        term = AlgElem.one(m)
        for b, a in zip(bands, labels):
            term = term * X(b, a, m)
        out = out + term.scale(c)
    return out


@given(st.lists(st.integers(1, 3), min_size=2, max_size=2))
def test_placed_phi_matches_products(bands):
    assert inv.placed(inv.c0(), bands, 3) == by_products(inv.c0(), bands, 3)


@given(st.permutations([1, 2, 3]))
def test_placed_psi_matches_products(bands):
    assert inv.placed(inv.psi_tensor(), bands, 3) == by_products(inv.psi_tensor(), bands, 3)


def test_placed_rejects_bad_bands():
    with pytest.raises(ValueError):
        inv.placed(inv.c0(), (1, 4), 3)
    with pytest.raises(ValueError):
        inv.placed(inv.c0(), (1,), 3)


def test_phi_display_coefficient():
    assert inv.phi(1, 2, 2).elem.coeff((1, 1), (2, -1)) == q**4


def test_psi_matches_both_tripods():
    col = ev("cup ; id split").cols[0]
    assert SparseTensor(3, dict(col)) == inv.psi_tensor()
    assert ev("cup ; split id") == ev("cup ; id split")


def test_upsilon_is_the_double_split():
    assert SparseTensor(4, dict(ev("cup ; split split").cols[0])) == inv.upsilon_tensor()


def test_theta_paths():
    pic = inv.theta_tensor("picture")
    assert inv.theta_tensor("composite") == pic
    assert inv.theta_tensor("composite-raw").scale(-(q**9)) == pic
    assert inv.theta_tensor("composite-left") != pic


def test_upsilon_needs_nondecreasing_indices():
    with pytest.raises(ValueError):
        inv.upsilon(2, 1, 3, 4, 4)
    with pytest.raises(ValueError):
        inv.theta(1, 2, 3, 5, 4, 5)


@pytest.mark.parametrize("kind,idx", [("phi", (1, 2)), ("psi", (1, 2, 3)), ("upsilon", (1, 2, 3, 4))])
def test_constructed_values_are_invariant(kind, idx):
    val = getattr(inv, kind)(*idx, 4)
    assert inv.is_invariant_elem(val.elem)
    assert val.source == inv.GeneratorRef(kind.capitalize(), idx)


def test_covariant_families_are_not_invariant():
    assert not inv.is_invariant_elem(inv.gamma_pair(1, 1, 2, 2).elem)
    assert not inv.is_invariant_elem(inv.phi_pm("+", 1, 1, 2, 3, 3).elem)


def test_kappa():
    assert inv.kappa() == (1 - q**14) / rep.quantum_dim(1)


@pytest.mark.parametrize("m,d,dim", [(2, (1, 1), 1), (1, (2,), 1), (3, (1, 1, 1), 1), (1, (3,), 0), (2, (2, 2), 2)])
def test_invariant_dim(m, d, dim):
    assert inv.invariant_dim(m, d) == dim


def test_invariant_dim_checks_band_count():
    with pytest.raises(ValueError):
        inv.invariant_dim(3, (1, 1))


@pytest.mark.parametrize("suite", ["ppp", "2-2-tensors", "ijij", "phipsi", "xPsi", "Theta"])
def test_commutation_suites_pass(suite):
    R = inv.verify_commutation(suite)
    assert R.passed, [(c.id, c.witness) for c in R.failures()][:3]


def test_xpsi_holds_beyond_three_bands():
    R = inv.verify_commutation("xPsi", m=4)
    assert R.passed
    assert any(c.id.startswith("xPsi-2") for c in R.checks)


def test_xu_fails_only_on_the_r_equals_l_reading():
    R = inv.verify_commutation("xU")
    bad = {c.id for c in R.failures()}
    assert bad == {"commute-r4-(1,2,3,4)-a%d" % a for a in LABELS}


def test_zeta_fails_only_on_the_zeta4_special_case():
    R = inv.verify_commutation("zeta")
    for c in R.failures():
        assert c.id.startswith("zeta4-")
        i, j, k, l = (int(t) for t in c.id[len("zeta4-("):c.id.index(")")].split(","))
        assert i < j == k < l
    assert len(R.failures()) == 4 * 7


def test_zeta4_special_case_with_the_computed_coefficient():
    C = inv._Ctx(3)
    for c in LABELS:
        lhs = inv.zeta_image(4, c, (1, 2, 2, 3), 3)
        rhs = (C.X(2, c) * C.S(1, 2, 3)).scale(q**2) - (C.G(c, 1, 3) * C.P(2, 2)).scale(q**-6 * inv.kappa())
        assert lhs == rhs


def test_constructions_fail_only_on_up_prime_with_j_equal_k():
    R = inv.verify_constructions(4)
    bad = {c.id for c in R.failures()}
    want = {"up-prime-(%d,%d,%d,%d)" % (i, j, j, l) for i, j, l in itertools.combinations(range(1, 5), 3)}
    assert bad == want


def test_fft_span_small():
    for m in (1, 2, 3):
        R = inv.fft_span_check(m, 3)
        assert R.passed, R.failures()
    R = inv.fft_span_check(4, 0, extra=[(1, 1, 1, 1)])
    assert R.passed


def test_span_rank_counts_words():
    assert inv.span_rank(2, (1, 1)) == (1, 1)
    rank, words = inv.span_rank(2, (2, 2))
    assert rank == inv.invariant_dim(2, (2, 2)) == 2
    assert words >= rank
