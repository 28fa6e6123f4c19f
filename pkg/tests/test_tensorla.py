import pytest
from hypothesis import given
from hypothesis import strategies as st
from strategies import tensors

from g2q import rep
from g2q.exactq import ONE, q
from g2q.tensorla import (
    LABELS,
    EchelonBasis,
    LegMismatch,
    LinMap,
    SparseTensor,
    apply_at,
    apply_on_legs,
    decode,
    encode,
    kernel,
    rank,
    solve_in_span,
)

labels = st.lists(st.sampled_from(LABELS), min_size=1, max_size=5).map(tuple)


@given(labels)
def test_encode_decode_roundtrip(ls):
    assert decode(encode(ls), len(ls)) == ls


def test_first_leg_is_most_significant():
    assert encode((1, -1)) == 6
    assert encode((2, 1)) == 7
    assert SparseTensor.basis(1, 2).otimes(SparseTensor.basis(3)) == SparseTensor.basis(1, 2, 3)


def test_zero_coefficients_are_dropped():
    x = SparseTensor.basis(1) - SparseTensor.basis(1)
    assert x.entries == {}
    assert not x


@given(tensors(1), tensors(2), tensors(1))
def test_otimes_is_associative_and_bilinear(a, b, c):
    assert a.otimes(b).otimes(c) == a.otimes(b.otimes(c))
    assert (a + c).otimes(b) == a.otimes(b) + c.otimes(b)


@given(tensors(4))
def test_disjoint_leg_applications_commute(x):
    S = rep.structure_maps()
    f, g = S.R, S.cap
    one = apply_on_legs(g, [3, 4], apply_on_legs(f, [1, 2], x))
    two = apply_on_legs(f, [1, 2], apply_on_legs(g, [3, 4], x))
    assert one == two


def test_apply_on_legs_rejects_bad_positions():
    x = SparseTensor.basis(1, 2, 3)
    with pytest.raises(LegMismatch):
        apply_on_legs(rep.structure_maps().R, [1, 3], x)
    with pytest.raises(LegMismatch):
        apply_at(rep.structure_maps().R, 2, x)


def test_composition_and_identity():
    R = rep.structure_maps().R
    I2 = LinMap.identity(2)
    assert I2 @ R == R
    assert R @ I2 == R
    assert R @ rep.structure_maps().Rinv == I2


def test_kernel_of_a_projection():
    # the cap pairs V with V; its kernel on V (x) V has codimension 1
    K = kernel(rep.structure_maps().cap)
    assert K.dim == 48
    for row in K.rows:
        assert rep.structure_maps().cap(row).is_zero()


def test_rank_and_solve():
    a = SparseTensor.basis(1, 2)
    b = SparseTensor.basis(2, 1).scale(q)
    c = a.scale(q**2) - b.scale(3)
    assert rank([a, b, c]) == 2
    sol = solve_in_span([a, b], c)
    assert sol == {0: q**2, 1: -3 * ONE}
    assert solve_in_span([a], b) is None


@given(st.lists(tensors(2, max_terms=4), max_size=5))
def test_echelon_basis_is_canonical(vs):
    E = EchelonBasis.span(2, vs)
    assert E.dim == rank(vs) if vs else E.dim == 0
    for v in vs:
        assert E.contains(v)
        assert E.reduce(v).is_zero()
    F = EchelonBasis.span(2, list(reversed(vs)))
    assert E == F
    assert EchelonBasis.from_text(E.to_text()) == E
