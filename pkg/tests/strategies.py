"""Hypothesis strategies shared by the test modules."""

from hypothesis import strategies as st

from g2q.exactq import LaurentPoly, RatFunc
from g2q.tensorla import LABELS, SparseTensor

small_ints = st.integers(min_value=-5, max_value=5)


@st.composite
def laurent(draw, max_terms=4):
    terms = draw(st.dictionaries(st.integers(-6, 6), small_ints, max_size=max_terms))
    return LaurentPoly(terms)


@st.composite
def ratfuncs(draw, allow_zero=True):
    num = draw(laurent())
    den = draw(laurent().filter(lambda p: not p.is_zero()))
    x = RatFunc.from_laurent(num) / RatFunc.from_laurent(den)
    if not allow_zero and x.is_zero():
        x = x + 1
    return x


@st.composite
def tensors(draw, n, max_terms=3):
    keys = st.tuples(*[st.sampled_from(LABELS)] * n)
    items = draw(st.lists(st.tuples(keys, small_ints), max_size=max_terms))
    x = SparseTensor(n, {})
    for labels, c in items:
        x = x + SparseTensor.basis(*labels).scale(c)
    return x
