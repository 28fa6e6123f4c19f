import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from g2q import diagrams, rep
from g2q.diagrams import (
    BETA,
    Diagram,
    DiagramSyntaxError,
    WidthMismatch,
    ev,
    evaluate,
    is_acyclic,
    parse,
    random_diagram,
    reduce_to_acyclic,
)
from g2q.exactq import q
from g2q.tensorla import LinMap

S = rep.structure_maps()
rngs = st.randoms(use_true_random=False)


def small(rng):
    return random_diagram(rng, max_atoms=6, max_width=3, max_boundary=4)


def test_parse_reads_bottom_to_top():
    d = parse("cup ; id split")
    assert d.bottom == 0 and d.top == 3
    assert d.vertices == 1
    assert str(d) == "cup ; id split"


def test_syntax_errors_carry_position():
    with pytest.raises(DiagramSyntaxError) as info:
        parse("cup ; id foo")
    assert info.value.col == 10
    with pytest.raises(WidthMismatch):
        parse("cup ; merge merge")


def test_atom_values():
    assert ev("split") == S.gamma.scale(-(q**3))
    assert ev("merge") == S.p.scale(q**-3)
    assert ev("over") == S.R
    assert ev("under") == S.Rinv


def test_loop_and_bigon():
    assert ev("cup ; cap").scalar_value() == S.dim_q
    assert ev("split ; merge") == LinMap.identity(1).scale(BETA)
    assert BETA == ev("cup ; split id ; merge id ; cap").scalar_value() / S.dim_q


def test_relation_suite_passes():
    R = diagrams.relation_suite()
    assert R.passed, R.failures()


@given(rngs, rngs)
def test_evaluation_is_a_monoidal_functor(r1, r2):
    a, b = small(r1), small(r2)
    assert evaluate(a.tensor(b)) == evaluate(a).otimes(evaluate(b))
    c = Diagram.identity(a.top) if a.top else a
    if a.top:
        assert evaluate(a.then(c)) == evaluate(c) @ evaluate(a)


@given(rngs)
def test_dsl_roundtrip(r):
    d = small(r)
    if d.slices:
        assert parse(d.to_dsl()) == d


@settings(max_examples=15)
@given(rngs)
def test_reduction_preserves_value(r):
    d = small(r)
    lc = reduce_to_acyclic(d)
    assert all(is_acyclic(f) for f, _ in lc)
    got = lc.evaluate() if len(lc) else LinMap.zero(d.bottom, d.top)
    assert got == evaluate(d)


def test_cycle_reduction_suite_small():
    R = diagrams.cycle_reduction_suite(n_random=10, seed=1)
    assert R.passed, R.failures()
    assert {"cycle2", "triangle", "square"} <= {c.id for c in R.checks}


def test_random_diagram_respects_bounds():
    rng = random.Random(3)
    for _ in range(50):
        d = random_diagram(rng, max_atoms=5, max_boundary=4)
        assert d.bottom + d.top <= 4
