import itertools
from flint import fmpq as Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbrst.linalg import InconsistentSystem, solve_rows
from qbrst.tensor import (Tensor, compose, embed, flow, inverse, kernel, kron, partial_trace,
                          solve_linear, solve_right)

P = Tensor.permutation(2)


def test_permutation_is_an_involution():
    assert compose(P, P) == Tensor.identity(2, 2)


def test_embed():
    i3 = Tensor.identity(2, 3)
    assert embed(Tensor.identity(2, 1), [1], 3) == i3
    p13 = embed(P, [1, 3], 3)
    for i, j, k in itertools.product(range(2), repeat=3):
        # column e_i e_j e_k maps to e_k e_j e_i
        assert p13.entry((k, j, i), (i, j, k)) == 1
    assert embed(P, [2, 3], 3) == kron(Tensor.identity(2, 1), P)


def test_partial_trace():
    assert partial_trace(P, 2) == Tensor.identity(2, 1)
    assert partial_trace(Tensor.identity(3, 2), 2) == Tensor.identity(3, 1) * 3


def test_flow_is_written_order():
    a = Tensor.from_entries(2, 1, 1, [((0,), (1,), 1)])
    b = Tensor.from_entries(2, 1, 1, [((1,), (1,), 5)])
    assert flow(a, b) == compose(b, a)


def test_solvers():
    v = Tensor.from_entries(2, 1, 1, [((0,), (1,), Fraction(3))])
    assert solve_linear(Tensor.identity(2, 1), v) == v
    a = Tensor.from_entries(2, 1, 1, [((0,), (0,), 2), ((1,), (0,), 1), ((1,), (1,), 1)])
    x = solve_right(v, a)
    assert compose(x, a) == v
    with pytest.raises(InconsistentSystem) as exc:
        solve_rows([("r", {}, {0: 1})], ["x"])
    assert exc.value.certificate is not None


def test_kernel_vectors_are_annihilated():
    a = Tensor.from_entries(2, 1, 2, [((0,), (0, 1), 1), ((0,), (1, 0), -1)])
    ker = kernel(a)
    assert len(ker) == 3
    for vec in ker:
        col = Tensor(2, 2, 1, {c: {0: v} for c, v in vec.items()})
        assert compose(a, col).is_zero()


entries = st.lists(
    st.tuples(st.integers(0, 1), st.integers(0, 1), st.integers(0, 1), st.integers(0, 1),
              st.integers(-3, 3)), max_size=8)


def _t(es):
    rows: dict = {}
    for a, b, c, d, v in es:
        if v:
            row = rows.setdefault(a * 2 + b, {})
            row[c * 2 + d] = row.get(c * 2 + d, 0) + Fraction(v)
    rows = {r: {c: v for c, v in row.items() if v} for r, row in rows.items()}
    return Tensor(2, 2, 2, {r: row for r, row in rows.items() if row})


@settings(max_examples=50, deadline=None)
@given(entries, entries, entries)
def test_composition_is_associative(x, y, z):
    a, b, c = _t(x), _t(y), _t(z)
    assert compose(compose(a, b), c) == compose(a, compose(b, c))


@settings(max_examples=50, deadline=None)
@given(entries, entries)
def test_kron_respects_composition(x, y):
    a, b = _t(x), _t(y)
    assert kron(compose(a, b), P) == compose(kron(a, P), kron(b, Tensor.identity(2, 2)))


@settings(max_examples=50, deadline=None)
@given(entries)
def test_inverse_when_invertible(x):
    a = _t(x) + Tensor.identity(2, 2) * 7
    try:
        ai = inverse(a)
    except ArithmeticError:
        return
    assert compose(a, ai) == Tensor.identity(2, 2)
