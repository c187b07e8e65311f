import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qbrst.nf import (CapExceeded, NFElement, Presentation, build_quotient_basis,
                      quantum_lie_presentation)

from shared import spec, uq_spec


def _sl2_basis(cap=3):
    return build_quotient_basis(quantum_lie_presentation(spec("sl2")), cap)


def test_sl2_pbw_dimensions():
    assert _sl2_basis().dims_by_length() == [1, 3, 6, 10]


def test_free_algebra_dimensions():
    b = build_quotient_basis(Presentation(["a", "b", "c"], [0, 0, 0], []), 2)
    assert b.dims_by_length() == [1, 3, 9]


def test_uqgl_quadratic_part():
    # N^2 = 4 generators; the sigma-symmetric square has dimension 4*5/2
    b = build_quotient_basis(quantum_lie_presentation(uq_spec()), 2)
    assert b.dims_by_length() == [1, 4, 10]


def test_commutator_in_classical_sl2():
    b = _sl2_basis()
    h, e, f = (NFElement.gen(b, i) for i in range(3))
    assert e * f - f * e == h
    assert h * e - e * h == e.scale(2)
    assert NFElement.unit(b) * e == e


def test_braided_commutator_gives_structure_constants():
    s = uq_spec()
    b = build_quotient_basis(quantum_lie_presentation(s), 3)
    one = s.field.one()
    gens = [NFElement.gen(b, i, one) for i in range(s.dim)]
    for i in range(s.dim):
        for j in range(s.dim):
            lhs = gens[i] * gens[j]
            for (m, k), (a, c), v in s.sigma.items():
                if (a, c) == (i, j):
                    lhs = lhs - (gens[m] * gens[k]).scale(v)
            rhs = NFElement(b, {})
            for (k,), (a, c), v in s.c.items():
                if (a, c) == (i, j):
                    rhs = rhs + gens[k].scale(v)
            assert lhs == rhs


def test_cap_is_enforced():
    b = _sl2_basis(2)
    with pytest.raises(CapExceeded):
        b.reduce_word((0, 1, 2))


words = st.lists(st.integers(0, 2), max_size=3)


@settings(max_examples=40, deadline=None)
@given(words, words)
def test_product_is_associative_within_the_cap(u, v):
    b = _sl2_basis(7)
    x = NFElement.from_words(b, {tuple(u): 1})
    y = NFElement.from_words(b, {tuple(v): 1})
    z = NFElement.gen(b, 1)
    assert (x * y) * z == x * (y * z)


@settings(max_examples=40, deadline=None)
@given(words)
def test_normal_form_is_idempotent(u):
    b = _sl2_basis(3)
    red = b.reduce_word(tuple(u))
    assert b.normal_form(red) == red
