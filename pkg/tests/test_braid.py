import itertools

import pytest

from qbrst.braid import (AlgebraSpec, antisymmetrizers, braid_chain, check_qlie_axioms,
                         check_yang_baxter, signed_permutation_sum)
from qbrst.brst import check_chain_inverses
from qbrst.presets import matrix_algebra_spec, super_permutation
from qbrst.scalar import Field
from qbrst.tensor import Tensor, compose, embed

from shared import spec, uq_spec


def _names(checks):
    return {c.name: c.ok for c in checks}


@pytest.mark.parametrize("name", ["sl2", "gl2", "gl1|1"])
def test_presets_satisfy_the_axioms(name):
    assert all(_names(check_qlie_axioms(spec(name))).values())


def test_uqgl_axioms_at_three_halves():
    assert all(_names(check_qlie_axioms(uq_spec())).values())


def test_yang_baxter_for_super_permutation():
    assert check_yang_baxter(Tensor.permutation(2)).ok
    assert check_yang_baxter(super_permutation(2, (0, 1))).ok


def test_symmetric_part_in_c_is_caught():
    s = spec("sl2")
    sym = Tensor.from_entries(3, 1, 2, [((1,), (1, 1), s.field(1))])
    bad = AlgebraSpec("sl2-sym", 3, s.sigma, s.c + sym, s.field)
    res = check_qlie_axioms(bad)
    assert not all(c.ok for c in res)
    assert any(c.witness is not None for c in res if not c.ok)


def test_inhomogeneous_structure_constants_fail_naturality():
    # gl(1|1) brackets with an even-odd-even coupling that breaks the Z2 grading
    s = spec("gl1|1")
    extra = Tensor.from_entries(4, 1, 2, [((2,), (0, 1), s.field(1))])
    bad = AlgebraSpec("gl11-inhom", 4, s.sigma, s.c + extra, s.field, parity=s.parity)
    assert not _names(check_qlie_axioms(bad))["c-sigma-naturality"]


def test_braid_chain_single_factor_and_cycle():
    p = Tensor.permutation(2)
    assert braid_chain(p, "right", 1, 2) == p
    chain = braid_chain(p, "right", 1, 3)
    # the chain carries the content of leg 1 to leg 3
    for i, j, k in itertools.product(range(2), repeat=3):
        assert chain.entry((j, k, i), (i, j, k)) == 1
    assert chain == compose(embed(p, [2, 3], 3), embed(p, [1, 2], 3))


def test_chain_inverses():
    assert all(c.ok for c in check_chain_inverses(uq_spec(), 4))


def test_second_antisymmetrizer_is_one_minus_sigma():
    s = uq_spec()
    tw = antisymmetrizers(s.sigma, 3)
    assert tw.A(1) == Tensor.identity(4, 1, s.field.one())
    assert tw.A(2) == Tensor.identity(4, 2, s.field.one()) - s.sigma


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_permutation_tower_matches_signed_sums(dim):
    tw = antisymmetrizers(Tensor.permutation(dim), dim + 2)
    assert tw.height == dim
    assert all(c.ok for c in tw.form_checks)
    for n in range(1, dim + 2):
        assert tw.A(n) == signed_permutation_sum(dim, n)


def test_super_permutation_tower_does_not_terminate():
    tw = antisymmetrizers(super_permutation(2, (0, 1)), 5)
    assert tw.height is None
    # one even and one odd direction: every wedge power has rank 2
    assert tw.ranks == [2] * 5


def test_abelian_matrix_algebra():
    d = [[1, 0], [0, 0]], [[0, 0], [0, 1]]
    s = matrix_algebra_spec("diag", list(d), (0, 0), Field())
    assert s.c.is_zero()
    assert all(_names(check_qlie_axioms(s)).values())
