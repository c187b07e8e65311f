from qbrst.brst import assemble_q, check_d_squared, check_first_level, check_gauge_action
from qbrst.complex import (apply_operator, check_cross_relations, check_grading, check_leibniz,
                           check_wedge_soundness, spanning_elements)
from qbrst.tensor import Tensor

from shared import brst, module


def test_omega_annihilates_the_unit():
    mod = module("sl2", 2, 3)
    for i in range(3):
        assert not mod.act_omega(i, mod.unit())


def test_classical_omega_gamma_anticommutator_is_delta():
    mod = module("sl2", 1, 2)
    for e in mod.basis_elements(1, 1):
        phi = {e: mod.one}
        for i in range(3):
            for a in range(3):
                lhs = mod.act_omega(i, mod.act_gamma(a, phi))
                for k, v in mod.act_gamma(a, mod.act_omega(i, phi)).items():
                    lhs[k] = lhs.get(k, 0) + v
                lhs = {k: v for k, v in lhs.items() if v}
                assert lhs == (phi if i == a else {})


def test_classical_wedge_is_antisymmetric():
    mod = module("sl2", 0, 3)
    u = mod.unit()
    for a in range(3):
        assert not mod.act_gamma(a, mod.act_gamma(a, u))
        for b in range(a + 1, 3):
            ab = mod.act_gamma(a, mod.act_gamma(b, u))
            ba = mod.act_gamma(b, mod.act_gamma(a, u))
            assert ab == {k: -v for k, v in ba.items()}


def test_cross_relations_and_wedge_soundness_for_uqgl():
    mod = module("uq-gl", 1, 2)
    assert all(c.ok for c in check_cross_relations(mod, spanning_elements(mod, 1, 1)))
    assert check_wedge_soundness(mod, 3).ok


def test_charge_has_ghost_number_one_and_is_a_derivation():
    d = brst("sl2")
    mod = module("sl2", 2, 2)
    els = spanning_elements(mod, 1, 1)
    assert check_grading(mod, d.Q, els).ok
    assert check_leibniz(mod, d.Q, els).ok
    assert check_first_level(d.spec, d).ok


def test_corrupted_level_breaks_nilpotency():
    d = brst("sl2")
    xs = dict(d.X)
    xs[1] = xs[1] * d.spec.field(2)
    mod = module("sl2", 2, 2)
    els = mod.basis_elements(2, 2)
    assert check_d_squared(mod, d.Q, els).ok
    bad = check_d_squared(mod, assemble_q(d.spec, xs), els)
    assert not bad.ok and bad.witness is not None


def test_gauge_action_detects_a_different_charge():
    d = brst("gl2")
    mod = module("gl2", 1, 2)
    xs = dict(d.X)
    xs[1] = xs[1] + Tensor.from_entries(4, 1, 2, [((0,), (1, 2), d.spec.field(1))])
    assert not check_gauge_action(mod, d.Q, assemble_q(d.spec, xs), mod.basis_elements()).ok


def test_parallel_sweep_agrees_with_serial():
    d = brst("sl2")
    mod = module("sl2", 2, 2)
    xs = dict(d.X)
    xs[1] = xs[1] * d.spec.field(2)
    q = assemble_q(d.spec, xs)
    assert check_d_squared(mod, q, jobs=1).witness == check_d_squared(mod, q, jobs=4).witness


def test_uqgl_sandwiches_vanish_beyond_level_two():
    d = brst("uq-gl")
    assert not d.Y[1].is_zero() and not d.Y[2].is_zero()
    assert d.Y[3].is_zero()
    mod = module("uq-gl", 1, 1)
    phi = {mod.basis_elements(1, 1)[-1]: mod.one}
    assert apply_operator(mod, d.Q, phi)
