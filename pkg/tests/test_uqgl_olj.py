from flint import fmpq

import pytest

from qbrst.olj import build_olj, check_trace_lemma, check_w_lemmas, classical_limit, solve_charge
from qbrst.scalar import Field
from qbrst.tensor import Tensor
from qbrst.uqgl import build_glq, glq_spec, hecke_check, transcription_check

from shared import Q32


@pytest.fixture(scope="module")
def sym2():
    return build_glq(2, Field())


@pytest.fixture(scope="module")
def num2():
    return build_glq(2, Q32)


def test_data_checks_symbolic(sym2):
    assert [c.ok for c in sym2.checks] == [True] * 4
    assert hecke_check(sym2).ok


def test_transcription_matches_generated_sigma(num2):
    assert transcription_check(num2, glq_spec(2, Q32)).ok


def test_data_degenerates_at_q_one(sym2):
    # D -> 1 and Rhat -> the flip
    for data, limit in ((sym2.D, Tensor.identity(2, 1)), (sym2.Rhat, Tensor.permutation(2))):
        assert {(o, i): v.evaluate(1) for o, i, v in data.items() if v.evaluate(1)} == \
            {(o, i): v for o, i, v in limit.items()}


def test_trace_lemma(num2):
    assert all(c.ok for c in check_trace_lemma(num2))


def test_printed_exchange_lemma_fails_but_derivable_form_holds(num2):
    res = {c.name: c.ok for c in check_w_lemmas(num2)}
    assert res["W-omega exchange"] is False
    assert res["W-L exchange"] is True
    assert res["omega L - omega exchange (Rhat W_0 Rhat omega)"] is True


def test_solved_charge_is_unique_and_nilpotent(num2):
    sol = solve_charge(num2, build_olj(num2))
    assert sol.free == 0
    assert all(c.ok for c in sol.checks)
    assert sol.leading == -fmpq(3, 2) ** 4
    assert sol.differs_from_closed_form > 0


def test_classical_limit_constant(sym2):
    rep = classical_limit(sym2)
    assert rep.constant == 1 and rep.gamma_sign == -1
    assert all(c.ok for c in rep.checks)
