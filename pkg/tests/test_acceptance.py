"""The ten acceptance criteria, one test each, all comparisons exact.

Run under pytest (a summary line per criterion is printed at the end of the
session) or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import sys
import time
from fractions import Fraction
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from qbrst.braid import AlgebraSpec, antisymmetrizers, check_qlie_axioms, signed_permutation_sum
from qbrst.brst import (assemble_q, check_d_squared, check_gauge_action, check_gauge_independence,
                        reversed_gauge, solve_levels, verify_chi_linear)
from qbrst.complex import (apply_operator, check_composite_relation, check_cross_relations,
                           differential, spanning_elements)
from qbrst.olj import build_olj, classical_limit, verify_closed_form
from qbrst.presets import super_permutation
from qbrst.scalar import Field
from qbrst.tensor import Tensor
from qbrst.uqgl import build_glq

from shared import Q32, as_fraction, brst, module, spec, uq_spec

RESULTS: dict = {}
TITLES = {
    1: "axiom suite",
    2: "antisymmetrizers",
    3: "involutive degeneration",
    4: "classical standard complex",
    5: "operator relations",
    6: "U_q(gl2) charge at q=3/2",
    7: "gauge independence",
    8: "U_q(gl(N)) data",
    9: "closed-form charge",
    10: "classical limit",
}


def record(n: int):
    """Store pass/fail and timing of criterion ``n`` for the summary lines."""
    def deco(fn):
        def run():
            t0 = time.perf_counter()
            try:
                detail = fn()
            except AssertionError as exc:
                RESULTS[n] = (False, str(exc).splitlines()[0] if str(exc) else "assertion failed",
                              time.perf_counter() - t0)
                raise
            RESULTS[n] = (True, detail or "", time.perf_counter() - t0)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        run.criterion = n
        return run
    return deco


def summary_lines() -> list:
    out = []
    for n in sorted(TITLES):
        if n not in RESULTS:
            continue
        ok, detail, secs = RESULTS[n]
        out.append(f"criterion {n:2d} {TITLES[n]}: {'PASS' if ok else 'FAIL'} ({secs:.1f}s) {detail}".rstrip())
    return out


def _failed(checks):
    return [c.line() for c in checks if not c.ok]


# 1 ------------------------------------------------------------------------------------------
@record(1)
def test_axiom_suite_and_corrupted_structure_constants():
    for name in ("sl2", "gl2", "gl1|1"):
        bad = _failed(check_qlie_axioms(spec(name)))
        assert not bad, f"{name}: {bad}"
    s = spec("sl2")
    # [h, e] = 2e becomes 3e in one entry only
    rows = {k: dict(v) for k, v in s.c.rows.items()}
    t = Tensor(3, 1, 2, rows)
    (out, inn, v) = next((o, i, v) for o, i, v in s.c.items() if o == (1,) and i == (0, 1))
    t = t + Tensor.from_entries(3, 1, 2, [(out, inn, s.field(Fraction(1, 2)) * v)])
    mutant = AlgebraSpec("sl2-mutant", 3, s.sigma, t, s.field)
    checks = {c.name: c for c in check_qlie_axioms(mutant)}
    jac = checks["braided-jacobi"]
    assert not jac.ok and jac.witness is not None, "corrupted C passed the braided Jacobi identity"
    return f"mutant caught by braided-jacobi, witness {jac.line().split('witness=')[1]}"


# 2 ------------------------------------------------------------------------------------------
@record(2)
def test_antisymmetrizer_forms_and_heights():
    for name in ("sl2", "gl2", "gl1|1"):
        tw = antisymmetrizers(spec(name).sigma, (spec(name).dim + 2) if name != "gl1|1" else 5)
        assert all(c.ok for c in tw.form_checks), f"{name}: forms disagree"
    for n in range(1, 5):
        sig = super_permutation(n, [0] * n)
        tw = antisymmetrizers(sig, n + 2)
        assert tw.height == n, f"permutation sigma dim {n}: height {tw.height}"
        for k in range(1, n + 2):
            oracle = signed_permutation_sum(n, k)
            assert tw.A(k) == oracle, f"dim {n}: A_{k} differs from the signed permutation sum"
    tw = antisymmetrizers(uq_spec().sigma, 6)
    assert all(c.ok for c in tw.form_checks)
    assert tw.height == 4, f"U_q(gl2): height {tw.height}"
    return "heights 1,2,3,4 for permutations, 4 for U_q(gl2)"


# 3 ------------------------------------------------------------------------------------------
@record(3)
def test_involutive_sigma_gives_familiar_charge():
    for name in ("sl2", "gl2", "gl1|1"):
        d = brst(name)
        s = d.spec
        assert s.is_involutive()
        for r, y in d.Y.items():
            if r >= 2:
                assert y.is_zero(), f"{name}: Y_{r} != 0"
        # Omega^i chi_i - 1/2 Omega^j Omega^i C^k_{ij} gamma_k, acting on the module
        familiar = assemble_q(s, {1: s.c * s.field(Fraction(-1, 2))})
        mod = module(name)
        chk = check_gauge_action(mod, d.Q, familiar, mod.basis_elements(), name="familiar form")
        assert chk.ok, f"{name}: {chk.line()}"
    return "Y_r = 0 for r >= 2; Q acts as Omega chi - 1/2 Omega Omega C gamma"


# 4 ------------------------------------------------------------------------------------------
SL2_BRACKET = {(0, 1): {1: 2}, (0, 2): {2: -2}, (1, 2): {0: 1}}  # h, e, f


def _bracket(a, b):
    if a == b:
        return {}
    if a < b:
        return dict(SL2_BRACKET[(a, b)])
    return {k: -v for k, v in SL2_BRACKET[(b, a)].items()}


def _pbw(word) -> dict:
    """Rewrite a word in U(sl2) to nondecreasing PBW words."""
    out: dict = {}
    todo = [(tuple(word), Fraction(1))]
    while todo:
        w, c = todo.pop()
        k = next((i for i in range(len(w) - 1) if w[i] > w[i + 1]), None)
        if k is None:
            out[w] = out.get(w, 0) + c
            continue
        todo.append((w[:k] + (w[k + 1], w[k]) + w[k + 2:], c))
        for m, v in _bracket(w[k], w[k + 1]).items():
            todo.append((w[:k] + (m,) + w[k + 2:], c * v))
    return {w: c for w, c in out.items() if c}


def _wedge_sort(ws):
    """Sign and increasing form of a wedge word (None if it repeats)."""
    if len(set(ws)) < len(ws):
        return 0, None
    inv = sum(1 for a in range(len(ws)) for b in range(a + 1, len(ws)) if ws[a] > ws[b])
    return (-1) ** inv, tuple(sorted(ws))


def classical_boundary(x, y) -> dict:
    """d(x (x) y_1 ^ ... ^ y_n) in U(sl2) (x) Lambda(sl2), written independently."""
    out: dict = {}

    def add(u, wedge, c):
        sign, key = _wedge_sort(wedge)
        if not sign:
            return
        for w, v in _pbw(u).items():
            out[(w, key)] = out.get((w, key), 0) + sign * c * v

    n = len(y)
    for s in range(n):
        add(tuple(x) + (y[s],), y[:s] + y[s + 1:], (-1) ** s)
    for s, t in itertools.combinations(range(n), 2):
        rest = y[:s] + y[s + 1:t] + y[t + 1:]
        for k, v in _bracket(y[s], y[t]).items():
            add(tuple(x), (k,) + rest, (-1) ** (s + t) * v)
    return {k: v for k, v in out.items() if v}


@record(4)
def test_sl2_differential_is_the_standard_complex():
    d = brst("sl2")
    mod = module("sl2", 3, 3)
    elements = mod.basis_elements(3, 3)
    assert len(elements) == 20 * 8, len(elements)
    q1 = apply_operator(mod, d.Q, mod.unit())
    for x, w in elements:
        engine = differential(mod, d.Q, {(x, w): mod.one}, q1)
        got: dict = {}
        for (x2, w2), c in engine.items():
            for pw, v in _pbw(x2).items():
                got[(pw, w2)] = got.get((pw, w2), 0) + as_fraction(c) * v
        got = {k: v for k, v in got.items() if v}
        want = classical_boundary(x, w)
        assert got == want, f"d differs from the oracle on chi{list(x)} gamma{list(w)}"
    chk = check_d_squared(mod, d.Q, elements)
    assert chk.ok, chk.line()
    return f"{len(elements)} elements match the oracle; d^2 = 0"


# 5 ------------------------------------------------------------------------------------------
@record(5)
def test_operator_relations():
    for name in ("sl2", "uq-gl"):
        mod = module(name, 2, 3)
        bad = _failed(check_cross_relations(mod, spanning_elements(mod, 1, 2)))
        assert not bad, f"{name}: {bad}"
        for r in (2, 3):
            chk = check_composite_relation(mod, r, spanning_elements(mod, 1, 1))
            assert chk.ok, f"{name}: {chk.line()}"
    return "cross relations and composite relation r=2,3 on sl2 and U_q(gl2)"


# 6 ------------------------------------------------------------------------------------------
@record(6)
def test_uqgl2_charge_at_q_three_halves():
    d = brst("uq-gl")
    assert sorted(d.X) == [1, 2, 3], sorted(d.X)
    bad = _failed(verify_chi_linear(d.spec, d.tower, d.X))
    assert not bad, bad
    mod = module("uq-gl", 2, 4)
    chk = check_d_squared(mod, d.Q, mod.basis_elements(2, 4))
    assert chk.ok, chk.line()
    return f"levels 1-3 solved, chi-linear identities hold, {chk.detail}"


# 7 ------------------------------------------------------------------------------------------
@record(7)
def test_gauge_independence():
    for name in ("sl2", "uq-gl"):
        d = brst(name)
        bad = _failed(check_gauge_independence(d.spec, d))
        assert not bad, f"{name}: {bad}"
        xs, _ = solve_levels(d.spec, d.tower, max(d.X), reversed_gauge(d.spec, d.tower))
        assert any(not (xs[r] == d.X[r]) for r in xs), f"{name}: the second gauge did not move X"
        q2 = assemble_q(d.spec, xs)
        mod = module(name)
        chk = check_gauge_action(mod, d.Q, q2, mod.basis_elements())
        assert chk.ok, f"{name}: {chk.line()}"
    return "reversed pivots plus kernel perturbation give the same d"


# 8 ------------------------------------------------------------------------------------------
@record(8)
def test_uqgl_data():
    for n, fld in ((2, Field()), (3, Q32)):
        data = build_glq(n, fld)
        bad = _failed(data.checks)
        assert not bad, f"N={n}: {bad}"
        assert len(data.checks) == 4
    return "Hecke, both Psi trace relations, Tr_1(D^-1 Rhat^-1) = 1"


# 9 ------------------------------------------------------------------------------------------
@record(9)
def test_closed_form_charge():
    data = build_glq(2, Q32)
    rep = verify_closed_form(data, build_olj(data))
    bad = _failed(rep.checks)
    assert not bad, "; ".join(bad)
    return "Q^2 = 0, [Q, L] = 0, [Q, J]_+ = (1 - L)/lambda"


# 10 -----------------------------------------------------------------------------------------
@record(10)
def test_classical_limit():
    rep = classical_limit(build_glq(2, Field()))
    bad = _failed(rep.checks)
    assert not bad, bad
    return f"constant {rep.constant}, gamma~ = {'-' if rep.gamma_sign < 0 else '+'}J"


def main() -> int:
    tests = sorted((v for k, v in globals().items() if k.startswith("test_")), key=lambda f: f.criterion)
    for fn in tests:
        try:
            fn()
        except AssertionError:
            pass
    for line in summary_lines():
        print(line)
    return 0 if all(ok for ok, _, _ in RESULTS.values()) else 1


if __name__ == "__main__":
    sys.exit(main())
