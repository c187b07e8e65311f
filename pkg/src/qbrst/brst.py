"""The BRST charge: solving for the X_r blocks, assembling Q, checking d^2 = 0.

Q = Omega^i chi_i + sum_r Omega^{i_{r+1}} ... Omega^{i_1} X_r gamma_{k_1} ... gamma_{k_r}
where the Omega and gamma words multiply as wedges.  Y_r = A_{1->r} X_r A_{1->r+1}
is the gauge invariant part.  X_1 is fixed by X_1 A_{1->2} = -C and
the higher blocks by the recurrence

    A_{1->r} X_r A_{1->r+1} = A_{2->r} X_{r-1} ((-1)^r sigma_{r+1<-1} - 1) A_{1->r+1}

(with X_{r-1} on legs 2..r+1).  The solve is done in two steps: first
Z with A_{1->r} Z = RHS, then X with X A_{1->r+1} = Z.  X itself is gauge
dependent; Y_r is not, and that is checked.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .braid import AlgebraSpec, AntisymTower, Check, antisymmetrizers, braid_chain, compare
from .complex import GammaModule, Level, OperatorElement, apply_operator, differential
from .linalg import InconsistentSystem
from .pool import first_failure
from .tensor import Tensor, compose, decode, flow, kernel, kron, solve_linear, solve_right


class LevelUnsolvable(ArithmeticError):
    def __init__(self, r: int, exc: InconsistentSystem):
        self.r = r
        self.certificate = getattr(exc, "certificate", None)
        super().__init__(f"recurrence for level {r} has no solution: {exc}")


@dataclass
class BrstData:
    spec: AlgebraSpec
    tower: AntisymTower
    X: dict  # r -> X_r
    Y: dict  # r -> Y_r
    Q: OperatorElement
    checks: list = field(default_factory=list)
    timings: dict = field(default_factory=dict)

    @property
    def levels(self) -> list:
        return sorted(self.Y)


def _identity(d, legs, one):
    return Tensor.identity(d, legs, one)


def recurrence_rhs(spec: AlgebraSpec, tower: AntisymTower, r: int, x_prev: Tensor) -> Tensor:
    d, one = spec.dim, spec.field.one()
    chain = braid_chain(spec.sigma, "left", 1, r + 1, ops=spec.ops())
    m = chain * ((-1) ** r) - _identity(d, r + 1, one)
    x_sh = kron(_identity(d, 1, one), x_prev)
    return compose(tower.shifted(r - 1), x_sh, m, tower.A(r + 1))


def solve_level(spec: AlgebraSpec, tower: AntisymTower, r: int, x_prev: Tensor | None,
                col_order=None, perturb: Tensor | None = None) -> Tensor:
    """X_r; ``col_order`` picks other pivots, ``perturb`` adds T with T A_{1->r+1} = 0."""
    a_next = tower.A(r + 1)
    try:
        if r == 1:
            x = solve_right(spec.c * -1, a_next, col_order)
        else:
            rhs = recurrence_rhs(spec, tower, r, x_prev)
            z = solve_linear(tower.A(r), rhs, col_order)
            x = solve_right(z, a_next, col_order)
    except InconsistentSystem as exc:
        raise LevelUnsolvable(r, exc) from exc
    if perturb is not None:
        x = x + perturb
    return x


def kernel_perturbation(tower: AntisymTower, r: int, rows: int | None = None, scale=1) -> Tensor:
    """A nonzero T (r out, r+1 in legs) with T A_{1->r+1} = 0, if one exists."""
    a_next = tower.A(r + 1)
    d = a_next.dim
    ker = kernel(a_next.transpose())
    if not ker:
        return Tensor(d, r, r + 1, {})
    n_rows = d ** r if rows is None else rows
    out = {}
    for k in range(n_rows):
        vec = ker[k % len(ker)]
        row = {c: v * scale * (k + 1) for c, v in vec.items() if v}
        if row:
            out[k] = row
    return Tensor(d, r, r + 1, out)


def solve_levels(spec: AlgebraSpec, tower: AntisymTower, max_level: int | None = None,
                 gauge=None) -> tuple[dict, dict]:
    """X_r and Y_r for r = 1 .. h-1 (or up to the computed tower).

    ``gauge(r)`` may return ``(col_order, perturbation)`` to move X_r.
    """
    top = (tower.height if tower.height is not None else tower.top) - 1
    if max_level is not None:
        top = min(top, max_level)
    xs, ys = {}, {}
    prev = None
    for r in range(1, top + 1):
        order, pert = gauge(r) if gauge else (None, None)
        x = solve_level(spec, tower, r, prev, order, pert)
        xs[r] = x
        ys[r] = compose(tower.A(r), x, tower.A(r + 1))
        prev = x
    return xs, ys


def assemble_q(spec: AlgebraSpec, xs: dict) -> OperatorElement:
    d = spec.dim
    one = spec.field.one()
    terms = {}
    for i in range(d):
        terms[((i,), (i,), ())] = one
    levels = []
    for r in sorted(xs):
        y = xs[r]
        if y.is_zero():
            continue
        levels.append(Level(r, y))
        for k_code, row in y.rows.items():
            k = decode(k_code, d, r)
            for i_code, v in row.items():
                i = decode(i_code, d, r + 1)
                # written Omega^{i_{r+1}} ... Omega^{i_1}
                terms[(tuple(reversed(i)), (), k)] = v
    return OperatorElement(terms, levels, chi_part=True)


def build_brst(spec: AlgebraSpec, max_n: int | None = None, max_level: int | None = None,
               tower: AntisymTower | None = None, gauge=None) -> BrstData:
    t0 = time.perf_counter()
    tower = tower or antisymmetrizers(spec.sigma, max_n, ops=spec.ops())
    t1 = time.perf_counter()
    xs, ys = solve_levels(spec, tower, max_level, gauge)
    t2 = time.perf_counter()
    q = assemble_q(spec, xs)
    return BrstData(spec, tower, xs, ys, q,
                    timings={"antisymmetrizers": t1 - t0, "levels": t2 - t1})


# checks ------------------------------------------------------------------------------------
def check_first_level(spec: AlgebraSpec, data: BrstData) -> Check:
    y1 = data.Y.get(1)
    if y1 is None:
        return Check("first-level", True, None, "no levels (height 1)")
    return compare("first-level", y1, spec.c * -1, "Y_1 = -C")


def check_gauge_independence(spec: AlgebraSpec, data: BrstData) -> list[Check]:
    """Re-solve with reversed pivots plus kernel perturbations; Y must not move."""
    tower = data.tower
    out = []

    gauge = reversed_gauge(spec, tower)
    xs, ys = solve_levels(spec, tower, max(data.Y) if data.Y else 0, gauge)
    for r in sorted(data.Y):
        moved = not (xs[r] == data.X[r])
        c = compare(f"gauge-independence r={r}", ys[r], data.Y[r],
                    "X moved" if moved else "X unchanged")
        out.append(c)
    return out


def check_d_squared(mod: GammaModule, q: OperatorElement, elements=None, jobs: int = 1) -> Check:
    """d(d(phi)) = 0 on every basis element within the caps."""
    elements = mod.basis_elements() if elements is None else elements
    q1 = apply_operator(mod, q, mod.unit())
    if q1:
        return Check("d-squared", False, ((), ()), "Q does not annihilate the unit")

    def ok(e):
        phi = {e: mod.one}
        return not differential(mod, q, differential(mod, q, phi, q1), q1)

    k = first_failure(ok, elements, jobs)
    if k is not None:
        return Check("d-squared", False, elements[k], f"d^2 != 0 on element {k + 1} of {len(elements)}")
    return Check("d-squared", True, None, f"{len(elements)} basis elements")


def check_chain_inverses(spec: AlgebraSpec, max_r: int) -> list[Check]:
    """The right chain of sigma^-1 factors inverts the left chain of sigma factors."""
    out = []
    d, one = spec.dim, spec.field.one()
    ops = spec.ops()
    for r in range(2, max_r + 1):
        for k in range(1, r):
            left = braid_chain(spec.sigma, "left", k, r, ops=ops)
            inv = braid_chain(spec.sigma, "right", k, r, inverse_factors=True, ops=ops)
            out.append(compare(f"chain-inverse r={r} k={k}", compose(left, inv),
                               _identity(d, r, one)))
    return out


def chi_linear_part(q: OperatorElement) -> dict:
    return {k: v for k, v in q.terms.items() if k[1]}


def _inverse_chain(spec, k, r, ops):
    if k == r:
        return _identity(spec.dim, r, spec.field.one())
    return braid_chain(spec.sigma, "right", k, r, inverse_factors=True, ops=ops)


def verify_chi_linear(spec: AlgebraSpec, tower: AntisymTower, xs: dict) -> list[Check]:
    """Tensor-level cancellation of the chi-linear terms of Q^2, level by level.

    Initial condition X_1 A_{1->2} = -C, then for r >= 2 the cancellation

        A_{1->r+1} X_r (sum_k (-1)^{r-k} sigma^-1_{r<-k}) A_{1->r-1}
          = - A_{1->r+1} (sigma_{r+1<-1} + (-1)^{r-1}) X_{r-1}[2..] sigma^-1_{r<-1} A_{1->r-1},

    the chain identity sigma^-1_{r<-1} A_{1->r-1} = A_{2->r} sigma^-1_{r<-1} that turns
    it into the solved recurrence, and the recurrence residual itself.  Products
    are in written order.
    """
    d, one = spec.dim, spec.field.one()
    ops = spec.ops()
    e = _identity(d, 1, one)
    out = []
    if 1 in xs:
        out.append(compare("initial condition r=1", compose(xs[1], tower.A(2)), spec.c * -1,
                           "A_12 X_1 = -C"))
    for r in sorted(xs):
        if r < 2:
            continue
        am1 = kron(tower.A(r - 1), e)
        s = _identity(d, r, one)
        for k in range(1, r):
            s = s + _inverse_chain(spec, k, r, ops) * ((-1) ** (r - k))
        lhs = flow(tower.A(r + 1), xs[r], s, am1)
        m = braid_chain(spec.sigma, "left", 1, r + 1, ops=ops) + _identity(d, r + 1, one) * ((-1) ** (r - 1))
        sinv = _inverse_chain(spec, 1, r, ops)
        x_sh = kron(e, xs[r - 1])
        rhs = flow(tower.A(r + 1), m, x_sh, sinv, am1) * -1
        out.append(compare(f"chi-linear cancellation r={r}", lhs, rhs))
        out.append(compare(f"chain identity r={r}", flow(sinv, am1), flow(tower.shifted(r - 1), sinv),
                           "sigma^-1_{r<-1} A_{1->r-1} = A_{2->r} sigma^-1_{r<-1}"))
        rec = flow(tower.A(r + 1), braid_chain(spec.sigma, "left", 1, r + 1, ops=ops) * ((-1) ** r)
                   - _identity(d, r + 1, one), x_sh, tower.shifted(r - 1))
        out.append(compare(f"recurrence residual r={r}", flow(tower.A(r + 1), xs[r], tower.A(r)), rec))
    return out


def check_gauge_action(mod: GammaModule, q: OperatorElement, q2: OperatorElement,
                       elements=None, name="gauge-independence (action)", jobs: int = 1) -> Check:
    """Two assembled Q's act identically on every basis element."""
    elements = mod.basis_elements() if elements is None else elements

    def ok(e):
        phi = {e: mod.one}
        return apply_operator(mod, q, phi) == apply_operator(mod, q2, phi)

    k = first_failure(ok, elements, jobs)
    if k is not None:
        return Check(name, False, elements[k], "actions differ")
    return Check(name, True, None, f"{len(elements)} basis elements")


def reversed_gauge(spec: AlgebraSpec, tower: AntisymTower, perturb: bool = True):
    """Gauge choice: reversed pivot order, optionally plus a kernel direction."""
    def gauge(r):
        order = list(reversed(range(spec.dim ** (r + 1))))
        pert = kernel_perturbation(tower, r, scale=spec.field(3)) if perturb else None
        return order, pert
    return gauge
