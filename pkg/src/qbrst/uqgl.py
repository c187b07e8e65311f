"""U_q(gl(N)) data: the R-matrix, Psi and D, and the pair-index (sigma, C).

Index pairs ^a_b of the N x N generators are flattened to a single label.
Upper pairs ^j_l become label l*N + j and lower pairs ^m_p become m*N + p;
this is the reading under which the braided Jacobi identity and its
companions hold, and at q = 1 it turns sigma into the flip.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field

from .braid import AlgebraSpec, Check, compare
from .linalg import add_scaled
from .scalar import Field
from .tensor import Tensor, compose, inverse, solve_linear


@dataclass
class GlqData:
    n: int
    field: Field
    R: Tensor
    Rhat: Tensor
    P: Tensor
    Psi: Tensor | None = None
    D: Tensor | None = None
    checks: list = field(default_factory=list)

    @property
    def lam(self):
        return self.field.lam

    def Rinv(self) -> Tensor:
        if not hasattr(self, "_Rinv"):
            self._Rinv = inverse(self.R)
        return self._Rinv

    def Rhat_inv(self) -> Tensor:
        if not hasattr(self, "_Rhat_inv"):
            self._Rhat_inv = inverse(self.Rhat)
        return self._Rhat_inv

    def Dinv(self) -> Tensor:
        if not hasattr(self, "_Dinv"):
            self._Dinv = inverse(self.D)
        return self._Dinv


def build_R(n: int, fld: Field) -> GlqData:
    """Drinfeld-Jimbo R^{i1 i2}_{j1 j2} with the step function Theta(i1 > i2)."""
    if n < 1:
        raise ValueError("N must be positive")
    q, lam = fld.q, fld.lam
    one = fld.one()
    ent = []
    for i1, i2 in itertools.product(range(n), repeat=2):
        ent.append(((i1, i2), (i1, i2), q if i1 == i2 else one))
        if i1 > i2:
            ent.append(((i1, i2), (i2, i1), lam))
    R = Tensor.from_entries(n, 2, 2, ent)
    P = Tensor.permutation(n, one)
    return GlqData(n, fld, R, compose(P, R), P)


def hecke_check(data: GlqData) -> Check:
    rh = data.Rhat
    lhs = compose(rh, rh)
    rhs = rh * data.lam + Tensor.identity(data.n, 2, data.field.one())
    return compare("hecke", lhs, rhs, "Rhat^2 = lambda Rhat + 1")


def _delta_rhs(n: int, one) -> Tensor:
    # right hand side P_13 of the trace relations, as a 4-out / 0-in tensor
    # indexed (a, e, c, f) with value delta^a_f delta^e_c
    ent = [((a, e, e, a), (), one) for a in range(n) for e in range(n)]
    return Tensor.from_entries(n, 4, 0, ent)


def _trace_system(data: GlqData, first: bool) -> Tensor:
    """Linear map Psi -> Tr_2 Rhat_12 Psi_23 (first) or Tr_2 Psi_12 Rhat_23.

    Rows are (a, e, c, f) as in P_13; columns are Psi entries (x, e, b, f)
    meaning Psi^{xe}_{bf}.
    """
    n = data.n
    rows: dict = defaultdict(dict)
    from .tensor import encode

    for (a, b), (c, x), v in data.Rhat.items():
        if first:
            # sum_{b,x} Rhat^{ab}_{cx} Psi^{xe}_{bf}
            for e, f in itertools.product(range(n), repeat=2):
                r = encode((a, e, c, f), n)
                col = encode((x, e, b, f), n)
                add_scaled(rows[r], {col: v}, 1)
        else:
            # sum_{b,x} Psi^{ab'}_{cx'} Rhat^{x'e}_{b'f}: here Rhat^{xe}_{bf}
            xx, ee, bb, ff = a, b, c, x
            for a2, c2 in itertools.product(range(n), repeat=2):
                r = encode((a2, ee, c2, ff), n)
                col = encode((a2, bb, c2, xx), n)
                add_scaled(rows[r], {col: v}, 1)
    return Tensor(n, 4, 4, {r: row for r, row in rows.items() if row})


def _psi_from_vector(n: int, vec: Tensor) -> Tensor:
    ent = {}
    for out, _, v in vec.items():
        x, e, b, f = out
        ent[(x, e, b, f)] = v
    return Tensor.from_entries(n, 2, 2, (((x, e), (b, f), v) for (x, e, b, f), v in ent.items()))


def _psi_as_vector(psi: Tensor) -> Tensor:
    n = psi.dim
    return Tensor.from_entries(n, 4, 0, (((x, e, b, f), (), v) for (x, e), (b, f), v in psi.items()))


def solve_psi(data: GlqData, first: bool = True) -> Tensor:
    m = _trace_system(data, first)
    rhs = _delta_rhs(data.n, data.field.one())
    return _psi_from_vector(data.n, solve_linear(m, rhs))


def build_Psi_D(data: GlqData) -> GlqData:
    """Psi from Tr_2 Rhat_12 Psi_23 = P_13, then D = Tr_2 Psi_12."""
    data.Psi = solve_psi(data, first=True)
    data.D = trace_second(data.Psi)
    return data


def trace_second(psi: Tensor) -> Tensor:
    n = psi.dim
    ent = [((a,), (c,), v) for (a, b), (c, bb), v in psi.items() if b == bb]
    return Tensor.from_entries(n, 1, 1, ent)


def psi_checks(data: GlqData) -> list[Check]:
    n = data.n
    one = data.field.one()
    rhs = _delta_rhs(n, one)
    vec = _psi_as_vector(data.Psi)
    out = [
        compare("psi-trace-left", compose(_trace_system(data, True), vec), rhs,
                "Tr_2 Rhat_12 Psi_23 = P_13"),
        compare("psi-trace-right", compose(_trace_system(data, False), vec), rhs,
                "Tr_2 Psi_12 Rhat_23 = P_13"),
    ]
    # Tr_1 (D_1^{-1} Rhat^{-1}) = 1_2
    dinv = data.Dinv()
    rhi = data.Rhat_inv()
    ent = []
    for (c, e), (a, f), v in rhi.items():
        w = dinv.entry((a,), (c,))
        if w:
            ent.append(((e,), (f,), w * v))
    tr = Tensor.from_entries(n, 1, 1, ent)
    out.append(compare("quantum-trace-normalisation", tr, Tensor.identity(n, 1, one),
                       "Tr_1(D_1^-1 Rhat^-1) = 1"))
    return out


# pair-index sigma and C ----------------------------------------------------------------
def _index(t: Tensor, key_pos):
    """Group entries of a (2,2) or (1,1) tensor by one index position."""
    g = defaultdict(list)
    for out, inn, v in t.items():
        idx = out + inn
        g[idx[key_pos]].append((idx, v))
    return g


def raw_sigma(data: GlqData) -> dict:
    """raw[(j,l,n,q,m,p,i,k)] = sum R^{ju}_{sp} (R^-1)^{sm}_{kr} (D^-1)^f_o R^{no}_{ut} D^t_l (R^-1)^{ri}_{qf}."""
    R, Ri, D, Di = data.R, data.Rinv(), data.D, data.Dinv()
    ri_by_first = _index(Ri, 0)
    r_by_second = _index(R, 1)  # R^{n o}_{u t} grouped by o
    d_by_out = _index(D, 0)  # D^t_l grouped by t
    di = list(Di.items())
    # T1[(n, f, u, l)] = sum_{o,t} Dinv^f_o R^{no}_{ut} D^t_l
    t1: dict = defaultdict(lambda: 0)
    for (f,), (o,), dv in di:
        for (nn, oo, u, t), rv in r_by_second.get(o, ()):
            for (tt, l), dv2 in d_by_out.get(t, ()):
                t1[(nn, f, u, l)] += dv * rv * dv2
    t1_by_u = defaultdict(list)
    for (nn, f, u, l), v in t1.items():
        if v:
            t1_by_u[u].append((nn, f, l, v))
    rif = defaultdict(list)  # Rinv^{ri}_{qf} grouped by f
    for (r, i), (qq, f), v in Ri.items():
        rif[f].append((r, i, qq, v))
    raw: dict = defaultdict(lambda: 0)
    for (j, u), (s, p), rv in R.items():
        for (ss, m, k, r), riv in ri_by_first.get(s, ()):
            for nn, f, l, tv in t1_by_u.get(u, ()):
                for r2, i, qq, riv2 in rif.get(f, ()):
                    if r2 != r:
                        continue
                    raw[(j, l, nn, qq, m, p, i, k)] += rv * riv * tv * riv2
    return {k: v for k, v in raw.items() if v}


def build_sigma_C(data: GlqData, name: str | None = None) -> AlgebraSpec:
    n = data.n
    one = data.field.one()
    raw = raw_sigma(data)

    def lab(a, b):
        return a * n + b

    sig = [((lab(l, j), lab(qq, nn)), (lab(m, p), lab(i, k)), v)
           for (j, l, nn, qq, m, p, i, k), v in raw.items()]
    sigma = Tensor.from_entries(n * n, 2, 2, sig)
    cent = []
    for qq, p, i, j, m, nn in itertools.product(range(n), repeat=6):
        v = one if (qq == j and i == nn and m == p) else 0
        for t in range(n):
            w = raw.get((qq, t, t, p, i, j, m, nn))
            if w:
                v = v - w
        if v:
            cent.append(((lab(p, qq),), (lab(i, j), lab(m, nn)), v))
    c = Tensor.from_entries(n * n, 1, 2, cent)
    spec = AlgebraSpec(name or f"uq-gl{n}", n * n, sigma, c, data.field)
    spec.meta.update({"preset": "uq-gl", "N": n, "q": data.field.describe(),
                      "generators": [f"chi^{j + 1}_{l + 1}" for l in range(n) for j in range(n)]})
    return spec


def build_glq(n: int, fld: Field) -> GlqData:
    data = build_Psi_D(build_R(n, fld))
    data.checks = [hecke_check(data)] + psi_checks(data)
    return data


def glq_spec(n: int, fld: Field) -> AlgebraSpec:
    data = build_glq(n, fld)
    spec = build_sigma_C(data)
    spec.meta["glq"] = data
    return spec


def transcription_check(data: GlqData, spec: AlgebraSpec) -> Check:
    """Rebuild Psi from the second trace relation alone and compare sigma, C."""
    alt = GlqData(data.n, data.field, data.R, data.Rhat, data.P)
    alt.Psi = solve_psi(alt, first=False)
    alt.D = trace_second(alt.Psi)
    spec2 = build_sigma_C(alt)
    same = compare("transcription-sigma", spec.sigma, spec2.sigma)
    c2 = compare("transcription-C", spec.c, spec2.c)
    ok = same.ok and c2.ok
    return Check("transcription-safety", ok, same.witness or c2.witness,
                 "sigma, C from the second trace relation coincide")
