"""The braiding sigma on its own and together with the structure constants C.

Products of leg-embedded operators follow the written (FRT) order of the
formulas they come from, evaluated with :func:`~qbrst.tensor.flow`.  The
antisymmetrizers are computed by pushing row vectors through chains of
embedded sigma factors, which keeps the dim-4, five-leg case cheap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .linalg import Echelon, add_scaled, nullspace, solve_rows
from .scalar import Field
from .tensor import (
    ShapeError,
    SingularTensor,
    Tensor,
    compose,
    decode,
    embed,
    flow,
    inverse,
    kron,
    row_times,
    tensor_rank,
)


# checks -------------------------------------------------------------------------
@dataclass
class Check:
    """Outcome of one exact identity check."""

    name: str
    ok: bool
    witness: tuple | None = None
    detail: str = ""

    def line(self) -> str:
        s = f"{self.name}: {'pass' if self.ok else 'FAIL'}"
        if self.detail:
            s += f" ({self.detail})"
        if not self.ok and self.witness is not None:
            s += f" witness={fmt_witness(self.witness)}"
        return s

    def record(self) -> dict:
        rec = {"name": self.name, "ok": self.ok}
        if self.detail:
            rec["detail"] = self.detail
        if self.witness is not None:
            rec["witness"] = fmt_witness(self.witness)
        return rec


def fmt_witness(w) -> str:
    if isinstance(w, str):
        return w
    if len(w) == 2:
        # basis element (chi word, gamma word) of the exterior extension
        x, g = w
        return "X[" + ",".join(str(i + 1) for i in x) + "] G[" + ",".join(str(i + 1) for i in g) + "]"
    out, inn, val = w
    o = ",".join(str(i + 1) for i in out)
    i = ",".join(str(i + 1) for i in inn)
    return f"[{o}|{i}] residue {val}"


def compare(name: str, lhs: Tensor, rhs: Tensor, detail: str = "") -> Check:
    """Exact equality with the lexicographically smallest differing entry as witness."""
    diff = lhs - rhs
    return Check(name, diff.is_zero(), diff.witness(), detail)


# algebra data -------------------------------------------------------------------
class NotSemisimple(ArithmeticError):
    """sigma is not diagonalisable at eigenvalue 1; the projector is undefined."""


class MissingUnitEigenvalue(ArithmeticError):
    pass


@dataclass
class AlgebraSpec:
    """A quantum Lie algebra datum (N, sigma, C)."""

    name: str
    dim: int
    sigma: Tensor
    c: Tensor
    field: Field
    parity: tuple | None = None
    meta: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def __post_init__(self):
        d = self.dim
        if self.sigma.shape != (d, 2, 2):
            raise ShapeError(f"sigma must have shape (dim={d}, 2 out, 2 in), got {self.sigma.shape}")
        if self.c.shape != (d, 1, 2):
            raise ShapeError(f"C must have shape (dim={d}, 1 out, 2 in), got {self.c.shape}")
        try:
            self._sigma_inv = inverse(self.sigma)
        except SingularTensor:
            raise SingularTensor("sigma is not invertible") from None

    @property
    def sigma_inv(self) -> Tensor:
        return self._sigma_inv

    def ops(self) -> "BraidOps":
        if not hasattr(self, "_ops"):
            self._ops = BraidOps(self.sigma, self._sigma_inv)
        return self._ops

    def is_involutive(self) -> bool:
        return compose(self.sigma, self.sigma) == Tensor.identity(self.dim, 2, self.field.one())


# leg-embedded sigma factors -----------------------------------------------------------
class BraidOps:
    """Cache of sigma_{k,k+1} (and inverses / transposes) embedded in n legs."""

    def __init__(self, sigma: Tensor, sigma_inv: Tensor | None = None):
        self.sigma = sigma
        self.dim = sigma.dim
        self._inv = sigma_inv
        self._cache: dict = {}

    @property
    def sigma_inv(self) -> Tensor:
        if self._inv is None:
            self._inv = inverse(self.sigma)
        return self._inv

    def factor(self, k: int, n: int, inv: bool = False, transpose: bool = False) -> Tensor:
        key = (k, n, inv, transpose)
        t = self._cache.get(key)
        if t is None:
            base = self.sigma_inv if inv else self.sigma
            t = embed(base, (k, k + 1), n)
            if transpose:
                t = t.transpose()
            self._cache[key] = t
        return t

    # Row-vector forms of the sums in the antisymmetrizer recursions.  With
    # transposed factors the same loops give v times the transpose of the
    # mirrored sums sigma_{n<-n-k} and sigma_{1->k+1}.
    def right_sum_row(self, v: dict, n: int, transposed: bool = False) -> dict:
        """v . (1 + sum_k (-1)^(n-k) sigma_{k->n})."""
        acc = dict(v)
        w = v
        for k in range(n - 1, 0, -1):
            w = row_times(w, self.factor(k, n, transpose=transposed))
            add_scaled(acc, w, (-1) ** (n - k))
        return acc

    def left_sum_row(self, v: dict, n: int, transposed: bool = False) -> dict:
        """v . (1 + sum_k (-1)^k sigma_{k+1<-1})."""
        acc = dict(v)
        w = v
        for k in range(1, n):
            w = row_times(w, self.factor(k, n, transpose=transposed))
            add_scaled(acc, w, (-1) ** k)
        return acc


def braid_chain(
    sigma: Tensor,
    kind: str,
    k: int,
    n: int,
    total: int | None = None,
    inverse_factors: bool = False,
    ops: BraidOps | None = None,
) -> Tensor:
    """Ordered product of embedded sigma factors on ``total`` legs (default n).

    ``kind="right"`` is sigma_{k->n} = sigma_{k,k+1} ... sigma_{n-1,n};
    ``kind="left"`` is sigma_{n<-k} = sigma_{n-1,n} ... sigma_{k,k+1}; both in
    written order.  With ``inverse_factors`` every factor is sigma^-1; the
    ``right`` kind then gives the inverse of the ``left`` chain.
    """
    if n <= k:
        raise ValueError(f"braid chain needs n > k, got k={k}, n={n}")
    total = n if total is None else total
    if k < 1 or n > total:
        raise ValueError(f"chain {k}..{n} does not fit in {total} legs")
    ops = ops or BraidOps(sigma)
    idx = list(range(k, n))
    if kind == "left":
        idx.reverse()
    elif kind != "right":
        raise ValueError(f"unknown chain kind {kind!r}")
    return flow(*(ops.factor(j, total, inv=inverse_factors) for j in idx))


# Yang-Baxter --------------------------------------------------------------------------
def check_yang_baxter(sigma: Tensor) -> Check:
    if sigma.n_out != 2 or sigma.n_in != 2:
        raise ShapeError("Yang-Baxter check needs a (2,2) tensor")
    s12 = embed(sigma, (1, 2), 3)
    s23 = embed(sigma, (2, 3), 3)
    return compare("yang-baxter", flow(s12, s23, s12), flow(s23, s12, s23))


# antisymmetrizers ---------------------------------------------------------------------
def _factor_rows(t: Tensor):
    """Rank factorisation of t's rows: (basis {tag: row}, coeffs {row: {tag: c}})."""
    ech = Echelon(track=True)
    basis: dict = {}
    coeffs: dict = {}
    for r in sorted(t.rows):
        row = t.rows[r]
        if ech.add(row, tag=r) is not None:
            basis[r] = row
            coeffs[r] = {r: 1}
        else:
            coeffs[r] = ech.express(row)
    return basis, coeffs


def kron_identity_apply(a: Tensor, side: str, f, n_legs_out: int) -> Tensor:
    """compose(K, F) with K = a (x) 1 (side "first") or 1 (x) a (side "last"),
    F given by its action ``f`` on row vectors; K must be square."""
    d = a.dim
    m = a.n_out
    basis, coeffs = _factor_rows(a)
    images: dict = {}
    for b, row in basis.items():
        for j in range(d):
            if side == "first":
                v = {c * d + j: x for c, x in row.items()}
            else:
                v = {j * d**m + c: x for c, x in row.items()}
            img = f(v)
            if img:
                images[(b, j)] = img
    rows: dict = {}
    for a_idx, comb in coeffs.items():
        for j in range(d):
            acc: dict = {}
            for b, c in comb.items():
                img = images.get((b, j))
                if img:
                    add_scaled(acc, img, c)
            if acc:
                r = a_idx * d + j if side == "first" else j * d**m + a_idx
                rows[r] = acc
    return Tensor(d, m + 1, n_legs_out, rows)


class FormsDisagree(ArithmeticError):
    pass


@dataclass
class AntisymTower:
    """A_{1->1}, ..., A_{1->top}; ``height`` is None if the cap was hit first."""

    tensors: list
    height: int | None
    max_n: int
    ranks: list
    form_checks: list

    def A(self, n: int) -> Tensor:
        return self.tensors[n - 1]

    def shifted(self, n: int) -> Tensor:
        """A_{2->n+1}: A_{1->n} acting on legs 2..n+1."""
        a = self.A(n)
        return kron(Tensor.identity(a.dim, 1, 1), a)

    @property
    def top(self) -> int:
        return len(self.tensors)

    @property
    def effective_height(self) -> int:
        """Height, or the largest computed level when the cap was reached."""
        return self.height if self.height is not None else self.top


def antisymmetrizers(sigma: Tensor, max_n: int | None = None, ops: BraidOps | None = None,
                     check_forms: bool = True) -> AntisymTower:
    """Build A_{1->n} for n = 1, 2, ... until it vanishes or n = max_n.

    Every level is computed in four equivalent forms (left or right
    recursion, on legs 1.. or 2..) and they are compared exactly; a
    disagreement raises :class:`FormsDisagree`.  The two right-multiplied
    forms use the mirrored chains sigma_{n<-n-k} and sigma_{1->k+1}: with
    the chains sigma_{k+1<-1} and sigma_{k->n} in those positions the
    identity already fails for the plain flip.
    """
    d = sigma.dim
    max_n = d * d + 1 if max_n is None else max_n
    ops = ops or BraidOps(sigma)
    one = _one_like(sigma)
    tower = [Tensor.identity(d, 1, one)]
    ranks = [d]
    checks: list = []
    height = None
    for n in range(2, max_n + 1):
        prev = tower[-1]
        f1 = kron_identity_apply(prev, "first", lambda v: ops.right_sum_row(v, n), n)
        a_n = f1
        if check_forms:
            f3 = kron_identity_apply(prev, "last", lambda v: ops.left_sum_row(v, n), n)
            pt = prev.transpose()
            # A_{1->n-1} (1 + sum_k (-1)^k sigma_{n<-n-k}) and
            # A_{2->n} (1 + sum_k (-1)^k sigma_{1->k+1}), via transposes
            f2 = kron_identity_apply(
                pt, "first", lambda v: ops.right_sum_row(v, n, transposed=True), n).transpose()
            f4 = kron_identity_apply(
                pt, "last", lambda v: ops.left_sum_row(v, n, transposed=True), n).transpose()
            for label, other in (("left-chain form", f2), ("shifted left form", f3),
                                 ("shifted right form", f4)):
                c = compare(f"antisymmetrizer n={n} {label}", a_n, other)
                checks.append(c)
                if not c.ok:
                    raise FormsDisagree(c.line())
        tower.append(a_n)
        if a_n.is_zero():
            ranks.append(0)
            height = n - 1
            break
        ranks.append(tensor_rank(a_n))
    return AntisymTower(tower, height, max_n, ranks, checks)


def _one_like(t: Tensor):
    for row in t.rows.values():
        for v in row.values():
            return v * 0 + 1
    return 1


# eigenvalue-1 projector ------------------------------------------------------------------
def unit_eigenprojector(sigma: Tensor) -> Tensor:
    """Projector onto ker(sigma - 1) along im(sigma - 1)."""
    d2 = sigma.dim**2
    one = _one_like(sigma)
    m = sigma - Tensor.identity(sigma.dim, 2, one)
    ker = nullspace(m.rows.values(), list(range(d2)))
    if not ker:
        raise MissingUnitEigenvalue("sigma has no eigenvalue 1")
    # image basis: independent columns of (sigma - 1)
    cols = m.transpose()
    ech = Echelon()
    img = []
    for c in sorted(cols.rows):
        if ech.add(cols.rows[c]) is not None:
            img.append(cols.rows[c])
    if len(ker) + len(img) != d2:
        raise NotSemisimple("kernel and image of sigma - 1 do not fill the space")
    # solve sum_a x_a k_a + sum_b y_b i_b = e_j for every basis vector e_j
    unknowns = [("k", a) for a in range(len(ker))] + [("i", b) for b in range(len(img))]
    rows: dict = {}
    for tag, vec in zip(unknowns, ker + img):
        for r, v in vec.items():
            rows.setdefault(r, {})[tag] = v
    order = {u: k for k, u in enumerate(unknowns)}
    try:
        sol = solve_rows(
            ((r, rows.get(r, {}), {r: one}) for r in range(d2)), col_key=order.__getitem__
        ).solution
    except ArithmeticError:
        raise NotSemisimple("kernel and image of sigma - 1 intersect") from None
    if len(sol) != d2:
        raise NotSemisimple("kernel and image of sigma - 1 intersect")
    # P e_j = sum_a x_a(j) k_a
    p: dict = {}
    for a, kvec in enumerate(ker):
        coeff = sol.get(("k", a), {})
        for j, x in coeff.items():
            for r, v in kvec.items():
                row = p.setdefault(r, {})
                add_scaled(row, {j: v * x}, 1)
    return Tensor(sigma.dim, 2, 2, p)


def check_c_condition(p1: Tensor, c: Tensor) -> Check:
    prod = compose(c, p1)
    return Check("unit-eigenspace", prod.is_zero(), prod.witness(), "C vanishes on ker(sigma-1)")


# quantum Lie axioms --------------------------------------------------------------------
def axiom_tensors(sigma: Tensor, c: Tensor) -> dict:
    """(lhs, rhs) pairs for the three identities tying C to sigma."""
    d = sigma.dim
    one = _one_like(sigma)
    e = Tensor.identity(d, 1, one)
    c1 = kron(c, e)  # C on legs 1,2, leg 3 passes
    c2 = kron(e, c)  # C on legs 2,3
    s1 = kron(sigma, e)
    s2 = kron(e, sigma)
    cc = compose(c, c1)
    jac = (cc, compose(cc, s2) + compose(c, c2))
    hom = (compose(sigma, c1), compose(c2, s1, s2))
    t = compose(c1, s2) + c2
    exch = (compose(sigma, t), compose(t, s1))
    return {"braided-jacobi": jac, "c-sigma-naturality": hom, "c-sigma-exchange": exch}


def check_qlie_axioms(spec: AlgebraSpec) -> list[Check]:
    """Yang-Baxter, the three C/sigma identities and the eigenspace condition."""
    out = [check_yang_baxter(spec.sigma)]
    for name, (lhs, rhs) in axiom_tensors(spec.sigma, spec.c).items():
        out.append(compare(name, lhs, rhs))
    try:
        p1 = unit_eigenprojector(spec.sigma)
        out.append(check_c_condition(p1, spec.c))
    except NotSemisimple as exc:
        out.append(Check("unit-eigenspace", False, None, f"unsupported: {exc}"))
    except MissingUnitEigenvalue as exc:
        out.append(Check("unit-eigenspace", False, None, str(exc)))
    spec.flags.update({c.name: c.ok for c in out})
    return out


def signed_permutation_sum(dim: int, n: int, one=1) -> Tensor:
    """sum over permutations p of n legs of sign(p) * P_p (classical antisymmetrizer)."""
    import itertools

    from .tensor import encode

    rows: dict = {}
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a in range(n) for b in range(a + 1, n) if perm[a] > perm[b])
        s = one if inv % 2 == 0 else -one
        for idx in itertools.product(range(dim), repeat=n):
            out = tuple(idx[perm[k]] for k in range(n))
            row = rows.setdefault(encode(out, dim), {})
            add_scaled(row, {encode(idx, dim): s}, 1)
    return Tensor(dim, n, n, rows)


__all__ = [
    "AlgebraSpec", "AntisymTower", "BraidOps", "Check", "FormsDisagree", "MissingUnitEigenvalue",
    "NotSemisimple", "antisymmetrizers", "axiom_tensors", "braid_chain", "check_c_condition",
    "check_qlie_axioms", "check_yang_baxter", "compare", "decode", "signed_permutation_sum",
    "unit_eigenprojector",
]
