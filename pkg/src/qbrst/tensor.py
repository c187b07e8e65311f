"""Multi-leg tensors over exact coefficients, in FRT leg notation.

A :class:`Tensor` with ``n_out`` out-legs and ``n_in`` in-legs over a base
space of dimension ``dim`` is a sparse matrix: rows are out multi-indices
(upper indices), columns are in multi-indices (lower indices).  Multi-indices
are stored 0-based and encoded as integers with leg 1 most significant.

``compose(a, b)`` contracts the in-legs of ``a`` with the out-legs of ``b``
(matrix product).  Products written in FRT notation, such as
``sigma_12 sigma_23 sigma_12``, contract the upper indices of each factor with
the lower indices of the next one; :func:`flow` evaluates a product in that
written order.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

from .linalg import InconsistentSystem, add_scaled, nullspace, rank, solve_rows


class ShapeError(ValueError):
    pass


@lru_cache(maxsize=None)
def _powers(dim: int, n: int) -> tuple:
    return tuple(dim ** (n - 1 - k) for k in range(n))


def encode(idx: Sequence[int], dim: int) -> int:
    v = 0
    for i in idx:
        v = v * dim + i
    return v


def decode(code: int, dim: int, n: int) -> tuple:
    out = [0] * n
    for k in range(n - 1, -1, -1):
        code, out[k] = divmod(code, dim)
    return tuple(out)


class Tensor:
    __slots__ = ("dim", "n_out", "n_in", "rows")

    def __init__(self, dim: int, n_out: int, n_in: int, rows: dict | None = None):
        self.dim = dim
        self.n_out = n_out
        self.n_in = n_in
        self.rows = {} if rows is None else {r: c for r, c in rows.items() if c}

    # construction ----------------------------------------------------------
    @classmethod
    def from_entries(cls, dim: int, n_out: int, n_in: int, entries: Iterable) -> "Tensor":
        """``entries`` yields ``(out_index_tuple, in_index_tuple, value)`` (0-based)."""
        rows: dict = {}
        for out, inn, v in entries:
            if len(out) != n_out or len(inn) != n_in:
                raise ShapeError(f"index {out},{inn} does not match shape ({n_out},{n_in})")
            for i in (*out, *inn):
                if not 0 <= i < dim:
                    raise ShapeError(f"index {i + 1} outside [1, {dim}]")
            if not v:
                continue
            r = rows.setdefault(encode(out, dim), {})
            c = encode(inn, dim)
            w = r.get(c)
            w = v if w is None else w + v
            if w:
                r[c] = w
            else:
                del r[c]
        return cls(dim, n_out, n_in, rows)

    @classmethod
    def identity(cls, dim: int, legs: int = 1, one=1) -> "Tensor":
        return cls(dim, legs, legs, {i: {i: one} for i in range(dim**legs)})

    @classmethod
    def zero(cls, dim: int, n_out: int, n_in: int) -> "Tensor":
        return cls(dim, n_out, n_in, {})

    @classmethod
    def permutation(cls, dim: int, one=1) -> "Tensor":
        """P with P e_i (x) e_j = e_j (x) e_i."""
        return cls.from_entries(
            dim, 2, 2, (((j, i), (i, j), one) for i in range(dim) for j in range(dim))
        )

    # access ------------------------------------------------------------------
    @property
    def shape(self) -> tuple:
        return (self.dim, self.n_out, self.n_in)

    def entry(self, out: Sequence[int], inn: Sequence[int]):
        return self.rows.get(encode(out, self.dim), {}).get(encode(inn, self.dim), 0)

    def items(self):
        d = self.dim
        for r in sorted(self.rows):
            ro = decode(r, d, self.n_out)
            row = self.rows[r]
            for c in sorted(row):
                yield ro, decode(c, d, self.n_in), row[c]

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    def witness(self):
        """Lexicographically smallest nonzero entry, as ``(out, in, value)``."""
        best = None
        for out, inn, v in self.items():
            key = (out, inn)
            if best is None or key < best[0]:
                best = (key, v)
        if best is None:
            return None
        (out, inn), v = best
        return out, inn, v

    def map_values(self, f) -> "Tensor":
        return Tensor(
            self.dim,
            self.n_out,
            self.n_in,
            {r: {c: f(v) for c, v in row.items() if f(v)} for r, row in self.rows.items()},
        )

    # linear structure ----------------------------------------------------------
    def _check_same(self, other: "Tensor"):
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check_same(other)
        rows = {r: dict(c) for r, c in self.rows.items()}
        for r, row in other.rows.items():
            t = rows.setdefault(r, {})
            add_scaled(t, row, 1)
        return Tensor(self.dim, self.n_out, self.n_in, rows)

    def __neg__(self) -> "Tensor":
        return self.scale(-1)

    def __sub__(self, other: "Tensor") -> "Tensor":
        return self + (-other)

    def scale(self, c) -> "Tensor":
        if not c:
            return Tensor(self.dim, self.n_out, self.n_in)
        return Tensor(
            self.dim, self.n_out, self.n_in,
            {r: {k: c * v for k, v in row.items()} for r, row in self.rows.items()},
        )

    def __mul__(self, c):
        if isinstance(c, Tensor):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"Tensor(dim={self.dim}, out={self.n_out}, in={self.n_in}, nnz={self.nnz()})"

    def transpose(self) -> "Tensor":
        rows: dict = {}
        for r, row in self.rows.items():
            for c, v in row.items():
                rows.setdefault(c, {})[r] = v
        return Tensor(self.dim, self.n_in, self.n_out, rows)


# products ----------------------------------------------------------------------
def compose(*ts: Tensor) -> Tensor:
    """Matrix product ``t1 t2 ... tn``: each in-leg set contracted with the
    next tensor's out-legs."""
    out = ts[-1]
    for t in reversed(ts[:-1]):
        out = _compose2(t, out)
    return out


def _compose2(a: Tensor, b: Tensor) -> Tensor:
    if a.dim != b.dim or a.n_in != b.n_out:
        raise ShapeError(f"cannot compose {a!r} with {b!r}")
    brows = b.rows
    rows = {}
    for r, arow in a.rows.items():
        acc: dict = {}
        for m, av in arow.items():
            brow = brows.get(m)
            if brow:
                add_scaled(acc, brow, av)
        if acc:
            rows[r] = acc
    return Tensor(a.dim, a.n_out, b.n_in, rows)


def flow(*ops: Tensor) -> Tensor:
    """Product in FRT written order: ``flow(X, Y) = compose(Y, X)``."""
    out = ops[0]
    for t in ops[1:]:
        out = _compose2(t, out)
    return out


def kron(a: Tensor, b: Tensor) -> Tensor:
    """Tensor product: legs of ``a`` first, then legs of ``b``."""
    if a.dim != b.dim:
        raise ShapeError("dimension mismatch in kron")
    so, si = a.dim**b.n_out, a.dim**b.n_in
    rows = {}
    for ra, rowa in a.rows.items():
        for rb, rowb in b.rows.items():
            rows[ra * so + rb] = {
                ca * si + cb: va * vb for ca, va in rowa.items() for cb, vb in rowb.items()
            }
    return Tensor(a.dim, a.n_out + b.n_out, a.n_in + b.n_in, rows)


def embed(t: Tensor, legs: Sequence[int], total: int) -> Tensor:
    """Place a square tensor on the given 1-based legs of ``total`` legs,
    identity on the rest (FRT subscripts like sigma_23 inside three spaces)."""
    k = len(legs)
    if t.n_out != k or t.n_in != k:
        raise ShapeError(f"tensor with ({t.n_out},{t.n_in}) legs cannot sit on {k} legs")
    if len(set(legs)) != k or any(not 1 <= p <= total for p in legs):
        raise ShapeError(f"invalid leg positions {tuple(legs)} for {total} legs")
    return _embed_cached(t, tuple(legs), total)


def _embed_cached(t: Tensor, legs: tuple, total: int) -> Tensor:
    d = t.dim
    pw = _powers(d, total)
    pos = [p - 1 for p in legs]
    rest = [p for p in range(total) if p not in pos]
    local = [(decode(r, d, len(pos)), [(decode(c, d, len(pos)), v) for c, v in row.items()])
             for r, row in t.rows.items()]
    rows: dict = {}
    for other in itertools.product(range(d), repeat=len(rest)):
        base = sum(pw[p] * i for p, i in zip(rest, other))
        for ro, cols in local:
            r = base + sum(pw[p] * i for p, i in zip(pos, ro))
            row = rows.setdefault(r, {})
            for co, v in cols:
                row[base + sum(pw[p] * i for p, i in zip(pos, co))] = v
    return Tensor(d, total, total, rows)


def partial_trace(t: Tensor, leg: int) -> Tensor:
    """Sum over equal out/in indices on a 1-based leg; the leg is removed."""
    if not (1 <= leg <= t.n_out and leg <= t.n_in):
        raise ShapeError(f"invalid trace leg {leg}")
    d = t.dim
    rows: dict = {}
    for out, inn, v in t.items():
        if out[leg - 1] != inn[leg - 1]:
            continue
        o = out[: leg - 1] + out[leg:]
        i = inn[: leg - 1] + inn[leg:]
        row = rows.setdefault(encode(o, d), {})
        add_scaled(row, {encode(i, d): v}, 1)
    return Tensor(d, t.n_out - 1, t.n_in - 1, rows)


def permute_out(t: Tensor, perm: Sequence[int]) -> Tensor:
    """Reorder out-legs: new leg k carries old leg perm[k] (0-based)."""
    d = t.dim
    rows: dict = {}
    for r, row in t.rows.items():
        o = decode(r, d, t.n_out)
        rows[encode(tuple(o[p] for p in perm), d)] = dict(row)
    return Tensor(d, t.n_out, t.n_in, rows)


# linear systems -------------------------------------------------------------------
def solve_linear(a: Tensor, rhs: Tensor, col_order: Sequence[int] | None = None) -> Tensor:
    """Solve ``compose(a, x) = rhs`` for x.

    Pivots are taken on the unknowns in ``col_order`` (default: natural
    order); free unknowns are set to zero.  Raises
    :class:`~qbrst.linalg.InconsistentSystem` (carrying a certificate) when
    there is no solution.
    """
    if a.dim != rhs.dim or a.n_out != rhs.n_out:
        raise ShapeError("map and right hand side disagree on out-legs")
    key = None
    if col_order is not None:
        rank_of = {c: k for k, c in enumerate(col_order)}
        key = rank_of.__getitem__
    rowkeys = sorted(set(a.rows) | set(rhs.rows))
    sol = solve_rows(
        ((r, a.rows.get(r, {}), rhs.rows.get(r, {})) for r in rowkeys), col_key=key
    ).solution
    return Tensor(a.dim, a.n_in, rhs.n_in, sol)


def solve_right(rhs: Tensor, b: Tensor, col_order: Sequence[int] | None = None) -> Tensor:
    """Solve ``compose(x, b) = rhs`` for x."""
    return solve_linear(b.transpose(), rhs.transpose(), col_order).transpose()


def tensor_rank(t: Tensor) -> int:
    return rank(t.rows.values())


def kernel(t: Tensor) -> list[dict]:
    """Basis of column vectors v (in-multi-index -> value) with t v = 0."""
    return nullspace(t.rows.values(), list(range(t.dim**t.n_in)))


class SingularTensor(ArithmeticError):
    pass


def inverse(t: Tensor) -> Tensor:
    if t.n_out != t.n_in:
        raise ShapeError("only square tensors can be inverted")
    ident = Tensor.identity(t.dim, t.n_out)
    try:
        x = solve_linear(t, ident)
    except InconsistentSystem:
        raise SingularTensor("tensor is not invertible") from None
    if compose(t, x) != ident:
        raise SingularTensor("tensor is not invertible")
    return x




def row_times(v: dict, t: Tensor) -> dict:
    """Row vector (dict over out-multi-indices of ``t``) times ``t``."""
    out: dict = {}
    rows = t.rows
    for m, c in v.items():
        r = rows.get(m)
        if r:
            add_scaled(out, r, c)
    return out


__all__ = [
    "Tensor", "ShapeError", "SingularTensor", "InconsistentSystem", "compose", "flow",
    "kron", "embed", "partial_trace", "permute_out", "solve_linear", "solve_right",
    "tensor_rank", "kernel", "inverse", "encode", "decode", "row_times",
]
