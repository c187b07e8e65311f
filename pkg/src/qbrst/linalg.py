"""Sparse exact Gaussian elimination.

Rows are ``dict`` objects mapping a column key to a nonzero coefficient.  The
column order used for pivoting is given by a sort key; the reduced row echelon
form is unique for a fixed column order, which makes every result here
reproducible regardless of the order rows are fed in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable

import flint


def add_scaled(target: dict, row: dict, c) -> None:
    """target += c * row, dropping zeros."""
    for k, v in row.items():
        w = target.get(k)
        w = c * v if w is None else w + c * v
        if w:
            target[k] = w
        else:
            target.pop(k, None)


def recip(v):
    """Exact reciprocal; plain ints are promoted to rationals."""
    if isinstance(v, int):
        return flint.fmpq(1, v)
    return 1 / v


def scaled(row: dict, c) -> dict:
    return {k: c * v for k, v in row.items()} if c != 1 else dict(row)


class Echelon:
    """Incremental echelon form with optional bookkeeping.

    Each stored row has a pivot (its first column under ``key``) with
    coefficient 1 and no entries on earlier columns.  ``extra`` carries an
    augmented block along (right hand sides); ``track`` records each row as a
    combination of the tags of the inserted rows.
    """

    def __init__(self, key: Callable | None = None, track: bool = False):
        self.key = key if key is not None else (lambda c: c)
        self.track = track
        self.pivots: dict[Hashable, tuple[dict, dict, dict]] = {}
        self._reduced = False

    def __len__(self):
        return len(self.pivots)

    def _first(self, row: dict):
        return min(row, key=self.key)

    def reduce(self, row: dict, extra: dict | None = None, comb: dict | None = None):
        """Reduce ``row`` against the stored pivots; returns new (row, extra, comb)."""
        row = dict(row)
        extra = dict(extra) if extra else {}
        comb = dict(comb) if comb else {}
        piv = self.pivots
        key = self.key
        while True:
            cands = [c for c in row if c in piv]
            if not cands:
                return row, extra, comb
            c = min(cands, key=key)
            f = row[c]
            prow, pextra, pcomb = piv[c]
            add_scaled(row, prow, -f)
            if pextra:
                add_scaled(extra, pextra, -f)
            if self.track:
                add_scaled(comb, pcomb, -f)

    def add(self, row: dict, extra: dict | None = None, tag=None):
        """Insert a row. Returns the new pivot column, or ``None`` when the row
        reduced to zero (then ``self.last_residual`` holds (extra, comb))."""
        comb = {tag: 1} if self.track else {}
        row, extra, comb = self.reduce(row, extra, comb)
        if not row:
            self.last_residual = (extra, comb)
            return None
        c = self._first(row)
        inv = recip(row[c])
        self.pivots[c] = (scaled(row, inv), scaled(extra, inv), scaled(comb, inv))
        self._reduced = False
        return c

    def rref(self) -> dict:
        """Back-substitute so each row has zeros on every other pivot column."""
        if not self._reduced:
            key = self.key
            order = sorted(self.pivots, key=key, reverse=True)
            for c in order:
                row, extra, comb = self.pivots[c]
                others = [d for d in row if d != c and d in self.pivots]
                if not others:
                    continue
                row, extra, comb = dict(row), dict(extra), dict(comb)
                for d in sorted(others, key=key):
                    f = row.get(d)
                    if not f:
                        continue
                    prow, pextra, pcomb = self.pivots[d]
                    add_scaled(row, prow, -f)
                    if pextra:
                        add_scaled(extra, pextra, -f)
                    if self.track:
                        add_scaled(comb, pcomb, -f)
                self.pivots[c] = (row, extra, comb)
            self._reduced = True
        return self.pivots

    def express(self, row: dict):
        """Coefficients of ``row`` on the inserted tags, or None if outside the span.

        Needs ``track=True``.
        """
        # row = sum f_c * pivot_c, and each pivot row is a combination of tags
        out: dict = {}
        r = dict(row)
        while r:
            cands = [d for d in r if d in self.pivots]
            if not cands:
                return None
            c = min(cands, key=self.key)
            f = r[c]
            prow, _, pcomb = self.pivots[c]
            add_scaled(r, prow, -f)
            add_scaled(out, pcomb, f)
        return out


@dataclass
class InconsistencyCertificate:
    """A left multiplier y with y.A = 0 but y.b != 0 (in column ``rhs_col``)."""

    multiplier: dict
    rhs_col: Hashable
    value: object


class InconsistentSystem(ArithmeticError):
    def __init__(self, certificate: InconsistencyCertificate, context: str = ""):
        self.certificate = certificate
        msg = "linear system has no solution"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


@dataclass
class SparseSolution:
    solution: dict  # unknown column -> {rhs column: value}
    pivots: list
    free: list = field(default_factory=list)


def solve_rows(
    rows: Iterable[tuple[Hashable, dict, dict]],
    unknowns: Iterable[Hashable] | None = None,
    col_key: Callable | None = None,
    certify: bool = True,
) -> SparseSolution:
    """Solve ``A x = B`` given rows ``(tag, A_row, B_row)``.

    Pivot columns follow ``col_key``; free unknowns are set to zero.  Raises
    :class:`InconsistentSystem` with a certificate when no solution exists.
    """
    ech = Echelon(key=col_key, track=certify)
    for tag, arow, brow in rows:
        if ech.add(arow, brow, tag) is None:
            extra, comb = ech.last_residual
            if extra:
                c = min(extra, key=repr)
                raise InconsistentSystem(InconsistencyCertificate(comb, c, extra[c]))
    piv = ech.rref()
    sol = {c: dict(extra) for c, (row, extra, comb) in piv.items() if extra}
    free = []
    if unknowns is not None:
        free = [u for u in unknowns if u not in piv]
    return SparseSolution(sol, sorted(piv, key=ech.key), free)


def rank(rows: Iterable[dict], col_key: Callable | None = None) -> int:
    ech = Echelon(key=col_key)
    for r in rows:
        ech.add(r)
    return len(ech)


def nullspace(rows: Iterable[dict], unknowns: list, col_key: Callable | None = None) -> list[dict]:
    """Basis of {x : A x = 0}, one vector per free unknown (unit there)."""
    ech = Echelon(key=col_key)
    for r in rows:
        ech.add(r)
    piv = ech.rref()
    basis = []
    for u in unknowns:
        if u in piv:
            continue
        v = {u: 1}
        for c, (row, _, _) in piv.items():
            f = row.get(u)
            if f:
                v[c] = -f
        basis.append(v)
    return basis
