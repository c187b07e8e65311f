"""Normal forms in filtered quadratic algebras by truncated linear reduction.

A :class:`Presentation` lists generators (with integer degrees) and relations,
each a combination of words of length at most two.  For a word-length cap the
ideal slice is spanned by ``u r v`` with ``|u| + |v| <= cap - 2``; Gaussian
elimination with the graded-lex largest word as pivot gives a canonical
complement basis (the normal words) and a reduction map for everything else.
No rewriting system is built, so confluence is never assumed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .linalg import Echelon, add_scaled

DEFAULT_WORD_LIMIT = 5_000_000


class CapExceeded(ValueError):
    def __init__(self, length: int, cap: int):
        self.length = length
        self.cap = cap
        super().__init__(f"word of length {length} exceeds the cap {cap}; raise the cap")


class MemoryGuard(MemoryError):
    def __init__(self, estimate: int, limit: int):
        self.estimate = estimate
        self.limit = limit
        super().__init__(f"quotient needs about {estimate} words/rows, limit is {limit}")


class GradingError(ValueError):
    pass


@dataclass
class Presentation:
    """Generators and relations; a relation is ``{word: coeff}`` with ``len(word) <= 2``.

    Words are tuples of generator positions.  The relation is the statement
    ``sum coeff * word = 0``.
    """

    names: list
    degrees: list
    relations: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("one degree per generator is required")
        self.relations = [r for r in (_clean(r) for r in self.relations) if r]
        for r in self.relations:
            if not any(len(w) == 2 for w in r):
                raise ValueError(f"relation {self.render(r)} has no quadratic part")
            if any(len(w) > 2 for w in r):
                raise ValueError("relations may only involve words of length <= 2")
        self.check_grading()

    @property
    def size(self) -> int:
        return len(self.names)

    def degree(self, word) -> int:
        return sum(self.degrees[g] for g in word)

    def check_grading(self):
        for r in self.relations:
            degs = {self.degree(w) for w in r}
            if len(degs) > 1:
                raise GradingError(f"relation {self.render(r)} mixes degrees {sorted(degs)}")

    def render(self, comb: dict) -> str:
        if not comb:
            return "0"
        parts = []
        for w in sorted(comb, key=word_key):
            m = "*".join(self.names[g] for g in w) or "1"
            parts.append(f"({comb[w]})*{m}")
        return " + ".join(parts)


def _clean(r: dict) -> dict:
    return {tuple(w): c for w, c in r.items() if c}


def word_key(w):
    """Graded-lex order: shorter first, then lexicographic by generator position."""
    return (len(w), tuple(w))


def _pivot_key(w):
    # Echelon pivots on the minimum; the largest word must come first
    return (-len(w), tuple(-g for g in w))


def estimate_size(p: Presentation, cap: int) -> int:
    g = p.size
    words = sum(g**k for k in range(cap + 1))
    rows = len(p.relations) * sum((s + 1) * g**s for s in range(max(cap - 1, 0)))
    return words + rows


class QuotientBasis:
    """Normal words of the truncated quotient and the reduction map."""

    def __init__(self, p: Presentation, cap: int, word_limit: int = DEFAULT_WORD_LIMIT):
        if cap < 2:
            raise ValueError("cap must be at least 2")
        est = estimate_size(p, cap)
        if est > word_limit:
            raise MemoryGuard(est, word_limit)
        self.presentation = p
        self.cap = cap
        g = p.size
        ech = Echelon(key=_pivot_key)
        for s in range(cap - 1):
            for split in range(s + 1):
                for u in itertools.product(range(g), repeat=split):
                    for v in itertools.product(range(g), repeat=s - split):
                        for r in p.relations:
                            ech.add({u + w + v: c for w, c in r.items()})
        piv = ech.rref()
        self._reduce: dict = {}
        for w, (row, _, _) in piv.items():
            self._reduce[w] = {x: -c for x, c in row.items() if x != w}
        self.words = [
            w
            for k in range(cap + 1)
            for w in itertools.product(range(g), repeat=k)
            if w not in self._reduce
        ]
        self.index = {w: i for i, w in enumerate(self.words)}
        self._lmul: dict = {}

    def __len__(self):
        return len(self.words)

    def dims_by_length(self) -> list:
        out = [0] * (self.cap + 1)
        for w in self.words:
            out[len(w)] += 1
        return out

    def words_up_to(self, length: int) -> list:
        return [w for w in self.words if len(w) <= length]

    def reduce_word(self, w: tuple) -> dict:
        if len(w) > self.cap:
            raise CapExceeded(len(w), self.cap)
        red = self._reduce.get(w)
        if red is None:
            return {w: 1}
        return red

    def normal_form(self, comb: dict) -> dict:
        out: dict = {}
        for w, c in comb.items():
            if c:
                add_scaled(out, self.reduce_word(tuple(w)), c)
        return out

    def left_mul(self, gen: int, w: tuple) -> dict:
        """Normal form of gen * w for a normal word w (memoised)."""
        key = (gen, w)
        r = self._lmul.get(key)
        if r is None:
            r = self.reduce_word((gen,) + w)
            self._lmul[key] = r
        return r

    def multiply(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for wa, ca in a.items():
            for wb, cb in b.items():
                add_scaled(out, self.reduce_word(wa + wb), ca * cb)
        return out


def build_quotient_basis(p: Presentation, cap: int, word_limit: int = DEFAULT_WORD_LIMIT) -> QuotientBasis:
    return QuotientBasis(p, cap, word_limit)


class NFElement:
    """Linear combination of normal words under a fixed quotient basis."""

    __slots__ = ("basis", "terms")

    def __init__(self, basis: QuotientBasis, terms: dict | None = None):
        self.basis = basis
        self.terms = {w: c for w, c in (terms or {}).items() if c}

    @classmethod
    def from_words(cls, basis: QuotientBasis, comb: dict) -> "NFElement":
        return cls(basis, basis.normal_form(comb))

    @classmethod
    def unit(cls, basis: QuotientBasis, one=1) -> "NFElement":
        return cls(basis, {(): one})

    @classmethod
    def gen(cls, basis: QuotientBasis, i: int, one=1) -> "NFElement":
        return cls.from_words(basis, {(i,): one})

    def _same(self, other):
        if other.basis is not self.basis:
            raise ValueError("elements live in different quotient bases; re-reduce first")

    def __add__(self, other):
        self._same(other)
        t = dict(self.terms)
        add_scaled(t, other.terms, 1)
        return NFElement(self.basis, t)

    def __sub__(self, other):
        self._same(other)
        t = dict(self.terms)
        add_scaled(t, other.terms, -1)
        return NFElement(self.basis, t)

    def scale(self, c):
        return NFElement(self.basis, {w: c * v for w, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, NFElement):
            self._same(other)
            return NFElement(self.basis, self.basis.multiply(self.terms, other.terms))
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, NFElement) and self.basis is other.basis and self.terms == other.terms

    def is_zero(self):
        return not self.terms

    def degree(self) -> set:
        return {self.basis.presentation.degree(w) for w in self.terms}

    def __repr__(self):
        return f"NFElement({self.basis.presentation.render(self.terms)})"


# presentations built from (sigma, C) ---------------------------------------------------------
def quantum_lie_presentation(spec) -> Presentation:
    """chi_i chi_j - sigma^{mk}_{ij} chi_m chi_k - C^k_{ij} chi_k = 0."""
    d = spec.dim
    rels = []
    for i, j in itertools.product(range(d), repeat=2):
        r = {(i, j): 1}
        for (m, k), _, v in _column(spec.sigma, (i, j)):
            r[(m, k)] = r.get((m, k), 0) - v
        for (k,), _, v in _column(spec.c, (i, j)):
            r[(k,)] = r.get((k,), 0) - v
        rels.append(r)
    names = [f"x{i + 1}" for i in range(d)]
    return Presentation(names, [0] * d, rels)


def _column(t, inn):
    from .tensor import encode

    c = encode(inn, t.dim)
    from .tensor import decode

    for r, row in t.rows.items():
        v = row.get(c)
        if v:
            yield decode(r, t.dim, t.n_out), inn, v


def extended_presentation(spec) -> Presentation:
    """Generators Omega (deg -1) < chi (deg 0) < gamma (deg 1) with the
    cross relations of chi, gamma and Omega; gamma-gamma and Omega-Omega words
    are left free (the wedge sectors are modelled elsewhere)."""
    d = spec.dim
    W, X, G = 0, d, 2 * d  # offsets
    sig, sinv, c = spec.sigma, spec.sigma_inv, spec.c
    rels = []
    for r in quantum_lie_presentation(spec).relations:
        rels.append({tuple(X + g for g in w): v for w, v in r.items()})
    # gamma_a chi_b = sigma^{mk}_{ab} chi_m gamma_k + C^k_{ab} gamma_k
    for a, b in itertools.product(range(d), repeat=2):
        r = {(G + a, X + b): 1}
        for (m, k), _, v in _column(sig, (a, b)):
            add_scaled(r, {(X + m, G + k): v}, -1)
        for (k,), _, v in _column(c, (a, b)):
            add_scaled(r, {(G + k,): v}, -1)
        rels.append(r)
    # chi_b Omega^c = Omega^a sigma^{mc}_{ab} chi_m + Omega^a C^c_{ab}
    for b, cc in itertools.product(range(d), repeat=2):
        r = {(X + b, W + cc): 1}
        for (m, c_out), (a, bb), v in sig.items():
            if bb == b and c_out == cc:
                add_scaled(r, {(W + a, X + m): v}, -1)
        for (c_out,), (a, bb), v in c.items():
            if bb == b and c_out == cc:
                add_scaled(r, {(W + a,): v}, -1)
        rels.append(r)
    # gamma_j Omega^i = -Omega^p (sigma^-1)^{si}_{pj} gamma_s + delta^i_j
    for j, i in itertools.product(range(d), repeat=2):
        r = {(G + j, W + i): 1}
        for (s, i_out), (p, jj), v in sinv.items():
            if jj == j and i_out == i:
                add_scaled(r, {(W + p, G + s): v}, 1)
        if i == j:
            add_scaled(r, {(): 1}, -1)
        rels.append(r)
    names = [f"W{i + 1}" for i in range(d)] + [f"X{i + 1}" for i in range(d)] + [
        f"G{i + 1}" for i in range(d)]
    return Presentation(names, [-1] * d + [0] * d + [1] * d, rels)
