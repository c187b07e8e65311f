"""Built-in algebra data.

The classical presets take sigma to be the (super-)permutation and read C off
matrix (super)commutators of an explicit matrix basis, so the structure
constants never have to be typed in by hand.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from .braid import AlgebraSpec
from .scalar import Field
from .tensor import Tensor

PRESETS = ("sl2", "gl2", "gl1|1", "uq-gl")


def _matmul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _coords(m, basis):
    """Coordinates of matrix m in a basis of matrices (exact, by elimination)."""
    n = len(m)
    flat = [Fraction(m[i][j]) for i in range(n) for j in range(n)]
    cols = [[Fraction(b[i][j]) for i in range(n) for j in range(n)] for b in basis]
    g = len(basis)
    # normal equations are overkill; basis entries are unit-like, solve by
    # Gaussian elimination on the augmented system
    rows = [[cols[k][r] for k in range(g)] + [flat[r]] for r in range(n * n)]
    piv_cols = []
    r0 = 0
    for c in range(g):
        p = next((r for r in range(r0, len(rows)) if rows[r][c] != 0), None)
        if p is None:
            continue
        rows[r0], rows[p] = rows[p], rows[r0]
        inv = 1 / rows[r0][c]
        rows[r0] = [x * inv for x in rows[r0]]
        for r in range(len(rows)):
            if r != r0 and rows[r][c] != 0:
                f = rows[r][c]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[r0])]
        piv_cols.append(c)
        r0 += 1
    if any(all(x == 0 for x in row[:g]) and row[g] != 0 for row in rows):
        raise ValueError("matrix outside the span of the basis")
    out = [Fraction(0)] * g
    for k, c in enumerate(piv_cols):
        out[c] = rows[k][g]
    return out


def super_permutation(dim: int, parity, one=1) -> Tensor:
    """sigma^{mk}_{ij} = (-1)^{(m)(k)} delta^m_j delta^k_i."""
    return Tensor.from_entries(
        dim, 2, 2,
        (((m, k), (k, m), -one if parity[m] and parity[k] else one)
         for m in range(dim) for k in range(dim)),
    )


def matrix_algebra_spec(name: str, basis, parity, field: Field) -> AlgebraSpec:
    """Spec of the Lie (super)algebra spanned by ``basis`` under the supercommutator."""
    g = len(basis)
    ent = []
    for i, j in itertools.product(range(g), repeat=2):
        sign = -1 if parity[i] and parity[j] else 1
        ab = _matmul(basis[i], basis[j])
        ba = _matmul(basis[j], basis[i])
        br = [[ab[r][c] - sign * ba[r][c] for c in range(len(ab))] for r in range(len(ab))]
        for k, v in enumerate(_coords(br, basis)):
            if v:
                ent.append(((k,), (i, j), field(v)))
    c = Tensor.from_entries(g, 1, 2, ent)
    sigma = super_permutation(g, parity, field.one())
    return AlgebraSpec(name, g, sigma, c, field, parity=tuple(parity))


def _unit(n, i, j):
    m = [[0] * n for _ in range(n)]
    m[i][j] = 1
    return m


def sl2(field: Field | None = None) -> AlgebraSpec:
    """Basis h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h."""
    field = field or Field()
    h = [[1, 0], [0, -1]]
    e = [[0, 1], [0, 0]]
    f = [[0, 0], [1, 0]]
    spec = matrix_algebra_spec("sl2", [h, e, f], (0, 0, 0), field)
    spec.meta["generators"] = ["h", "e", "f"]
    return spec


def gl2(field: Field | None = None) -> AlgebraSpec:
    """Matrix units e_11, e_12, e_21, e_22."""
    field = field or Field()
    basis = [_unit(2, i, j) for i in range(2) for j in range(2)]
    spec = matrix_algebra_spec("gl2", basis, (0, 0, 0, 0), field)
    spec.meta["generators"] = ["e11", "e12", "e21", "e22"]
    return spec


def gl11(field: Field | None = None) -> AlgebraSpec:
    """gl(1|1): even E11, E22 and odd E12, E21 with the supercommutator."""
    field = field or Field()
    basis = [_unit(2, 0, 0), _unit(2, 1, 1), _unit(2, 0, 1), _unit(2, 1, 0)]
    spec = matrix_algebra_spec("gl1|1", basis, (0, 0, 1, 1), field)
    spec.meta["generators"] = ["E11", "E22", "E12", "E21"]
    return spec


# per-preset defaults: (max antisymmetrizer level, chi cap, gamma cap)
DEFAULT_CAPS = {
    "sl2": (4, 3, 3),
    "gl2": (5, 2, 4),
    "gl1|1": (5, 2, 3),
    "uq-gl": (5, 2, 4),
}


def load_preset(name: str, field: Field | None = None, n: int = 2) -> AlgebraSpec:
    if name == "sl2":
        return sl2(field)
    if name == "gl2":
        return gl2(field)
    if name in ("gl1|1", "gl11"):
        return gl11(field)
    if name == "uq-gl":
        from .uqgl import glq_spec

        return glq_spec(n, field or Field(Fraction(3, 2)))
    raise KeyError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
