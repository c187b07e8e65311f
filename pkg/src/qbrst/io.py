"""JSON algebra specs and BRST artifacts.

Spec file::

    {"format_version": 1, "name": "sl2", "dim": 3,
     "scalar_mode": "numeric", "q": "3/2",
     "sigma": [[[1, 2], [2, 1], "1"], ...],
     "c": [[[2], [1, 2], "2"], ...]}

Sparse entries are ``[out indices, in indices, literal]`` with 1-based
indices; literals use the scalar grammar (``"(q^2-1)/q"``).  ``scalar_mode``
is ``symbolic`` (then ``q`` is ignored) or ``numeric``.  Optional keys:
``parity`` (list of 0/1) and ``generators`` (names).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .braid import AlgebraSpec
from .parse import ParseError, parse_scalar
from .scalar import Field
from .tensor import ShapeError, SingularTensor, Tensor

FORMAT_VERSION = 1
ARTIFACT_KIND = "qbrst-brst-artifact"


class InputError(ValueError):
    """Unreadable or malformed user input (exit code 2)."""


# specs ---------------------------------------------------------------------------------------
def _entries(t: Tensor) -> list:
    return [[[i + 1 for i in o], [i + 1 for i in n], str(v)] for o, n, v in t.items()]


def spec_record(spec: AlgebraSpec) -> dict:
    fld = spec.field
    rec = {
        "format_version": FORMAT_VERSION,
        "name": spec.name,
        "dim": spec.dim,
        "scalar_mode": "symbolic" if fld.symbolic else "numeric",
        "q": None if fld.symbolic else str(fld.q0),
    }
    if spec.parity is not None:
        rec["parity"] = list(spec.parity)
    if spec.meta.get("generators"):
        rec["generators"] = list(spec.meta["generators"])
    rec["sigma"] = _entries(spec.sigma)
    rec["c"] = _entries(spec.c)
    return rec


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def spec_hash(spec: AlgebraSpec) -> str:
    canon = json.dumps(spec_record(spec), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _where(text: str, needle: str, offset: int = 0) -> str:
    """line:column of the first occurrence of ``needle`` (1-based), if found."""
    pos = text.find(needle)
    if pos < 0:
        return ""
    pos += offset
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"line {line}, column {col}"


def _literal(text: str, lit, field: Field, what: str):
    if isinstance(lit, int) and not isinstance(lit, bool):
        lit = str(lit)
    if not isinstance(lit, str):
        raise InputError(f"{what}: value must be a scalar literal string, got {lit!r}")
    try:
        return field(parse_scalar(lit))
    except ParseError as exc:
        loc = _where(text, json.dumps(lit), 1 + exc.pos)
        raise InputError(f"{what}: bad scalar literal {lit!r} ({loc}): {exc}") from None
    except ArithmeticError as exc:
        raise InputError(f"{what}: {lit!r}: {exc}") from None


def _tensor(text, rec, key, dim, n_out, n_in, field) -> Tensor:
    raw = rec.get(key)
    if not isinstance(raw, list):
        raise InputError(f"'{key}' must be a list of [out, in, value] entries")
    entries = []
    for k, e in enumerate(raw):
        what = f"{key}[{k}]"
        if not (isinstance(e, list) and len(e) == 3 and isinstance(e[0], list) and isinstance(e[1], list)):
            raise InputError(f"{what}: expected [[out indices], [in indices], value]")
        out, inn, lit = e
        if len(out) != n_out or len(inn) != n_in:
            raise InputError(f"{what}: expected {n_out} out and {n_in} in indices")
        for i in out + inn:
            if not isinstance(i, int) or not 1 <= i <= dim:
                raise InputError(f"{what}: index {i!r} outside 1..{dim}")
        entries.append((tuple(i - 1 for i in out), tuple(i - 1 for i in inn), _literal(text, lit, field, what)))
    return Tensor.from_entries(dim, n_out, n_in, entries)


def field_from(mode: str | None, q) -> Field:
    if mode == "symbolic":
        return Field()
    if q is None:
        raise InputError("numeric scalar mode needs a value for q")
    try:
        val = parse_scalar(str(q))
    except ParseError as exc:
        raise InputError(f"bad value for q: {exc}") from None
    if not val.is_constant():
        raise InputError(f"q must be a rational number, got {q!r}")
    c = val.constant()
    if c == 0 or c == 1 or c == -1:
        raise InputError(f"q = {c} is degenerate (lambda = q - 1/q must be nonzero)")
    return Field(c)


def spec_from_text(text: str, field: Field | None = None) -> AlgebraSpec:
    """Parse a JSON spec; ``field`` overrides the scalar mode stored in the file."""
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(rec, dict):
        raise InputError("spec must be a JSON object")
    ver = rec.get("format_version")
    if ver != FORMAT_VERSION:
        raise InputError(f"unsupported format_version {ver!r} (this build reads {FORMAT_VERSION})")
    dim = rec.get("dim")
    if not isinstance(dim, int) or dim < 1:
        raise InputError("'dim' must be a positive integer")
    mode = rec.get("scalar_mode", "symbolic")
    if mode not in ("symbolic", "numeric"):
        raise InputError(f"scalar_mode must be 'symbolic' or 'numeric', got {mode!r}")
    fld = field or field_from(mode, rec.get("q"))
    sigma = _tensor(text, rec, "sigma", dim, 2, 2, fld)
    c = _tensor(text, rec, "c", dim, 1, 2, fld)
    parity = rec.get("parity")
    if parity is not None:
        if not (isinstance(parity, list) and len(parity) == dim and all(p in (0, 1) for p in parity)):
            raise InputError(f"'parity' must be a list of {dim} zeros and ones")
        parity = tuple(parity)
    try:
        spec = AlgebraSpec(str(rec.get("name", "custom")), dim, sigma, c, fld, parity=parity)
    except (ShapeError, SingularTensor) as exc:
        raise InputError(str(exc)) from None
    if rec.get("generators"):
        spec.meta["generators"] = list(rec["generators"])
    return spec


def read_spec(path: str | Path, field: Field | None = None) -> AlgebraSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return spec_from_text(text, field)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


# artifacts -----------------------------------------------------------------------------------
def artifact_record(spec: AlgebraSpec, data, config: dict, sandwich_ranks: dict) -> dict:
    tower = data.tower
    return {
        "format_version": FORMAT_VERSION,
        "kind": ARTIFACT_KIND,
        "spec_hash": spec_hash(spec),
        "spec": spec_record(spec),
        "config": config,
        "tower": {"height": tower.height, "computed_up_to": tower.top, "ranks": list(tower.ranks)},
        "levels": [
            {"r": r, "sandwich_rank": sandwich_ranks.get(r), "X": _entries(data.X[r]), "Y": _entries(data.Y[r])}
            for r in sorted(data.X)
        ],
        "charge": data.Q.records(),
    }


def read_artifact(path: str | Path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(rec, dict) or rec.get("kind") != ARTIFACT_KIND:
        raise InputError(f"{path}: not a BRST artifact")
    if rec.get("format_version") != FORMAT_VERSION:
        raise InputError(f"{path}: unsupported format_version {rec.get('format_version')!r}")
    return rec


def artifact_spec(rec: dict) -> AlgebraSpec:
    spec = spec_from_text(json.dumps(rec["spec"]))
    if spec_hash(spec) != rec.get("spec_hash"):
        raise InputError("artifact is corrupted: embedded spec does not match its hash")
    return spec


def artifact_levels(rec: dict, spec: AlgebraSpec) -> dict:
    """r -> X_r from the artifact, in the spec's scalar mode."""
    out = {}
    for lv in rec.get("levels", []):
        r = lv["r"]
        out[r] = _tensor("", lv, "X", spec.dim, r, r + 1, spec.field)
    return out

