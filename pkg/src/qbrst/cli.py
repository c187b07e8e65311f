"""qbrst command line: validate, brst, verify, uqgl, export-preset.

Exit codes: 0 every check passed, 1 a mathematical check failed (the report
names it and gives a witness), 2 bad usage or input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import io
from .braid import AlgebraSpec, Check, antisymmetrizers, check_qlie_axioms
from .brst import (BrstData, LevelUnsolvable, assemble_q, build_brst, check_d_squared,
                   check_first_level, check_gauge_action, check_gauge_independence,
                   reversed_gauge, solve_levels, verify_chi_linear)
from .complex import (GammaModule, check_composite_relation, check_cross_relations, check_grading,
                      check_leibniz, check_wedge_soundness, spanning_elements)
from .nf import DEFAULT_WORD_LIMIT, CapExceeded, MemoryGuard, estimate_size, quantum_lie_presentation
from .presets import DEFAULT_CAPS, PRESETS, load_preset
from .scalar import Field
from .tensor import compose, tensor_rank

MAX_CHI_CAP = 6
MAX_GAMMA_CAP = 8
UQGL_SIZES = (2, 3)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# reports -------------------------------------------------------------------------------------
class Report:
    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.sections: list = []  # (title, [Check])
        self.info: dict = {}
        self.tables: dict = {}

    def add(self, title: str, checks):
        self.sections.append((title, list(checks)))

    @property
    def ok(self) -> bool:
        return all(c.ok for _, cs in self.sections for c in cs)

    def record(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "ok": self.ok,
            "info": self.info,
            "sections": [{"title": t, "checks": [c.record() for c in cs]} for t, cs in self.sections],
            "tables": self.tables,
        }

    def text(self) -> str:
        lines = [f"qbrst {self.command}: " + ", ".join(f"{k}={v}" for k, v in self.config.items() if v is not None)]
        for k, v in self.info.items():
            if isinstance(v, list):
                lines.append(f"{k}:")
                lines.extend(f"  {x}" for x in v)
            else:
                lines.append(f"{k}: {v}")
        for title, cs in self.sections:
            lines.append(f"[{title}]")
            lines.extend("  " + c.line() for c in cs)
        for title, rows in self.tables.items():
            lines.append(f"[{title}]")
            for row in rows:
                lines.append("  " + " | ".join(str(x) for x in row))
        lines.append("result: " + ("all checks pass" if self.ok else "FAILED"))
        return "\n".join(lines) + "\n"


def _emit(report: Report, args, out_is_artifact: bool = False):
    text = io.dumps(report.record()) if args.format == "json" else report.text()
    if args.out and not out_is_artifact:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# inputs --------------------------------------------------------------------------------------
def _field(args, default: Field | None) -> Field | None:
    if args.symbolic and args.q is not None:
        raise UsageError("--symbolic and --q are mutually exclusive")
    if args.symbolic:
        return Field()
    if args.q is not None:
        try:
            return io.field_from("numeric", args.q)
        except io.InputError as exc:
            raise UsageError(str(exc)) from None
    return default


def _load_spec(args) -> AlgebraSpec:
    if bool(args.input) == bool(args.preset):
        raise UsageError("give exactly one of --input FILE or --preset NAME")
    if args.input:
        return io.read_spec(args.input, _field(args, None))
    if args.preset not in PRESETS and args.preset != "gl11":
        raise UsageError(f"unknown preset {args.preset!r}; choose from {', '.join(PRESETS)}")
    n = getattr(args, "n", None) or 2
    if args.preset == "uq-gl" and n not in UQGL_SIZES:
        raise UsageError(f"--n {n} is not supported; use --n 2 (or 3 for data checks via 'uqgl')")
    # sigma of the classical presets has no q; the uq-gl preset defaults to q = 3/2
    default = io.field_from("numeric", "3/2") if args.preset == "uq-gl" else Field()
    return load_preset(args.preset, _field(args, default), n)


def _caps(args, spec: AlgebraSpec) -> tuple:
    base = DEFAULT_CAPS.get(spec.name) or DEFAULT_CAPS.get(args.preset or "", (5, 2, 3))
    height = args.height_cap if args.height_cap is not None else base[0]
    chi = args.chi_cap if args.chi_cap is not None else base[1]
    gamma = args.gamma_cap if args.gamma_cap is not None else base[2]
    if not 2 <= height <= 12:
        raise UsageError("--height-cap must be between 2 and 12")
    if not 0 <= chi <= MAX_CHI_CAP:
        raise UsageError(f"--chi-cap must be between 0 and {MAX_CHI_CAP}")
    if not 0 <= gamma <= MAX_GAMMA_CAP:
        raise UsageError(f"--gamma-cap must be between 0 and {MAX_GAMMA_CAP}")
    est = estimate_size(quantum_lie_presentation(spec), max(chi + 2, 2))
    if est > DEFAULT_WORD_LIMIT:
        raise UsageError(f"--chi-cap {chi} needs about {est} words, over the limit {DEFAULT_WORD_LIMIT}; lower it")
    return height, chi, gamma


def _config(args, spec: AlgebraSpec | None = None, caps=None) -> dict:
    cfg = {
        "input": args.input if getattr(args, "input", None) else None,
        "preset": getattr(args, "preset", None),
        "scalar_mode": None if spec is None else ("symbolic" if spec.field.symbolic else "numeric"),
        "q": None if spec is None or spec.field.symbolic else str(spec.field.q0),
    }
    if caps:
        cfg.update({"height_cap": caps[0], "chi_cap": caps[1], "gamma_cap": caps[2]})
    return cfg


# commands ------------------------------------------------------------------------------------
def cmd_validate(args) -> int:
    spec = _load_spec(args)
    rep = Report("validate", _config(args, spec))
    rep.info["algebra"] = f"{spec.name}, dim {spec.dim}, {spec.field.describe()}"
    rep.add("axioms", check_qlie_axioms(spec))
    _emit(rep, args)
    return 0 if rep.ok else 1


def _tower_hint(spec, tower, gamma_cap) -> None:
    need = gamma_cap + 2
    if tower.height is None and tower.top < need:
        raise UsageError(f"the antisymmetrizer tower was cut at n={tower.top} but gamma cap {gamma_cap} "
                         f"needs n >= {need}; raise --height-cap to at least {need}")


def cmd_brst(args) -> int:
    spec = _load_spec(args)
    caps = _caps(args, spec)
    rep = Report("brst", _config(args, spec, caps))
    axioms = check_qlie_axioms(spec)
    rep.add("axioms", axioms)
    if not all(c.ok for c in axioms) and not args.force:
        rep.info["stopped"] = "axioms fail; rerun with --force to solve anyway"
        _emit(rep, args, out_is_artifact=True)
        return 1
    try:
        data = build_brst(spec, max_n=caps[0])
    except LevelUnsolvable as exc:
        rep.add("levels", [Check(f"level r={exc.r}", False, None, str(exc))])
        _emit(rep, args, out_is_artifact=True)
        return 1
    ranks = {r: tensor_rank(y) for r, y in data.Y.items()}
    tower = data.tower
    rep.info["height"] = tower.height if tower.height is not None else f"> {tower.top} (cap reached)"
    rep.info["antisymmetrizer ranks"] = " ".join(str(r) for r in tower.ranks)
    rep.info["sandwich ranks"] = " ".join(f"r={r}:{k}" for r, k in sorted(ranks.items())) or "none"
    rep.info["charge"] = data.Q.render_lines()
    rep.add("solve", [check_first_level(spec, data)])
    out = args.out or f"{spec.name.replace('|', '')}.brst.json"
    rec = io.artifact_record(spec, data, _config(args, spec, caps), ranks)
    Path(out).write_text(io.dumps(rec))
    rep.info["artifact"] = out
    _emit(rep, args, out_is_artifact=True)
    return 0 if rep.ok else 1


def verify_levels(spec: AlgebraSpec, xs: dict, caps: tuple, gauge_check: bool, jobs: int) -> Report:
    """All exact checks for a solved charge; returns the report without config."""
    height, chi, gamma = caps
    rep = Report("verify", {})
    tower = antisymmetrizers(spec.sigma, height, ops=spec.ops())
    _tower_hint(spec, tower, gamma)
    ys = {r: compose(tower.A(r), x, tower.A(r + 1)) for r, x in xs.items()}
    q = assemble_q(spec, xs)
    data = BrstData(spec, tower, xs, ys, q)
    rep.add("levels", [check_first_level(spec, data)] + verify_chi_linear(spec, tower, xs))
    mod = GammaModule(spec, tower, chi, gamma)
    elements = mod.basis_elements()
    rep.add("nilpotency", [check_d_squared(mod, q, elements, jobs)])
    rep.info["elements checked"] = len(elements)
    small = spanning_elements(mod, min(chi, 1), min(gamma, 2))
    rel = list(check_cross_relations(mod, small))
    for r in sorted(xs):
        if r + 1 <= tower.top:
            rel.append(check_composite_relation(mod, r, spanning_elements(mod, min(chi, 1), min(gamma, 1))))
    rel.append(check_wedge_soundness(mod, min(tower.top - 1, gamma + 1)))
    rel.append(check_grading(mod, q, small))
    rel.append(check_leibniz(mod, q, small))
    rep.add("operator relations", rel)
    if gauge_check:
        g = check_gauge_independence(spec, data)
        if tower.height is not None:
            xs2, _ = solve_levels(spec, tower, max(xs) if xs else 0, reversed_gauge(spec, tower))
            q2 = assemble_q(spec, xs2)
            g.append(check_gauge_action(mod, q, q2, elements, jobs=jobs))
        rep.add("gauge", g)
    return rep


def cmd_verify(args) -> int:
    rec = io.read_artifact(args.artifact)
    embedded = io.artifact_spec(rec)
    if args.input or args.preset:
        spec = _load_spec(args)
        if io.spec_hash(spec) != rec["spec_hash"]:
            raise UsageError(f"artifact {args.artifact} was made from a different algebra spec "
                             f"(hash {rec['spec_hash'][:12]}..., given {io.spec_hash(spec)[:12]}...)")
    else:
        spec = embedded
    cfg = rec.get("config", {})
    for key in ("height_cap", "chi_cap", "gamma_cap"):
        if getattr(args, key) is None and cfg.get(key) is not None:
            setattr(args, key, cfg[key])
    if args.preset is None and not args.input:
        args.preset = spec.name if spec.name in PRESETS else None
    caps = _caps(args, spec)
    xs = io.artifact_levels(rec, spec)
    rep = verify_levels(spec, xs, caps, args.gauge_check, args.jobs)
    rep.config = _config(args, spec, caps) | {"artifact": args.artifact}
    _emit(rep, args)
    return 0 if rep.ok else 1


def cmd_uqgl(args) -> int:
    from . import olj
    from .uqgl import build_glq, build_sigma_C, transcription_check

    n = args.n
    if n not in UQGL_SIZES:
        raise UsageError(f"--n {n} is not supported: N=2 runs everything, N=3 only the data checks "
                         "(R, Psi, D, axioms); larger N is beyond the exact-arithmetic budget")
    fld = _field(args, io.field_from("numeric", "3/2"))
    args.preset = "uq-gl"
    rep = Report("uqgl", {"n": n, "scalar_mode": "symbolic" if fld.symbolic else "numeric",
                          "q": None if fld.symbolic else str(fld.q0)})
    step = "data"
    try:
        data = build_glq(n, fld)
        spec = build_sigma_C(data)
        caps = _caps(args, spec) if n == 2 else None
        if caps:
            rep.config.update({"height_cap": caps[0], "chi_cap": caps[1], "gamma_cap": caps[2]})
        rep.add("data", list(data.checks) + [transcription_check(data, spec)])
        step = "axioms"
        rep.add("axioms", check_qlie_axioms(spec))
        if n == 3:
            rep.info["note"] = "N=3: data checks only"
        elif not args.no_pipeline:
            step = "pipeline"
            bd = build_brst(spec, max_n=caps[0])
            rep.info["height"] = bd.tower.height
            rep.info["charge terms"] = len(bd.Q.terms)
            sub = verify_levels(spec, bd.X, caps, args.gauge_check, args.jobs)
            rep.sections.extend(sub.sections)
            rep.info.update(sub.info)
        if n == 2 and args.closed_form:
            step = "closed form"
            pres = olj.build_olj(data)
            rep.info["omega/L/J sector dimensions"] = " ".join(
                f"{olj.TYPE_NAMES[k]}:{pres.sectors[k].dims_by_length()}" for k in sorted(pres.sectors))
            cf = olj.verify_closed_form(data, pres)
            rep.add("closed-form charge", cf.checks)
            rep.add("lemmas", olj.check_trace_lemma(data) + olj.check_w_lemmas(data, pres))
            sol = olj.solve_charge(data, pres)
            rep.info["solved charge"] = [
                f"unknowns {sol.unknowns}, undetermined {sol.free}, normal-form terms {len(sol.charge)}",
                f"coefficient of Tr_q(omega L omega J): {sol.leading} (closed form: -1)",
                f"normal-form terms differing from the closed form: {sol.differs_from_closed_form}",
            ]
            rep.add("solved charge (informational)", [
                Check(f"solved {c.name}", c.ok, c.witness, c.detail) for c in sol.checks])
        if n == 2 and args.classical_limit:
            step = "classical limit"
            cdata = data if fld.symbolic else build_glq(2, Field())
            cl = olj.classical_limit(cdata)
            rep.add("classical limit", cl.checks)
            rep.info["normalization constant"] = str(cl.constant)
            rep.info["gamma~"] = "-J" if cl.gamma_sign < 0 else "+J"
            rep.tables["order lambda^0 | Q_cl"] = [list(r) for r in cl.table]
    except (CapExceeded, MemoryGuard) as exc:
        raise UsageError(f"step {step}: {exc}") from None
    except ArithmeticError as exc:
        rep.add(step, [Check(f"{step} step", False, None, f"{type(exc).__name__}: {exc}")])
    _emit(rep, args)
    return 0 if rep.ok else 1


def cmd_export_preset(args) -> int:
    if not args.preset:
        raise UsageError("export-preset needs --preset NAME")
    args.input = None
    spec = _load_spec(args)
    text = io.dumps(io.spec_record(spec))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# argument parsing ----------------------------------------------------------------------------
def _common(p, caps=True):
    p.add_argument("--input", help="algebra spec (JSON)")
    p.add_argument("--preset", help=f"built-in algebra: {', '.join(PRESETS)}")
    p.add_argument("--n", type=int, default=2, help="N for the uq-gl preset (default 2)")
    p.add_argument("--q", help="rational value of q (numeric mode)")
    p.add_argument("--symbolic", action="store_true", help="exact rational functions of q")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--out", help="output file")
    if caps:
        p.add_argument("--chi-cap", type=int, help="PBW degree cap for the chi sector")
        p.add_argument("--gamma-cap", type=int, help="wedge degree cap")
        p.add_argument("--height-cap", type=int, help="largest antisymmetrizer level computed")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
        p.add_argument("--force", action="store_true", help="continue past failed validation")
        p.add_argument("--gauge-check", action="store_true", help="also check gauge independence")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="qbrst", description="Exact BRST charges for quantum Lie algebras.")
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)
    p = sub.add_parser("validate", help="check the quantum Lie algebra axioms")
    _common(p, caps=False)
    p.set_defaults(func=cmd_validate)
    p = sub.add_parser("brst", help="solve for the charge and write an artifact")
    _common(p)
    p.set_defaults(func=cmd_brst)
    p = sub.add_parser("verify", help="check a charge artifact exactly")
    p.add_argument("artifact")
    _common(p)
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("uqgl", help="the U_q(gl(N)) example end to end")
    _common(p)
    p.add_argument("--closed-form", action="store_true", help="check the closed-form charge in omega, L, J")
    p.add_argument("--classical-limit", action="store_true", help="order lambda^0 against the classical charge")
    p.add_argument("--no-pipeline", action="store_true", help="skip the generic solve and d^2 sweep")
    p.set_defaults(func=cmd_uqgl)
    p = sub.add_parser("export-preset", help="write a built-in algebra as a JSON spec")
    _common(p, caps=False)
    p.set_defaults(func=cmd_export_preset)
    return ap


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if not args.command:
            raise UsageError("qbrst: choose a command (validate, brst, verify, uqgl, export-preset)")
        if getattr(args, "jobs", 1) < 1:
            raise UsageError("--jobs must be at least 1")
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except io.InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CapExceeded, MemoryGuard) as exc:
        print(f"error: {exc}; raise or lower the caps as indicated", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
