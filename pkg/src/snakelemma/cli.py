"""Command-line front end.

Input is one JSON document::

    {
      "field": 2, "nilpotency": 3,
      "modules":   {"S": {"jordan": [1]}, "X": {"dim": 2, "action": [[0, 0], [1, 0]]}},
      "maps":      {"i": {"src": "S", "tgt": "X", "matrix": [[0], [1]]}, ...},
      "sequences": {"alpha": ["i", "q"]},
      "morphisms": {"m": {"top": "alpha", "bottom": "alpha", "maps": ["f1", "f2", "f3"]}}
    }

A map ``M -> N`` has ``dim N`` rows and ``dim M`` columns.  ``morphisms`` is
optional and only read by ``snake``.

Exit codes: 0 verdict computed, 1 parse error, 2 validation error, 64 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

import jsonschema

from .errors import ContractViolation, ValidationError
from .exactla import PrimeField, PrimeMatrix
from .modcat import Algebra, ModuleMap, RModule, from_jordan, jordan_type, stable_reduce
from .seqlab import ExactSeq, SesMorphism, long_class, snake, verify_exact
from .toda import toda_bracket
from . import decider

EXIT_OK, EXIT_PARSE, EXIT_VALIDATION, EXIT_USAGE = 0, 1, 2, 64


class ParseError(ValueError):
    pass


class UsageError(ValueError):
    pass


@dataclass
class Workspace:
    p: int
    n: int
    modules: dict = field(default_factory=dict)       # name -> RModule
    module_specs: dict = field(default_factory=dict)  # name -> spec as written
    maps: dict = field(default_factory=dict)          # name -> (src, tgt, ModuleMap)
    sequences: dict = field(default_factory=dict)     # name -> [map names]
    morphisms: dict = field(default_factory=dict)     # name -> {"top", "bottom", "maps"}

    @property
    def algebra(self) -> Algebra:
        return Algebra.of(self.p, self.n)

    def sequence(self, name: str) -> ExactSeq:
        return ExactSeq.from_maps([self.maps[m][2] for m in self.sequences[name]])


# -- parsing ------------------------------------------------------------------

def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _matrix(raw, what: str) -> list:
    if not isinstance(raw, list) or not all(isinstance(r, list) and all(_is_int(e) for e in r) for r in raw):
        raise ParseError(f"{what}: matrix must be a list of integer rows")
    return raw


def _names(raw, what: str) -> list:
    if not isinstance(raw, list) or not all(isinstance(s, str) for s in raw):
        raise ParseError(f"{what}: expected a list of names")
    return raw


def _obj(doc: dict, key: str, required: bool = True) -> dict:
    val = doc.get(key, {} if not required else None)
    if not isinstance(val, dict):
        raise ParseError(f"'{key}' must be an object")
    return val


def _build_matrix(fld: PrimeField, rows: list, nrows: int, ncols: int, entity: str) -> PrimeMatrix:
    if len(rows) != nrows or any(len(r) != ncols for r in rows):
        raise ValidationError(f"{entity}: expected a {nrows} x {ncols} matrix", entity)
    if nrows == 0 or ncols == 0:
        return PrimeMatrix.zeros(fld, nrows, ncols)
    return PrimeMatrix(fld, rows)


def parse(document: str, p: int | None = None, n: int | None = None) -> Workspace:
    """Parse and validate a workspace document (see the module docstring)."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("document must be a JSON object")
    p = doc.get("field") if p is None else p
    n = doc.get("nilpotency") if n is None else n
    if not _is_int(p) or not _is_int(n):
        raise ParseError("'field' and 'nilpotency' must be integers")
    try:
        alg = Algebra.of(p, n)
    except (ContractViolation, ValidationError) as exc:
        raise ValidationError(str(exc), "field") from None
    ws = Workspace(p, n)

    for name, spec in _obj(doc, "modules").items():
        if not isinstance(spec, dict):
            raise ParseError(f"module {name}: expected an object")
        if "jordan" in spec:
            sizes = spec["jordan"]
            if not isinstance(sizes, list) or not all(_is_int(a) for a in sizes):
                raise ParseError(f"module {name}: 'jordan' must be a list of integers")
            try:
                M = from_jordan(alg, sizes)
            except ValidationError as exc:
                raise ValidationError(f"module {name}: {exc}", name) from None
            ws.module_specs[name] = {"jordan": list(sizes)}
        elif "dim" in spec and "action" in spec:
            d = spec["dim"]
            if not _is_int(d) or d < 0:
                raise ParseError(f"module {name}: 'dim' must be a non-negative integer")
            rows = _matrix(spec["action"], f"module {name}")
            try:
                M = RModule(alg, _build_matrix(alg.field, rows, d, d, name))
            except ValidationError as exc:
                raise ValidationError(f"module {name}: {exc}", name) from None
            ws.module_specs[name] = {"dim": d, "action": M.action.tolist()}
        else:
            raise ParseError(f"module {name}: needs 'jordan' or 'dim' + 'action'")
        ws.modules[name] = M

    for name, spec in _obj(doc, "maps", required=False).items():
        if not isinstance(spec, dict) or not {"src", "tgt", "matrix"} <= spec.keys():
            raise ParseError(f"map {name}: needs 'src', 'tgt' and 'matrix'")
        src, tgt = spec["src"], spec["tgt"]
        for ref in (src, tgt):
            if ref not in ws.modules:
                raise ValidationError(f"map {name}: unknown module {ref!r}", name)
        M, N = ws.modules[src], ws.modules[tgt]
        rows = _matrix(spec["matrix"], f"map {name}")
        try:
            f = ModuleMap(M, N, _build_matrix(alg.field, rows, N.dim, M.dim, name))
        except ValidationError as exc:
            raise ValidationError(f"map {name}: {exc}", name) from None
        ws.maps[name] = (src, tgt, f)

    for name, refs in _obj(doc, "sequences", required=False).items():
        refs = _names(refs, f"sequence {name}")
        if not refs:
            raise ValidationError(f"sequence {name}: needs at least one map", name)
        for r in refs:
            if r not in ws.maps:
                raise ValidationError(f"sequence {name}: unknown map {r!r}", name)
        for a, b in zip(refs, refs[1:]):
            if ws.maps[a][1] != ws.maps[b][0]:
                raise ValidationError(f"sequence {name}: {a} and {b} do not chain", name)
        ws.sequences[name] = list(refs)

    for name, spec in _obj(doc, "morphisms", required=False).items():
        if not isinstance(spec, dict) or not {"top", "bottom", "maps"} <= spec.keys():
            raise ParseError(f"morphism {name}: needs 'top', 'bottom' and 'maps'")
        comps = _names(spec["maps"], f"morphism {name}")
        for ref in (spec["top"], spec["bottom"]):
            if ref not in ws.sequences or len(ws.sequences[ref]) != 2:
                raise ValidationError(f"morphism {name}: {ref!r} is not a declared short exact sequence", name)
        if len(comps) != 3 or any(c not in ws.maps for c in comps):
            raise ValidationError(f"morphism {name}: needs three declared maps", name)
        ws.morphisms[name] = {"top": spec["top"], "bottom": spec["bottom"], "maps": list(comps)}
    return ws


def dump(ws: Workspace) -> dict:
    """Inverse of ``parse``: the workspace as a JSON-ready document."""
    doc = {
        "field": ws.p,
        "nilpotency": ws.n,
        "modules": {k: v for k, v in ws.module_specs.items()},
        "maps": {k: {"src": s, "tgt": t, "matrix": f.matrix.tolist()} for k, (s, t, f) in ws.maps.items()},
        "sequences": {k: list(v) for k, v in ws.sequences.items()},
    }
    if ws.morphisms:
        doc["morphisms"] = {k: dict(v) for k, v in ws.morphisms.items()}
    return doc


def workspace_from_sequence(seq: ExactSeq, name: str = "six", prefix: str = "A") -> Workspace:
    """Name the modules and maps of a sequence (``A0, A1, ...`` and ``a0, a1, ...``)."""
    alg = seq.algebra
    ws = Workspace(alg.p, alg.n)
    mnames = [f"{prefix}{i}" for i in range(len(seq))]
    for nm, M in zip(mnames, seq.modules):
        ws.modules[nm] = M
        if M == from_jordan(alg, jordan_type(M)):
            ws.module_specs[nm] = {"jordan": list(jordan_type(M))}
        else:
            ws.module_specs[nm] = {"dim": M.dim, "action": M.action.tolist()}
    refs = []
    for i, f in enumerate(seq.maps):
        nm = f"{prefix.lower()}{i}"
        ws.maps[nm] = (mnames[i], mnames[i + 1], f)
        refs.append(nm)
    ws.sequences[name] = refs
    return ws


# -- reports ------------------------------------------------------------------

_BOOL = {"type": "boolean"}
_MATRIX = {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}
_VERDICT_PROPS = {
    "exact": _BOOL,
    "neeman": {"type": "object", "required": ["ext3_MA_zero", "ext3_FK_zero"],
               "properties": {"ext3_MA_zero": _BOOL, "ext3_FK_zero": _BOOL}},
    "toda": {"type": "object", "required": ["defined", "contains_zero"],
             "properties": {"defined": _BOOL, "contains_zero": _BOOL}},
    "realizable": _BOOL,
    "obstruction": {"enum": ["none", "not-exact", "neeman-MA", "neeman-FK", "toda"]},
    "details": {"type": "object"},
}
_VERDICT_REQUIRED = ["exact", "neeman", "toda", "realizable", "obstruction", "details"]


def _when(command: str, required: list, props: dict | None = None) -> dict:
    then = {"required": required}
    if props:
        then["properties"] = props
    return {"if": {"properties": {"command": {"const": command}}}, "then": then}


REPORT_SCHEMA = {
    "type": "object",
    "required": ["command"],
    "properties": {
        "command": {"enum": ["validate", "decide", "snake", "toda", "ext", "neeman5", "example", "fuzz"]},
        **_VERDICT_PROPS,
    },
    "allOf": [
        _when("validate", ["sequences"], {"sequences": {"type": "object"}}),
        _when("decide", _VERDICT_REQUIRED),
        _when("example", _VERDICT_REQUIRED + ["name", "document"]),
        _when("snake", ["exact", "document", "details"]),
        _when("toda", ["toda", "details"]),
        _when("ext", ["exact", "degree", "zero", "details"],
              {"degree": {"type": "integer"}, "zero": _BOOL}),
        _when("neeman5", ["exact", "realizable", "details"]),
        _when("fuzz", ["trials", "seed", "realizable_count", "exact_count", "failures"],
              {"trials": {"type": "integer"}, "realizable_count": {"type": "integer"},
               "exact_count": {"type": "integer"}, "failures": {"type": "array"}}),
    ],
}


def parse_report(text: str) -> dict:
    """Load a report and check it against ``REPORT_SCHEMA``."""
    rep = json.loads(text)
    jsonschema.validate(rep, REPORT_SCHEMA)
    return rep


def _emit(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)


def verdict_report(command: str, six: ExactSeq) -> dict:
    v = decider.snake_realizable(six)
    details: dict = {}
    if v.classes is not None:
        imgs = v.classes.images
        details["dims"] = {"K": imgs.K.dim, "L": imgs.L.dim, "M": imgs.M.dim}
        details["jordan"] = {k: list(jordan_type(m)) for k, m in zip("KLM", imgs[:3])}
        details["sthom_dims"] = {
            name: cls.rep.homspace.stable_dim
            for name, cls in (("alpha", v.classes.alpha), ("beta", v.classes.beta),
                              ("gamma", v.classes.gamma), ("delta", v.classes.delta))
        }
        details["classes_zero"] = {
            name: cls.is_zero()
            for name, cls in (("alpha", v.classes.alpha), ("beta", v.classes.beta),
                              ("gamma", v.classes.gamma), ("delta", v.classes.delta),
                              ("gamma_beta", v.classes.gamma_beta))
        }
    if v.bracket is not None and v.bracket.defined:
        details["bracket"] = {
            "representative": v.bracket.representative.canonical.tolist(),
            "indeterminacy_dim": v.bracket.indeterminacy.dim,
            "hom_dim": v.bracket.homspace.dim,
        }
    return {
        "command": command,
        "exact": v.exact,
        "neeman": {"ext3_MA_zero": v.ext3_MA_zero, "ext3_FK_zero": v.ext3_FK_zero},
        "toda": {"defined": v.toda_defined, "contains_zero": v.toda_contains_zero},
        "realizable": v.realizable,
        "obstruction": v.obstruction.value,
        "details": details,
    }


# -- commands -------------------------------------------------------------------

def _pick(names: dict, chosen: str | None, kind: str) -> str:
    if chosen is not None:
        if chosen not in names:
            raise ValidationError(f"unknown {kind} {chosen!r}", chosen)
        return chosen
    if len(names) != 1:
        raise UsageError(f"document declares {len(names)} {kind}s; choose one with --{kind}")
    return next(iter(names))


def cmd_validate(ws: Workspace, args) -> dict:
    seqs = {}
    for name in ws.sequences:
        rep = verify_exact(ws.sequence(name))
        seqs[name] = {"length": len(rep.positions), "exact": rep.exact, "failures": rep.failures(),
                      "alternating_sum": rep.alternating_sum}
    mods = {name: {"dim": M.dim, "jordan": list(jordan_type(M))} for name, M in ws.modules.items()}
    return {"command": "validate", "sequences": seqs, "modules": mods}


def cmd_decide(ws: Workspace, args) -> dict:
    name = _pick(ws.sequences, args.sequence, "sequence")
    rep = verdict_report("decide", ws.sequence(name))
    rep["sequence"] = name
    return rep


def cmd_snake(ws: Workspace, args) -> dict:
    name = _pick(ws.morphisms, args.morphism, "morphism")
    spec = ws.morphisms[name]
    top, bottom = ws.sequence(spec["top"]), ws.sequence(spec["bottom"])
    for s, label in ((top, spec["top"]), (bottom, spec["bottom"])):
        if not verify_exact(s).exact:
            raise ValidationError(f"sequence {label} is not short exact", label)
    f1, f2, f3 = (ws.maps[m][2] for m in spec["maps"])
    m = SesMorphism(top.verify(), bottom.verify(), f1, f2, f3)
    six = snake(m)
    out = workspace_from_sequence(six, name=f"snake_{name}", prefix="K")
    return {
        "command": "snake",
        "morphism": name,
        "exact": verify_exact(six).exact,
        "document": dump(out),
        "details": {"jordan": [list(jordan_type(M)) for M in six.modules]},
    }


def cmd_toda(ws: Workspace, args) -> dict:
    if not args.maps:
        raise UsageError("toda needs --maps x,y,z")
    names = args.maps.split(",")
    if len(names) != 3:
        raise UsageError("toda needs exactly three map names")
    for nm in names:
        if nm not in ws.maps:
            raise ValidationError(f"unknown map {nm!r}", nm)
    x, y, z = (stable_reduce(ws.maps[nm][2]) for nm in names)
    if x.tgt != y.src or y.tgt != z.src:
        raise ValidationError("maps are not composable", names[1])
    b = toda_bracket(x, y, z)
    details = {"maps": names}
    if b.defined:
        details.update({"representative": b.representative.canonical.tolist(),
                        "indeterminacy_dim": b.indeterminacy.dim, "hom_dim": b.homspace.dim})
    return {"command": "toda", "toda": {"defined": b.defined, "contains_zero": b.contains_zero},
            "details": details}


def cmd_ext(ws: Workspace, args) -> dict:
    name = _pick(ws.sequences, args.sequence, "sequence")
    seq = ws.sequence(name)
    exact = verify_exact(seq).exact
    if not exact or len(seq) < 3:
        return {"command": "ext", "sequence": name, "exact": exact, "degree": max(len(seq) - 2, 0),
                "zero": False, "details": {"error": "sequence is not exact" if not exact else "too short"}}
    cls = long_class(seq)
    return {"command": "ext", "sequence": name, "exact": True, "degree": cls.degree, "zero": cls.is_zero(),
            "details": {"representative": cls.rep.canonical.tolist(), "sthom_dim": cls.rep.homspace.stable_dim}}


def cmd_neeman5(ws: Workspace, args) -> dict:
    name = _pick(ws.sequences, args.sequence, "sequence")
    seq = ws.sequence(name)
    if len(seq) != 5:
        raise ValidationError(f"sequence {name} has length {len(seq)}, expected 5", name)
    exact = verify_exact(seq).exact
    realizable = exact and decider.neeman5(seq)
    return {"command": "neeman5", "sequence": name, "exact": exact, "realizable": realizable,
            "details": {"ext3_zero": realizable if exact else None}}


def cmd_example(args) -> dict:
    p = args.field if args.field is not None else 2
    n = args.nilpotency if args.nilpotency is not None else 3
    try:
        if args.name == "paper":
            if n != 3:
                raise ValidationError("example 'paper' needs nilpotency 3", "nilpotency")
            six, _ = decider.paper_example(p)
        else:
            six = decider.resolution_example(p, n)
    except ContractViolation as exc:
        raise ValidationError(str(exc), "field") from None
    rep = verdict_report("example", six)
    rep["name"] = args.name
    rep["document"] = dump(workspace_from_sequence(six, name=args.name))
    return rep


def cmd_fuzz(args) -> dict:
    t0 = time.perf_counter()
    results = decider.soundness_fuzz(args.trials, args.seed, max_dim=args.max_dim, n=args.n,
                                     p=args.field, jobs=args.jobs)
    failures = [r._asdict() for r in results if not (r.exact and r.realizable)]
    for f in failures:
        f["dims"] = list(f["dims"])
    rep = {
        "command": "fuzz",
        "trials": args.trials,
        "seed": args.seed,
        "exact_count": sum(r.exact for r in results),
        "realizable_count": sum(r.realizable for r in results),
        "failures": failures,
    }
    if args.timing:
        rep["seconds"] = round(time.perf_counter() - t0, 3)
    return rep


DOC_COMMANDS = {
    "validate": cmd_validate,
    "decide": cmd_decide,
    "snake": cmd_snake,
    "toda": cmd_toda,
    "ext": cmd_ext,
    "neeman5": cmd_neeman5,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="snakelemma", description="Decide whether six-term exact sequences come from the snake lemma.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in DOC_COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("document", help="workspace JSON file, or - for stdin")
        if name in ("decide", "ext", "neeman5"):
            sp.add_argument("--sequence")
        if name == "snake":
            sp.add_argument("--morphism")
        if name == "toda":
            sp.add_argument("--maps", help="comma-separated map names x,y,z")
    ex = sub.add_parser("example")
    ex.add_argument("name", choices=["paper", "resolution"])
    ex.add_argument("--field", type=int)
    ex.add_argument("--nilpotency", type=int)
    fz = sub.add_parser("fuzz")
    fz.add_argument("--trials", type=int, default=100)
    fz.add_argument("--seed", type=int, default=0)
    fz.add_argument("--max-dim", type=int, default=10)
    fz.add_argument("--n", type=int, help="nilpotency order (random in {2,3,4} if omitted)")
    fz.add_argument("--field", type=int, help="prime p (random in {2,3} if omitted)")
    fz.add_argument("--jobs", type=int, default=1)
    fz.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    return ap


def run(argv: list[str], stdin=None) -> tuple[int, str]:
    """Run one command; returns (exit code, text written to stdout or stderr)."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0), ""
    try:
        if args.command == "example":
            return EXIT_OK, _emit(cmd_example(args))
        if args.command == "fuzz":
            if args.trials < 0 or args.max_dim < 0:
                raise UsageError("--trials and --max-dim must be non-negative")
            try:
                return EXIT_OK, _emit(cmd_fuzz(args))
            except (ContractViolation, ValidationError) as exc:
                raise ValidationError(str(exc), "fuzz") from None
        if args.document == "-":
            text = (stdin or sys.stdin).read()
        else:
            try:
                with open(args.document, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                return EXIT_USAGE, f"cannot read {args.document}: {exc}"
        ws = parse(text)
        return EXIT_OK, _emit(DOC_COMMANDS[args.command](ws, args))
    except ParseError as exc:
        return EXIT_PARSE, f"parse error: {exc}"
    except UsageError as exc:
        return EXIT_USAGE, f"usage error: {exc}"
    except (ValidationError, ContractViolation) as exc:
        entity = getattr(exc, "entity", None)
        return EXIT_VALIDATION, f"validation error{f' [{entity}]' if entity else ''}: {exc}"


def main(argv: list[str] | None = None) -> int:
    code, text = run(sys.argv[1:] if argv is None else argv)
    if text:
        print(text, file=sys.stdout if code == EXIT_OK else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
