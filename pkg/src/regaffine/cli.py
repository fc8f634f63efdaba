"""Command-line entry point: ``regaffine <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .affine import LinearDeltaGroup, check_group_condition, is_unipotent_group
from .algebra import (BudgetExceeded, NilpotentAlgebra, NotAGroup, NotAssociative, NotNilpotentAlgebra,
                      PresentationCheck, are_isomorphic_bruteforce, check_presentation, from_delta,
                      quotient_algebra, to_delta)
from .census import (compare_to_fixture, cross_check, fixture_name, load_fixture, run_census)
from .classifier import OutOfScope, Unclassified, classify, table_catalog
from .invariants import profile, generic_profile, is_indecomposable_certificate
from .linalg import Field
from .standard import BadLabel, BadParams, BadPartition, CharMismatch, hegedus, render, representative


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class CommandConfig:
    subcommand: str
    field: Field | None
    n: int | None
    out: Path | None
    fmt: str
    jobs: int

    def __post_init__(self):
        if self.jobs < 1:
            raise ValueError("--jobs must be >= 1")
        if self.fmt not in ("json", "text"):
            raise ValueError("--format must be json or text")


def _field_arg(s: str) -> Field:
    try:
        return Field.parse(s)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def load_group(source: str, n: int | None = None, field: Field | None = None) -> LinearDeltaGroup:
    """A group from a JSON file, or from a label when ``source`` is not a file."""
    if Path(source).exists():
        d = _read_json(source)
        try:
            if "delta" in d:
                return LinearDeltaGroup.from_json(d)
            if "c" in d:
                return to_delta(NilpotentAlgebra.from_json(d))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"{source}: {exc}") from exc
        raise ParseError(f"{source}: neither a group nor an algebra")
    if field is None:
        raise ParseError(f"{source} is not a file; pass --field to build it as a label")
    return representative(source, n, field)


def load_algebra(source: str, n: int | None = None, field: Field | None = None) -> NilpotentAlgebra:
    if Path(source).exists():
        d = _read_json(source)
        if "c" in d:
            try:
                return NilpotentAlgebra.from_json(d)
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"{source}: {exc}") from exc
    return from_delta(load_group(source, n, field))


def _emit(cfg: CommandConfig, payload: dict, text: str):
    if cfg.out:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(json.dumps(payload, indent=2) + "\n")
    if cfg.fmt == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def cmd_construct(args, cfg: CommandConfig) -> int:
    if args.label.lower() == "hegedus":
        if cfg.field is None or not cfg.field.is_finite:
            raise ParseError("hegedus needs --field F<p>")
        elems = hegedus(cfg.n or 4, cfg.field.p)
        payload = {"n": cfg.n or 4, "field": cfg.field.to_json(), "elements": [m.to_json() for m in elems]}
        _emit(cfg, payload, f"{len(elems)} elements of the Hegedus subgroup of AGL_{cfg.n or 4}(F{cfg.field.p})")
        return 0
    g = representative(args.label, cfg.n, cfg.field or Field(None))
    _emit(cfg, g.to_json(), render(g))
    return 0


def cmd_classify(args, cfg: CommandConfig) -> int:
    g = load_group(args.source, cfg.n, cfg.field)
    rep = classify(g)
    text = f"{rep.label}" + (f"  [{rep.caveat}]" if rep.caveat else "")
    _emit(cfg, rep.to_json(), text)
    return 0


def cmd_profile(args, cfg: CommandConfig) -> int:
    g = load_group(args.source, cfg.n, cfg.field)
    prof = profile(g) if g.field.is_finite else generic_profile(g)
    payload = prof.to_json()
    if prof.generic:
        payload["note"] = "generic, lower bound"
    payload["indecomposable"] = is_indecomposable_certificate(g)
    text = " ".join(f"{k}={v}" for k, v in payload.items())
    _emit(cfg, payload, text)
    return 0


def _census_p(args, cfg: CommandConfig) -> int:
    if args.p is not None:
        return args.p
    if cfg.field is not None and cfg.field.is_finite:
        return cfg.field.p
    raise ParseError("census needs --p or --field F<p>")


def cmd_census(args, cfg: CommandConfig) -> int:
    p = _census_p(args, cfg)
    rep = run_census(cfg.n, p, args.abelian_only, cfg.jobs)
    s = rep.summary()
    lines = [f"n={rep.n} p={rep.p} groups={rep.total_groups} classes={len(rep.classes)} "
             f"abelian={rep.abelian_count} nonabelian={rep.nonabelian_count}"]
    for c in rep.classes:
        lab = c.report.to_json()["label"] if c.report else "?"
        cav = f"  [{c.report.caveat}]" if c.report and c.report.caveat else ""
        lines.append(f"  {lab:<12} size={c.size}{cav}")
    if cfg.out:
        cfg.out.parent.mkdir(parents=True, exist_ok=True)
        cfg.out.write_text(json.dumps(rep.to_json(), indent=2) + "\n")
    print(json.dumps(s, indent=2) if cfg.fmt == "json" else "\n".join(lines))
    return 0


def cmd_verify(args, cfg: CommandConfig) -> int:
    p = _census_p(args, cfg)
    rep = run_census(cfg.n, p, args.abelian_only, cfg.jobs)
    problems = []
    notes = []
    for d in cross_check(rep):
        (problems if d.is_failure else notes).append(f"{d.kind}: {d.detail}")
    fixture = load_fixture(cfg.n, p, args.abelian_only)
    if fixture is None:
        notes.append(f"no fixture {fixture_name(cfg.n, p, args.abelian_only)}")
    else:
        problems += compare_to_fixture(rep, fixture)
        expected_extras = set(fixture.get("extras", []))
        got_extras = {str(c.report.label) for c in rep.classes if c.report and c.report.caveat}
        if got_extras != expected_extras:
            problems.append(f"extras {sorted(got_extras)} != fixture {sorted(expected_extras)}")
    for c in rep.classes:
        if not check_group_condition(c.canonical) or not is_unipotent_group(c.canonical):
            problems.append(f"canonical representative fails group checks: {c.canonical.key()}")
    status = "ok" if not problems else "FAIL"
    payload = {"n": cfg.n, "p": p, "abelian_only": args.abelian_only, "status": status,
               "classes": len(rep.classes), "problems": problems, "notes": notes}
    text = "\n".join([f"verify n={cfg.n} p={p}: {status} ({len(rep.classes)} classes)"]
                     + [f"  problem: {x}" for x in problems] + [f"  note: {x}" for x in notes])
    _emit(cfg, payload, text)
    return 0 if not problems else 1


def cmd_algebra(args, cfg: CommandConfig) -> int:
    if args.action == "roundtrip":
        a = load_algebra(args.files[0], cfg.n, cfg.field)
        ok = from_delta(to_delta(a)) == a
        _emit(cfg, {"roundtrip": ok}, f"roundtrip {'ok' if ok else 'FAILED'}")
        return 0 if ok else 1
    if args.action == "iso":
        if len(args.files) != 2:
            raise ParseError("algebra iso takes two files")
        a, b = (load_algebra(x, cfg.n, cfg.field) for x in args.files)
        P = are_isomorphic_bruteforce(a, b)
        if P is None:
            _emit(cfg, {"isomorphic": False}, "not isomorphic")
            return 1
        _emit(cfg, {"isomorphic": True, "P": P.to_json()}, f"isomorphic, P={[list(r) for r in P.rows]}")
        return 0
    if args.action == "present":
        if len(args.files) != 2:
            raise ParseError("algebra present takes an algebra file and a presentation file")
        a = load_algebra(args.files[0], cfg.n, cfg.field)
        pc = PresentationCheck.from_json(_read_json(args.files[1]), a.field)
        r = check_presentation(a, pc)
        payload = {"ok": r.ok, "relations_vanish": r.relations_vanish, "generates": r.generates,
                   "quotient_dim": r.quotient_dim, "n": r.n, "truncated_monomials": r.truncated_monomials}
        _emit(cfg, payload, " ".join(f"{k}={v}" for k, v in payload.items()))
        return 0 if r.ok else 1
    if args.action == "quotient":
        if cfg.field is None:
            raise ParseError("algebra quotient needs --field")
        names = [x.strip() for x in args.gens.split(",")]
        a = quotient_algebra(cfg.field, names, args.rel)
        _emit(cfg, a.to_json(), f"quotient algebra, dim J = {a.n}")
        return 0
    raise ParseError(f"unknown algebra action {args.action}")


def cmd_catalog(args, cfg: CommandConfig) -> int:
    field = cfg.field or Field(2)
    reps = table_catalog(cfg.n, field)
    _emit(cfg, {"n": cfg.n, "field": field.to_json(), "entries": [r.to_json() for r in reps]},
          "\n".join(str(r.label) + (f"  [{r.caveat}]" if r.caveat else "") for r in reps))
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=None)
    common.add_argument("--field", type=_field_arg, default=None, help="F<p> or Q")
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--format", dest="fmt", choices=("json", "text"), default="text")
    common.add_argument("--jobs", type=int, default=1)

    ap = argparse.ArgumentParser(prog="regaffine", description=__doc__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("construct", parents=[common], help="build a named representative")
    s.add_argument("label", help="e.g. S(3,2), S#(2,2,1), R[a=2], N3[l=1], Tr, hegedus")
    s.set_defaults(func=cmd_construct)

    for name, fn, hlp in (("classify", cmd_classify, "label a group file"),
                          ("profile", cmd_profile, "invariants d, r, k of a group and its centre")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("source", help="group/algebra JSON file, or a label with --field")
        s.set_defaults(func=fn)

    for name, fn, hlp in (("census", cmd_census, "enumerate and bucket groups over F_p"),
                          ("verify", cmd_verify, "census vs catalog vs fixtures; exit 1 on discrepancy")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("--p", type=int, default=None)
        s.add_argument("--abelian-only", action="store_true")
        s.set_defaults(func=fn)

    s = sub.add_parser("algebra", parents=[common], help="roundtrip | iso | present | quotient")
    s.add_argument("action", choices=("roundtrip", "iso", "present", "quotient"))
    s.add_argument("files", nargs="*")
    s.add_argument("--gens", default="x,y,z")
    s.add_argument("--rel", action="append", default=[])
    s.set_defaults(func=cmd_algebra)

    s = sub.add_parser("catalog", parents=[common], help="list table representatives")
    s.set_defaults(func=cmd_catalog)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = CommandConfig(args.subcommand, args.field, args.n, args.out, args.fmt, args.jobs)
        if args.subcommand in ("census", "verify", "catalog") and cfg.n is None:
            raise ParseError(f"{args.subcommand} needs --n")
        return args.func(args, cfg)
    except (BadLabel, BadParams, BadPartition, CharMismatch, OutOfScope, ParseError, NotAGroup,
            NotAssociative, NotNilpotentAlgebra, BudgetExceeded, Unclassified, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
