"""Command-line entry point: ``hda-sem <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .errors import HDAError
from .flows import bad_realization, path_label, trace_normal_form
from .homology import (format_homology, integer_homology, load_complex, open_interval_poset,
                       order_complex)
from .pcset import PCSet, skeleton, standard_cube
from .proc import actions, format_term, parse
from .report import Report
from .semantics import check_assoc, check_comm, check_unit, interp, verify_paradigm, verify_restrict1
from .sos import FORMAT, build_lts
from .syncalg import BUILTINS, SyncAlgebra, builtin, closed_alphabet, load_algebra, validate_algebra
from .tensor import cosk_dir, cosk_undirected, tensor

OK, FAILED, USAGE = 0, 1, 2
CHECKS = ("paradigm", "restrict1", "unit", "comm", "assoc")


class UsageError(HDAError):
    kind = "usage"


@dataclass
class RunConfig:
    algebra: str = "trivial"
    depth: int = 16
    max_alphabet: int = 64
    checks: tuple[str, ...] = CHECKS
    outputs: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.depth < 0:
            raise UsageError("--depth must be >= 0")

    def make_algebra(self, labels: Sequence[str] = ()) -> SyncAlgebra:
        if self.algebra in BUILTINS:
            alg = builtin(self.algebra, closed_alphabet(self.algebra, labels))
        else:
            try:
                alg = load_algebra(self.algebra)
            except OSError as exc:
                raise UsageError(f"cannot read algebra {self.algebra!r}: {exc.strerror}") from None
            except ValueError as exc:
                raise UsageError(f"algebra file {self.algebra!r} is not valid JSON: {exc}") from None
        if len(alg.alphabet) > self.max_alphabet:
            raise UsageError(f"alphabet has {len(alg.alphabet)} actions, more than --max-alphabet {self.max_alphabet}")
        return alg


def _common(p: argparse.ArgumentParser, term: bool = False) -> None:
    p.add_argument("--algebra", default="trivial",
                   help="ccs, tcsp, trivial or a JSON file (default: trivial)")
    p.add_argument("--depth", type=int, default=16, help="recursion unfolding depth (default: 16)")
    p.add_argument("--max-alphabet", type=int, default=64)
    p.add_argument("--json-errors", action="store_true", help="report errors as JSON on stderr")
    if term:
        p.add_argument("term", nargs="?", help="process term")
        p.add_argument("--file", help="read the term from a file")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hda-sem", description="Precubical semantics of process terms.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lts", help="bounded labelled transition system of a term")
    _common(p, term=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--out")

    p = sub.add_parser("hda", help="labelled precubical set of a term")
    _common(p, term=True)
    p.add_argument("--out", help="write pcset JSON here")
    p.add_argument("--dot", help="write the 1-skeleton as DOT here")
    p.add_argument("--census", action="store_true", help="print cube counts per dimension")

    p = sub.add_parser("tensor", help="synchronized tensor product, or a coskeleton with --right omitted")
    _common(p)
    p.add_argument("--left", required=True, help="pcset JSON file, or cube:a,b / skel:a,b")
    p.add_argument("--right", help="pcset JSON file, or cube:a,b / skel:a,b")
    p.add_argument("--undirected", action="store_true",
                   help="use the full labelled coskeleton (single operand only)")
    p.add_argument("--census", action="store_true")
    p.add_argument("--out")

    p = sub.add_parser("paths", help="path classes between two vertices of a pcset")
    _common(p)
    p.add_argument("pcset", help="pcset JSON file, or cube:a,b / skel:a,b")
    p.add_argument("--from", dest="src", type=int)
    p.add_argument("--to", dest="dst", type=int)

    p = sub.add_parser("homology", help="reduced integer homology of an order complex")
    p.add_argument("--json-errors", action="store_true")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--boundary-cube", type=int, metavar="N")
    g.add_argument("--complex", metavar="JSON")
    p.add_argument("--all", action="store_true", help="also print vanishing degrees")

    p = sub.add_parser("verify", help="run structural checks on a term")
    _common(p, term=True)
    p.add_argument("--checks", default=",".join(CHECKS))

    p = sub.add_parser("check-algebra", help="check the synchronization algebra axioms")
    _common(p)
    return ap


def _term(args, cfg: RunConfig):
    if args.file and args.term:
        raise UsageError("give the term either positionally or with --file, not both")
    if args.file:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.file!r}: {exc.strerror}") from None
    elif args.term is not None:
        text = args.term
    else:
        raise UsageError("missing process term")
    raw = parse(text)
    alg = cfg.make_algebra(actions(raw))
    return alg, parse(text, alg)


def _operand(spec: str) -> PCSet:
    kind, _, rest = spec.partition(":")
    if kind in ("cube", "skel") and rest is not None and not spec.endswith(".json"):
        labels = [x for x in rest.split(",") if x]
        cube = standard_cube(labels)
        return cube if kind == "cube" else skeleton(cube, 1)
    try:
        with open(spec) as fh:
            return PCSet.from_json(json.load(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {spec!r}: {exc.strerror}") from None
    except ValueError as exc:
        raise UsageError(f"{spec!r} is not valid JSON: {exc}") from None


def _census_line(K: PCSet) -> str:
    return " ".join(f"dim{n}:{c}" for n, c in enumerate(K.census()))


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def cmd_lts(args, cfg, header):
    alg, term = _term(args, cfg)
    lts = build_lts(alg, term, cfg.depth)
    _emit(_dumps(lts.to_json()) if args.format == "json" else lts.to_dot(header), args.out)
    return OK


def cmd_hda(args, cfg, header):
    alg, term = _term(args, cfg)
    I = interp(alg, term, cfg.depth)
    K = I.pcset
    if args.out:
        obj = K.to_json(format_term)
        obj["meta"] = {k: list(v) if isinstance(v, tuple) else v for k, v in I.meta.items()}
        _emit(_dumps(obj), args.out)
    if args.dot:
        _emit(K.to_dot(header, format_term), args.dot)
    if args.census:
        print(_census_line(K))
    if not (args.out or args.dot or args.census):
        obj = K.to_json(format_term)
        obj["meta"] = {k: list(v) if isinstance(v, tuple) else v for k, v in I.meta.items()}
        _emit(_dumps(obj), None)
    return OK


def cmd_tensor(args, cfg, header):
    K = _operand(args.left)
    L = _operand(args.right) if args.right else None
    labels = set(a for c in K.cubes() for a in K.labels(c))
    if L is not None:
        labels |= set(a for c in L.cubes() for a in L.labels(c))
    alg = cfg.make_algebra(sorted(labels))
    if L is None:
        out = cosk_undirected(alg, K) if args.undirected else cosk_dir(alg, K)
    elif args.undirected:
        raise UsageError("--undirected applies to the coskeleton of a single operand")
    else:
        out = tensor(alg, K, L)
    if args.census:
        print(_census_line(out))
    if args.out or not args.census:
        _emit(_dumps(out.to_json(str)), args.out)
    return OK


def cmd_paths(args, cfg, header):
    K = _operand(args.pcset)
    labels = sorted(set(a for c in K.cubes() for a in K.labels(c)))
    alg = cfg.make_algebra(labels)
    verts = set(K.vertices)
    src = K.initial if args.src is None else args.src
    if src not in verts:
        raise UsageError(f"--from {src} is not a vertex")
    if args.dst is None:
        sinks = [v for v, es in K.out_edges().items() if not es]
        if len(sinks) != 1:
            raise UsageError("--to is required when there is no unique final vertex")
        dst = sinks[0]
    else:
        dst = args.dst
    if dst not in verts:
        raise UsageError(f"--to {dst} is not a vertex")
    pc = bad_realization(K)
    classes = pc.classes(src, dst)
    print(f"classes {src} -> {dst}: {len(classes)}")
    for group in classes:
        rep = group[0]
        nf = trace_normal_form(alg, path_label(K, rep))
        print(f"  {' '.join(map(str, rep))}  [{' '.join(nf)}]  ({len(group)} paths)")
    return OK


def cmd_homology(args, cfg, header):
    if args.boundary_cube is not None:
        if args.boundary_cube < 2:
            raise UsageError("--boundary-cube needs n >= 2")
        C = order_complex(open_interval_poset(args.boundary_cube))
    else:
        try:
            C = load_complex(args.complex)
        except OSError as exc:
            raise UsageError(f"cannot read {args.complex!r}: {exc.strerror}") from None
        except ValueError as exc:
            raise UsageError(f"{args.complex!r} is not valid JSON: {exc}") from None
    print(format_homology(integer_homology(C), show_trivial=args.all))
    return OK


def cmd_verify(args, cfg, header):
    wanted = tuple(c.strip() for c in args.checks.split(",") if c.strip())
    unknown = [c for c in wanted if c not in CHECKS]
    if unknown or not wanted:
        raise UsageError(f"unknown check(s) {', '.join(unknown) or '(none)'}; choose from {', '.join(CHECKS)}")
    alg, term = _term(args, cfg)
    reports: list[Report] = []
    I = interp(alg, term, cfg.depth) if {"paradigm", "restrict1"} & set(wanted) else None
    for name in wanted:
        if name == "paradigm":
            reports.append(verify_paradigm(I.pcset, alg))
        elif name == "restrict1":
            reports.append(verify_restrict1(alg, term, I))
        elif name == "unit":
            reports.append(check_unit(alg, term, cfg.depth))
        elif name == "comm":
            reports.append(check_comm(alg, term, cfg.depth))
        else:
            reports.append(check_assoc(alg, term, cfg.depth))
    ok = all(r.ok for r in reports)
    print(json.dumps({"format": FORMAT, "term": format_term(term), "ok": ok,
                      "reports": [r.to_json() for r in reports]}, indent=1, sort_keys=True))
    return OK if ok else FAILED


def cmd_check_algebra(args, cfg, header):
    alg = cfg.make_algebra()
    rep = validate_algebra(alg)
    print(json.dumps({"format": FORMAT, "algebra": alg.name, "alphabet": list(alg.alphabet),
                      "report": rep.to_json()}, indent=1, sort_keys=True))
    return OK if rep.ok else FAILED


COMMANDS = {
    "lts": cmd_lts, "hda": cmd_hda, "tensor": cmd_tensor, "paths": cmd_paths,
    "homology": cmd_homology, "verify": cmd_verify, "check-algebra": cmd_check_algebra,
}


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    json_errors = "--json-errors" in argv
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return OK if exc.code in (0, None) else USAGE
    header = "hda-sem " + shlex.join(argv)
    try:
        cfg = RunConfig(algebra=getattr(args, "algebra", "trivial"), depth=getattr(args, "depth", 16),
                        max_alphabet=getattr(args, "max_alphabet", 64))
        return COMMANDS[args.command](args, cfg, header)
    except HDAError as exc:
        _report_error(exc, json_errors)
        return USAGE
    except RecursionError:
        _report_error(UsageError("term is too deeply nested"), json_errors)
        return USAGE


def _report_error(exc: HDAError, as_json: bool) -> None:
    if as_json:
        sys.stderr.write(json.dumps({"format": FORMAT, **exc.to_json()}, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"hda-sem: {exc.kind}: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
