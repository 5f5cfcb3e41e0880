"""Command-line entry point: ``toricnet {dim,basis,eval,verify,mcg,lens}``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import generators as gen
from . import invariants as inv
from . import mcg
from . import relations as rel
from . import spaces as sp
from . import surface as sm


class UsageError(Exception):
    pass


def load_diagram(path: str) -> tuple[sm.WiringDiagram, dict]:
    d, labels = sm.parse_diagram(Path(path).read_text(encoding="utf-8"))
    problems = sm.validate(d)
    if problems:
        raise UsageError(f"{path}: invalid diagram: {'; '.join(problems)}")
    return d, labels


def _space(args) -> sp.StringNetSpace:
    if args.surface:
        try:
            g, n = (int(x) for x in args.surface.split(","))
        except ValueError:
            raise UsageError(f"--surface expects g,n, got {args.surface!r}") from None
        d, labels = sm.surface(g, n), {}
    elif args.diagram:
        d, labels = load_diagram(args.diagram)
    else:
        raise UsageError("give --diagram or --surface")
    try:
        labels.update(gen.parse_labels(args.labels or "", d))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return sp.space(d, labels)


def cmd_dim(args, out) -> int:
    print(_space(args).dim, file=out)
    return 0


def cmd_basis(args, out) -> int:
    s = _space(args)
    for i in range(s.dim):
        print(s.describe(i), file=out)
    return 0


def cmd_eval(args, out) -> int:
    path = Path(args.program)
    base = path.parent

    def loader(name: str):
        return load_diagram(str(base / name))

    program = gen.parse_program(path.read_text(encoding="utf-8"), loader)
    m = gen.evaluate(program)
    if m.is_scalar() and not m.domain.diagram.circles and not m.codomain.diagram.circles:
        print(sp.format_scalar(m.scalar()), file=out)
    else:
        out.write(m.serialize())
    return 0


def cmd_verify(args, out) -> int:
    report = rel.verify_all(names=args.name or None)
    if not report.results:
        raise UsageError(f"no relation named {', '.join(args.name)}")
    for r in report.results:
        status = "PASS" if r.passed else "FAIL"
        tail = f" {r.detail}" if r.detail else ""
        print(f"{status} {r.name} [{r.case.label_text()}]{tail}", file=out)
    for name, (ok, total) in report.by_name().items():
        print(f"SUMMARY {name} {ok}/{total}", file=out)
    print(f"{'ALL PASS' if report.passed else 'FAILURES'} {sum(r.passed for r in report.results)}/{len(report.results)}",
          file=out)
    return 0 if report.passed else 1


def cmd_mcg(args, out) -> int:
    table = None
    if args.curves:
        try:
            table = mcg.parse_curve_table(Path(args.curves).read_text(encoding="utf-8"), args.genus)
        except ValueError as exc:
            raise UsageError(f"{args.curves}: {exc}") from None
    elif args.genus not in (1, 2):
        raise UsageError(f"genus {args.genus} needs --curves")
    try:
        word = mcg.parse_word(args.word, args.genus, table)
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad word: {exc}") from None
    out.write(mcg.rep_matrix(args.genus, word).serialize())
    if args.order:
        print(f"order {mcg.rep_group_order(args.genus, table)}", file=out)
    return 0


def cmd_lens(args, out) -> int:
    try:
        print(sp.format_scalar(inv.lens_invariant(args.p, args.q)), file=out)
    except inv.NotCoprime as exc:
        raise UsageError(str(exc)) from None
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="toricnet", description="Exact toric-code TQFT computations.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn in (("dim", cmd_dim), ("basis", cmd_basis)):
        p = sub.add_parser(name)
        p.add_argument("--diagram")
        p.add_argument("--surface", help="built-in chain surface as g,n")
        p.add_argument("--labels", help="t=B1,u=B0 or B0,B1 in external order")
        p.set_defaults(fn=fn)
    p = sub.add_parser("eval")
    p.add_argument("program")
    p.set_defaults(fn=cmd_eval)
    p = sub.add_parser("verify")
    p.add_argument("--name", action="append")
    p.set_defaults(fn=cmd_verify)
    p = sub.add_parser("mcg")
    p.add_argument("--genus", type=int, required=True)
    p.add_argument("--word", default="")
    p.add_argument("--curves")
    p.add_argument("--order", action="store_true")
    p.set_defaults(fn=cmd_mcg)
    p = sub.add_parser("lens")
    p.add_argument("p", type=int)
    p.add_argument("q", type=int)
    p.set_defaults(fn=cmd_lens)
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args, out)
    except (sm.DiagramParseError, gen.ProgramParseError) as exc:
        print(f"parse error: {exc}", file=err)
        return 2
    except (UsageError, sm.DiagramError, gen.ProgramError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
