"""Command-line front end: ``heptaca audit|simulate|render|elicit|scenario-list``.

Exit codes: 0 success, 1 rule conflict or unreadable input, 2 missing rule,
3 rim contact, 4 file system error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path
from typing import Sequence

from . import fixture_path
from .engine import RuleConflictError, RuleSyntaxError, load_rules, parse_rules, run
from .formats import FormatError, declared_level, format_trace, infer_level, parse_configuration, parse_trace
from .grid import RegionError, build_region
from .railway.paths import PathError
from .railway.scenario import SCENARIOS, ScenarioError, build_scene, load_scenario, parse_scenario
from .render import RenderStyle, StyleError, load_style, locomotive_fronts, render_svg
from .toolkit import AnswersExhausted, ScriptedAnswers, TerminalAnswers, audit_rotation_invariance, elicit

EXIT_OK = 0
EXIT_CONFLICT = 1
EXIT_MISSING = 2
EXIT_RIM = 3
EXIT_IO = 4


class _Fail(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _rules_path(args) -> Path:
    return Path(args.rules) if args.rules else fixture_path()


def _read(path: str | Path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str | Path, text: str, mode: str = "w") -> None:
    try:
        with open(path, mode) as fh:
            fh.write(text)
    except OSError as exc:
        raise _Fail(EXIT_IO, f"cannot write {path}: {exc.strerror or exc}") from None


def _table(args):
    path = _rules_path(args)
    text = _read(path)
    try:
        return load_rules(text)
    except (RuleSyntaxError, RuleConflictError) as exc:
        raise _Fail(EXIT_CONFLICT, f"{path}: {exc}") from None


def _looks_like_scenario(text: str) -> bool:
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return "=" in line
    return True


def _scene(args, table):
    """Region, starting configuration and preferred picture column order."""
    name = args.scenario
    if name not in SCENARIOS:
        text = _read(name)
        if not _looks_like_scenario(text):
            level = args.level if args.level is not None else infer_level(text)
            region = build_region(level)
            return region, parse_configuration(text, region), None, name
        sc = parse_scenario(text)
    else:
        sc = load_scenario(name)
    if args.level is not None:
        sc = replace(sc, level=args.level)
    scene = build_scene(sc, table)
    order = scene.path.s3 if scene.path is not None else None
    return scene.region, scene.config, order, name


def cmd_audit(args) -> int:
    path = _rules_path(args)
    text = _read(path)
    try:
        rules = parse_rules(text)
    except RuleSyntaxError as exc:
        raise _Fail(EXIT_CONFLICT, f"{path}: {exc}") from None
    report = audit_rotation_invariance(rules)
    sys.stdout.write(report.text(expected=args.expected))
    return EXIT_OK if report.rotation_invariant else EXIT_CONFLICT


def cmd_simulate(args) -> int:
    table = _table(args)
    region, config, order, name = _scene(args, table)
    trace = run(config, table, args.steps)
    text = format_trace(trace.configs, region.max_level)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        _write(args.out, text)
    if args.report:
        from .report import write_report

        try:
            write_report(trace.configs, args.report, order=order, title=f"{name}, {len(trace) - 1} steps")
        except OSError as exc:
            raise _Fail(EXIT_IO, f"cannot write report to {args.report}: {exc.strerror or exc}") from None
    done = len(trace) - 1
    if trace.missing is not None:
        lines = [f"missing rule after {done} of {args.steps} steps:"]
        lines += [f"  {m}" for m in trace.missing.missing]
        raise _Fail(EXIT_MISSING, "\n".join(lines))
    if trace.rim_contact:
        cells = " ".join(str(c) for c in trace.rim_contact[:10])
        raise _Fail(EXIT_RIM, f"rim contact after {done} of {args.steps} steps at {cells}")
    print(f"{done} steps, {len(trace.configs[-1])} non-blank cells at the end", file=sys.stderr)
    return EXIT_OK


def cmd_render(args) -> int:
    text = _read(args.trace)
    level = declared_level(text)
    region = build_region(level if level is not None else infer_level(text))
    configs = parse_trace(text, region)
    if not 0 <= args.step < len(configs):
        raise _Fail(EXIT_CONFLICT, f"step {args.step} is outside 0..{len(configs) - 1}")
    style = load_style(args.style) if args.style else RenderStyle()
    if args.level is not None:
        style = replace(style, max_level=args.level)
    svg = render_svg(configs[args.step], style, locomotive_fronts(configs, args.step))
    if args.out == "-":
        sys.stdout.write(svg)
    else:
        _write(args.out, svg)
    return EXIT_OK


def cmd_elicit(args) -> int:
    table = _table(args)
    region, config, _, name = _scene(args, table)
    if args.answers:
        try:
            answers = ScriptedAnswers(_read(args.answers).splitlines())
        except ValueError as exc:
            raise _Fail(EXIT_CONFLICT, f"{args.answers}: {exc}") from None
    else:
        answers = TerminalAnswers()
    code, message = EXIT_OK, None
    added = []
    try:
        result = elicit(config, table, args.steps, answers, exact=args.match == "exact")
        added = result.added
    except RuleConflictError as exc:
        code = EXIT_CONFLICT
        message = f"conflict:\n  existing {exc.existing.cite()}\n  answered {exc.new.cite()}"
    except AnswersExhausted as exc:
        code, message = EXIT_MISSING, f"elicitation stopped: {exc}"
    if code != EXIT_OK:
        raise _Fail(code, message)
    target = Path(args.out) if args.out else _rules_path(args)
    if args.out:
        _write(target, _read(_rules_path(args)))
    lines = [f"# elicited from scenario {name}, {r.note}\n{r}\n" for r in added]
    if lines:
        _write(target, "".join(lines), mode="a")
    for r in added:
        print(f"{r}    # {r.note}")
    print(f"{len(added)} rules appended to {target}", file=sys.stderr)
    return EXIT_OK


def cmd_scenario_list(args) -> int:
    width = max(len(n) for n in SCENARIOS)
    for name, sc in SCENARIOS.items():
        print(f"{name:<{width}}  level {sc.level}  {sc.about}")
        if args.verbose:
            for line in sc.to_text().splitlines():
                print(f"{'':<{width}}    {line}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="heptaca", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("audit", help="check a rule file for rotation conflicts")
    a.add_argument("--rules", help="rule file (default: the bundled table)")
    a.add_argument("--expected", action="store_true", help="compare counts with the reference counts")
    a.set_defaults(func=cmd_audit)

    s = sub.add_parser("simulate", help="run a scenario and write its trace")
    s.add_argument("--rules")
    s.add_argument("--scenario", required=True, help="built-in name, scenario file or configuration file")
    s.add_argument("--steps", type=int, default=10)
    s.add_argument("--out", default="-", help="trace file ('-' for stdout)")
    s.add_argument("--level", type=int, help="region level, overriding the scenario")
    s.add_argument("--report", metavar="DIR", help="also write steps.csv and spacetime.png here")
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("render", help="draw one step of a trace as SVG")
    r.add_argument("--trace", required=True)
    r.add_argument("--step", type=int, default=0)
    r.add_argument("--out", default="-")
    r.add_argument("--style", help="style file of key=value lines")
    r.add_argument("--level", type=int, help="deepest level drawn")
    r.set_defaults(func=cmd_render)

    e = sub.add_parser("elicit", help="grow a rule file by answering missing contexts")
    e.add_argument("--rules")
    e.add_argument("--scenario", required=True)
    e.add_argument("--steps", type=int, default=10)
    e.add_argument("--answers", help="file with one state per line (default: ask on the terminal)")
    e.add_argument("--out", help="write the grown table here instead of appending to --rules")
    e.add_argument("--level", type=int)
    e.add_argument("--match", choices=("exact", "rotated"), default="exact")
    e.set_defaults(func=cmd_elicit)

    ls = sub.add_parser("scenario-list", help="list the built-in scenarios")
    ls.add_argument("-v", "--verbose", action="store_true")
    ls.set_defaults(func=cmd_scenario_list)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "elicit" and not args.rules and not args.out:
        print("heptaca: elicit needs --rules or --out; the bundled table is read-only", file=sys.stderr)
        return EXIT_IO
    try:
        return args.func(args)
    except _Fail as exc:
        print(f"heptaca: {exc}", file=sys.stderr)
        return exc.code
    except (FormatError, ScenarioError, PathError, StyleError, RegionError) as exc:
        print(f"heptaca: {exc}", file=sys.stderr)
        return EXIT_CONFLICT


if __name__ == "__main__":
    sys.exit(main())
