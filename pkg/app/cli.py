"""
Command line for .spt files.

Usage:
    spt lts corpus/rbw.spt --strategy weak --dot g.dot
    spt check corpus/deadlock.spt --confluence --strategy weak
    spt check corpus/abro.spt --all
    spt trace corpus/abro.spt --steps 3 --tiebreak seed:7

Exit codes: 0 all verdicts hold, 1 a verdict fails, 2 a verdict is
unknown, 3 the input could not be read, parsed or used. A trace exits
with 1 when a clock has non-congruent successors.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from app.config import get_settings
from app.exceptions import SptError
from app.models.lts import Strategy
from app.schemas.report import STRATEGIES, CheckReport, MacroStepTrace
from app.services.check_service import run_checks
from app.services.exporters import to_dot, to_json, to_text_summary
from app.services.macro_step import macro_run
from app.services.parser import SptFile, parse
from app.services.reachability import explore

logger = logging.getLogger(__name__)

EXIT_ERROR = 3

CHECK_FLAGS = [
    ("--confluence", "confluence", "Confluence of enabled reductions"),
    ("--coherence", "coherence", "Structural coherence"),
    ("--conformance", "conformance", "Conformance to the policy"),
    ("--pivot", "pivot", "The policy is a pivot policy"),
    ("--clock-det", "clock_det", "Clock determinism"),
    ("--max-progress", "max_progress", "Clocks fire only in normal forms"),
    ("--clock-interference", "clock_interference", "Clocks and other actions block each other"),
    ("--certify", "certify", "Syntax-directed coherence certification"),
]


class SptArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 3; exit code 2 is reserved for unknown verdicts."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = SptArgumentParser(
        prog="spt",
        description="Explore, check and run processes with priorities and clocks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  spt lts app/corpus/rbw.spt --strategy weak --dot g.dot
  spt check app/corpus/deadlock.spt --confluence --strategy weak
  spt check app/corpus/abro.spt --all
  spt trace app/corpus/abro.spt --steps 3

The SPT_BOUND environment variable sets the default state budget.
        """,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Log exploration details")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_strategy: str) -> None:
        p.add_argument("file", type=Path, help=".spt source file")
        p.add_argument(
            "--strategy",
            choices=STRATEGIES,
            default=default_strategy,
            help=f"Scheduling strategy (default: {default_strategy})",
        )
        p.add_argument("--bound", type=int, default=None, metavar="N", help="State budget (default: SPT_BOUND)")

    lts = sub.add_parser("lts", help="Build the state graph", formatter_class=argparse.RawDescriptionHelpFormatter)
    common(lts, "admissible")
    lts.add_argument("--dot", type=Path, metavar="OUT", help="Write graphviz DOT ('-' for stdout)")
    lts.add_argument("--json", type=Path, metavar="OUT", help="Write JSON ('-' for stdout)")

    check = sub.add_parser("check", help="Run analyses")
    common(check, "admissible")
    check.add_argument("--all", action="store_true", help="Every analysis that applies")
    for flag, _, text in CHECK_FLAGS:
        check.add_argument(flag, action="store_true", help=text)
    check.add_argument("--policy", metavar="NAME", help="Policy block to use (default: pi, else the first)")
    check.add_argument("--quiet", "-q", action="store_true", help="Print only the key-value report")

    trace = sub.add_parser("trace", help="Run macro-steps")
    common(trace, "constructive")
    trace.add_argument("--steps", type=int, default=1, metavar="K", help="Number of macro-steps (default: 1)")
    trace.add_argument(
        "--tiebreak", default="least", metavar="RULE", help="least, greatest or seed:N (default: least)"
    )
    return parser


def _load(path: Path) -> SptFile:
    return parse(path.read_text(encoding="utf-8"))


def _write(target: Path, text: str) -> None:
    if str(target) == "-":
        sys.stdout.write(text)
    else:
        target.write_text(text, encoding="utf-8")
        print(f"✅ Wrote {target}")


def cmd_lts(args) -> int:
    spt = _load(args.file)
    lts = explore(spt.main, spt.defs, Strategy(args.strategy), args.bound or get_settings().SPT_BOUND)
    if args.dot is None and args.json is None:
        sys.stdout.write(to_text_summary(lts))
    if args.dot is not None:
        _write(args.dot, to_dot(lts))
    if args.json is not None:
        _write(args.json, to_json(lts))
    return 2 if lts.bound_hit else 0


def print_report(report: CheckReport) -> None:
    marks = {"HOLDS": "✅", "FAILS": "❌", "UNKNOWN": "❓"}
    print(f"\n🔍 {report.source}")
    print("=" * 60)
    for v in report.verdicts:
        print(f"{marks[v.status.value]} {v.analysis}: {v.status.value} ({v.explored} states)")
        if v.reason:
            print(f"   {v.reason}")
        if v.counterexample is not None:
            cx = v.counterexample
            print(f"   at: {cx.state}")
            print(f"   why: {cx.reason}")
            for t in cx.transitions:
                blocking = "{" + ",".join(t.blocking) + "}"
                print(f"   - {t.action}:{blocking}[{t.context}]")
    if report.certification is not None:
        cert = report.certification
        print(f"📜 certify: {cert.status.value}")
        if cert.reason:
            print(f"   {cert.reason}")
    print("=" * 60)


def cmd_check(args) -> int:
    spt = _load(args.file)
    selected = ["all"] if args.all else [name for _, name, _ in CHECK_FLAGS if getattr(args, name)]
    if not selected:
        raise SptError("no analysis selected; pass --all or one of the analysis flags")
    report = run_checks(
        spt,
        analyses=selected,
        strategy=Strategy(args.strategy),
        bound=args.bound,
        policy=args.policy,
        source=str(args.file),
    )
    if not args.quiet:
        print_report(report)
    sys.stdout.write(report.to_kv())
    return report.exit_code


def print_trace(trace: MacroStepTrace) -> None:
    print(f"strategy: {trace.strategy}")
    print(f"tiebreak: {trace.tiebreak}")
    for step in trace.steps:
        print(f"\nstep {step.index}")
        print(f"  syncs: {' '.join(step.syncs) if step.syncs else '-'}")
        print(f"  normal form: {step.normal_form}")
        print(f"  clock: {step.clock or '-'}")
        if step.order_dependent:
            print("  order dependent: yes")
        if step.clock_successors:
            print(f"  clock successors: {', '.join(step.clock_successors)}")
    if trace.deadlock:
        print("\ndeadlock: no clock in the last normal form")
    if trace.clock_nondeterministic:
        print("\nclock not deterministic: the trace stops before the tick")
    if trace.partial:
        print("\npartial: budget exhausted")


def cmd_trace(args) -> int:
    spt = _load(args.file)
    trace = macro_run(
        spt.main,
        Strategy(args.strategy),
        spt.defs,
        budget=args.bound,
        steps=args.steps,
        tiebreak=args.tiebreak,
    )
    print_trace(trace)
    if trace.clock_nondeterministic:
        return 1
    return 2 if trace.partial else 0


COMMANDS = {"lts": cmd_lts, "check": cmd_check, "trace": cmd_trace}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else get_settings().LOG_LEVEL,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    if args.bound is not None and args.bound <= 0:
        print("❌ Error: --bound must be positive", file=sys.stderr)
        return EXIT_ERROR
    try:
        return COMMANDS[args.command](args)
    except (SptError, OSError) as e:
        print(f"❌ Error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
