"""
The vlines command line.

    vlines page TOWER --r N
    vlines check TOWER --cond {1,2,3,4} --m M --r N --b B [--W FILE ...]
    vlines min-intercept TOWER --m M --r N [--which D|E]
    vlines lemma TOWER --m M [--rmax N]
    vlines generic cofiber MAP [--m M] [--rmax N]
    vlines generic retract I J --m M --r N --b B
    vlines ghost TOWER --r N --b B
    vlines fuzz --seed S --count N [--p P] [--jobs J]
    vlines chart TOWER --r N --format {text,svg,csv} [--m M --b B]
    vlines version

Exit status: 0 when the command succeeds or the checked statement holds, 1 when it
fails (witnesses are printed), 2 for unreadable or invalid input.
"""

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Sequence, TextIO

from colorama import Fore, Style  # type: ignore
from exitstatus import ExitStatus  # type: ignore
from pydantic import ValidationError

from . import VERSION
from .charts import ChartFormat, emit_chart
from .config import Settings, get_settings
from .couples import Page, page
from .errors import VlinesError
from .flinalg import rank
from .lines import (
    CORPUS_SLOPES,
    Flavor,
    LineSpec,
    VerificationReport,
    WFamily,
    check_cond1,
    check_cond2,
    check_cond3,
    check_cond4,
    default_family,
    min_intercept,
    run_corpus,
    verify_generic_cofiber,
    verify_generic_retract,
    verify_ghost_corollary,
    verify_lemma,
)
from .model.documents import load_complex, load_tower, load_tower_map
from .model.util import parse_rational
from .towers import GeneratorParams, Tower, TowerMap

logger = logging.getLogger(__name__)

INPUT_ERROR = 2

LOG_FORMAT = "%(name)s:%(levelname)s:%(message)s"


def parse_tower(path: str) -> Tower:
    return load_tower(Path(path))


def parse_map(path: str) -> TowerMap:
    return load_tower_map(Path(path))


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vlines", description="Vanishing lines in spectral sequences of towers.")
    parser.add_argument("--json", action="store_true", help="machine-readable output")
    parser.add_argument("--color", dest="color", action="store_true", default=None, help="colour the verdicts")
    parser.add_argument("--no-color", dest="color", action="store_false")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging")
    commands = parser.add_subparsers(dest="command", required=True)

    cmd = commands.add_parser("page", help="the page E_r of a tower")
    cmd.add_argument("tower")
    cmd.add_argument("--r", type=int, required=True)

    cmd = commands.add_parser("check", help="check one vanishing condition")
    cmd.add_argument("tower")
    cmd.add_argument("--cond", type=int, choices=(1, 2, 3, 4), required=True)
    cmd.add_argument("--m", type=_rational, required=True)
    cmd.add_argument("--r", type=int, required=True)
    cmd.add_argument("--b", type=_rational, required=True)
    cmd.add_argument("--W", dest="w_files", nargs="+", default=[], metavar="FILE", help="complex documents")

    cmd = commands.add_parser("min-intercept", help="the least intercept above which D_r or E_r vanishes")
    cmd.add_argument("tower")
    cmd.add_argument("--m", type=_rational, required=True)
    cmd.add_argument("--r", type=int, required=True)
    cmd.add_argument("--which", choices=[f.value for f in Flavor], default=Flavor.E.value)

    cmd = commands.add_parser("lemma", help="check the four reindexing cases on a tower")
    cmd.add_argument("tower")
    cmd.add_argument("--m", type=_rational, required=True)
    cmd.add_argument("--rmax", type=int)

    generic = commands.add_parser("generic", help="check that condition (1) is generic")
    kinds = generic.add_subparsers(dest="kind", required=True)
    cmd = kinds.add_parser("cofiber")
    cmd.add_argument("map")
    cmd.add_argument("--m", type=_rational, default=Fraction(0))
    cmd.add_argument("--rmax", type=int)
    cmd = kinds.add_parser("retract")
    cmd.add_argument("i")
    cmd.add_argument("j")
    cmd.add_argument("--m", type=_rational, required=True)
    cmd.add_argument("--r", type=int, required=True)
    cmd.add_argument("--b", type=_rational, required=True)

    cmd = commands.add_parser("ghost", help="are the composites g^{r-1} ghosts above filtration b?")
    cmd.add_argument("tower")
    cmd.add_argument("--r", type=int, required=True)
    cmd.add_argument("--b", type=_rational, required=True)

    cmd = commands.add_parser("fuzz", help="run every check on seeded random towers")
    cmd.add_argument("--seed", type=int, required=True)
    cmd.add_argument("--count", type=int, required=True)
    cmd.add_argument("--p", type=int)
    cmd.add_argument("--jobs", type=int)
    cmd.add_argument(
        "--m", dest="ms", type=_rational, action="append", help="slopes (default -2, -1, -1/2, 0, 1/2, 1, 2)"
    )
    cmd.add_argument("--rmax", type=int)
    cmd.add_argument("--no-generic", dest="generic", action="store_false", help="skip the genericity checks")

    cmd = commands.add_parser("chart", help="render a page")
    cmd.add_argument("tower")
    cmd.add_argument("--r", type=int, required=True)
    cmd.add_argument("--format", required=True, help=", ".join(f.value for f in ChartFormat))
    cmd.add_argument("--m", type=_rational)
    cmd.add_argument("--b", type=_rational)

    commands.add_parser("version")
    return parser


class Output:
    """Where results go: plain or coloured text, or JSON documents."""

    def __init__(self, stream: TextIO, as_json: bool, color: bool):
        self.stream = stream
        self.as_json = as_json
        self.color = color

    def line(self, text: str = "") -> None:
        self.stream.write(text + "\n")

    def document(self, data: Any) -> None:
        self.stream.write(json.dumps(data, sort_keys=True, indent=2, default=str) + "\n")

    def verdict(self, holds: bool) -> str:
        text = "holds" if holds else "fails"
        if not self.color:
            return text
        return f"{Fore.GREEN if holds else Fore.RED}{text}{Style.RESET_ALL}"

    def report(self, report: VerificationReport) -> int:
        if self.as_json:
            self.stream.write(report.json(sort_keys=True, indent=2) + "\n")
        else:
            where = f" at {report.conclusion}" if report.conclusion else ""
            self.line(f"condition {report.condition}{where}: {self.verdict(report.holds)}")
            if report.note:
                self.line(f"  {report.note}")
            for w in report.witnesses:
                member = f" W={w.family_member}" if w.family_member else ""
                self.line(f"  s={w.s} t={w.t} dim={w.dim}{member}")
        return _status(report.holds)


def _status(holds: bool) -> int:
    return int(ExitStatus.success if holds else ExitStatus.failure)


def _page_document(e: Page) -> dict:
    return {
        "r": e.r,
        "p": e.p,
        "dims": [{"s": s, "t": t, "dim": dim} for (s, t), dim in sorted(e.module.dims.items())],
        "differential": [
            {"s": s, "t": t, "rank": rank(d)}
            for (s, t), d in sorted(e.differential.items())
            if not d.is_zero()
        ],
    }


def _intercept(b: Optional[Fraction]) -> str:
    return "-inf" if b is None else str(b)


# #### Commands


def cmd_page(args, out: Output, settings: Settings) -> int:
    e = page(parse_tower(args.tower), args.r)
    document = _page_document(e)
    if out.as_json:
        out.document(document)
        return ExitStatus.success
    out.line(f"E_{e.r} over F_{e.p}")
    for entry in document["dims"]:
        out.line(f"  s={entry['s']} t={entry['t']} dim={entry['dim']}")
    for entry in document["differential"]:
        out.line(f"  d_{e.r} from s={entry['s']} t={entry['t']}: rank {entry['rank']}")
    return ExitStatus.success


def _family(tower: Tower, args, settings: Settings) -> WFamily:
    if args.w_files:
        return WFamily.from_complexes([load_complex(Path(f)) for f in args.w_files], names=args.w_files)
    return default_family(tower, settings)


def cmd_check(args, out: Output, settings: Settings) -> int:
    tower = parse_tower(args.tower)
    spec = LineSpec(m=args.m, b=args.b, r=args.r)
    convention = settings.connectivity_convention
    if args.cond == 1:
        report = check_cond1(tower, spec)
    elif args.cond == 2:
        report = check_cond2(tower, spec)
    elif args.cond == 3:
        report = check_cond3(tower, spec, _family(tower, args, settings), convention)
    else:
        report = check_cond4(tower, spec, _family(tower, args, settings).bases(), convention)
    return out.report(report)


def cmd_min_intercept(args, out: Output, settings: Settings) -> int:
    beta = min_intercept(parse_tower(args.tower), args.m, args.r, Flavor(args.which))
    if out.as_json:
        out.document({"m": str(args.m), "r": args.r, "which": args.which, "beta": None if beta is None else str(beta)})
    else:
        out.line(f"{args.which}_{args.r} vanishes for s > {args.m}(t-s) + {_intercept(beta)}")
    return ExitStatus.success


def cmd_lemma(args, out: Output, settings: Settings) -> int:
    tower = parse_tower(args.tower)
    lemma = verify_lemma(
        tower, args.m, default_family(tower, settings), args.rmax, convention=settings.connectivity_convention
    )
    if out.as_json:
        out.stream.write(lemma.json(sort_keys=True, indent=2) + "\n")
        return _status(lemma.holds)
    for report in lemma.reports:
        premise = report.premises[0] if report.premises else None
        out.line(
            f"{report.condition} premise b > {_intercept(premise.b if premise else None)}"
            f" => {report.conclusion}: {out.verdict(report.holds)}"
        )
        for w in report.witnesses:
            member = f" W={w.family_member}" if w.family_member else ""
            out.line(f"  s={w.s} t={w.t} dim={w.dim}{member}")
    out.line("case r statement proof")
    for case, r, statement, proof in lemma.variant_table():
        out.line(f"{case} {r} {out.verdict(statement)} {out.verdict(proof)}")
    return _status(lemma.holds)


def cmd_generic(args, out: Output, settings: Settings) -> int:
    if args.kind == "cofiber":
        return out.report(verify_generic_cofiber(parse_map(args.map), args.m, args.rmax))
    spec = LineSpec(m=args.m, b=args.b, r=args.r)
    return out.report(verify_generic_retract(parse_map(args.i), parse_map(args.j), spec))


def cmd_ghost(args, out: Output, settings: Settings) -> int:
    return out.report(verify_ghost_corollary(parse_tower(args.tower), args.r, args.b))


def cmd_fuzz(args, out: Output, settings: Settings) -> int:
    overrides = {} if args.p is None else {"p": args.p}
    params = GeneratorParams.from_settings(settings, **overrides)
    ms = args.ms or list(CORPUS_SLOPES)
    corpus = run_corpus(
        range(args.seed, args.seed + args.count),
        params,
        ms,
        r_max=args.rmax,
        generic=args.generic,
        settings=settings,
        jobs=args.jobs or settings.jobs,
    )
    if out.as_json:
        out.stream.write(corpus.json(sort_keys=True, indent=2) + "\n")
        return _status(corpus.holds)
    for instance in corpus.instances:
        out.line(
            f"seed {instance.seed}: S={instance.S} generators={instance.generators} {out.verdict(instance.holds)}"
        )
        for row in instance.oracle_mismatches:
            out.line("  oracle mismatch r={} s={} t={}: {} != {}".format(*row))
        for report in instance.lemma_counterexamples + instance.cofiber_counterexamples:
            out.line(f"  {report.condition} fails at {report.conclusion}")
    for key, value in corpus.summary().items():
        out.line(f"{key}: {value}")
    return _status(corpus.holds)


def cmd_chart(args, out: Output, settings: Settings) -> int:
    e = page(parse_tower(args.tower), args.r)
    line = None
    if args.m is not None and args.b is not None:
        line = LineSpec(m=args.m, b=args.b, r=args.r)
    out.stream.write(emit_chart(e, args.format, line).decode())
    return ExitStatus.success


def cmd_version(args, out: Output, settings: Settings) -> int:
    out.line(VERSION)
    return ExitStatus.success


COMMANDS = {
    "page": cmd_page,
    "check": cmd_check,
    "min-intercept": cmd_min_intercept,
    "lemma": cmd_lemma,
    "generic": cmd_generic,
    "ghost": cmd_ghost,
    "fuzz": cmd_fuzz,
    "chart": cmd_chart,
    "version": cmd_version,
}


def run(
    argv: Sequence[str],
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
    settings: Optional[Settings] = None,
) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(list(argv))
    except SystemExit as e:
        # argparse has already printed usage; --help exits 0.
        return int(e.code or 0) and INPUT_ERROR

    settings = settings or get_settings()
    if args.verbose:
        level = logging.DEBUG if args.verbose > 1 else logging.INFO
    else:
        level = getattr(logging, settings.log_level)
    logging.basicConfig(format=LOG_FORMAT, level=level, stream=stderr)

    color = args.color if args.color is not None else stdout.isatty()
    out = Output(stdout, args.json, bool(color) and not args.json)
    try:
        return int(COMMANDS[args.command](args, out, settings))
    except (ValidationError, VlinesError, OSError) as e:
        logger.debug("input error", exc_info=True)
        stderr.write(f"vlines: error: {e}\n")
        return INPUT_ERROR


def main(*args: List[str]) -> None:
    sys.exit(run(sys.argv[1:]))
