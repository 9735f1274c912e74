"""Command-line front end: ``python -m ri_tails <command> ...``.

Exit status is 0 when every asserted check passes, 1 when a check reports
a violation, and 2 on usage, parse or numerical errors.
"""

import argparse
import io
import logging
import sys
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence

import numpy as np

from .config import Settings
from .exceptions import ParseError, RiTailsError, UsageError
from .numerics import lin_grid, log_grid
from .random_variables import AnalyticRV, DiscreteRV, RandomVariable
from .tail_calculus import Provenance

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_ERROR = 2

COMMANDS = ("char", "fundamental", "regularity", "associate", "sum", "witness", "mc", "ci", "resonant")

DEFAULT_T_GRID = {
    "char": "2:1e6:50",
    "regularity": "2:1e6:200",
    "associate": "2:1e6:50",
    "sum": "2:1e6:200",
    "mc": "2:1e3:30",
    "resonant": "2:1e6:200",
}
DEFAULT_DELTA_GRID = "1e-6:1:50"


@dataclass(frozen=True)
class GridSpec:
    """min:max:points with log spacing unless ``spacing`` is lin."""

    lo: float
    hi: float
    points: int
    spacing: str = "log"

    def to_array(self) -> np.ndarray:
        if self.spacing == "lin":
            return lin_grid(self.lo, self.hi, self.points)
        return log_grid(self.lo, self.hi, self.points)

    def describe(self) -> Dict:
        return {"min": self.lo, "max": self.hi, "points": self.points, "spacing": self.spacing}


@dataclass
class RunConfig:
    command: str
    space_specs: List[str] = field(default_factory=list)
    t_grid: Optional[GridSpec] = None
    delta_grid: Optional[GridSpec] = None
    n: int = 1_000_000
    seed: int = 0
    output_format: str = "json"
    output_path: Optional[str] = None
    dual_spec: Optional[str] = None
    rv_spec: Optional[str] = None
    at: float = 10.0
    sigma: float = 1.0
    wn: float = 1.0
    alpha: float = 0.05
    simulate: Optional[int] = None
    check_equivalence: bool = False
    batch_csv: Optional[str] = None
    workers: int = 1

    def describe(self) -> Dict:
        echo = {
            "command": self.command,
            "spaces": list(self.space_specs),
            "t_grid": self.t_grid.describe() if self.t_grid else None,
            "delta_grid": self.delta_grid.describe() if self.delta_grid else None,
            "format": self.output_format,
        }
        if self.command in ("mc", "ci"):
            echo.update(n=self.n, seed=self.seed)
        if self.command in ("mc", "witness"):
            echo.update(at=self.at, rv=self.rv_spec)
        if self.command == "ci":
            echo.update(sigma=self.sigma, wn=self.wn, alpha=self.alpha, simulate=self.simulate)
        if self.command == "associate":
            echo.update(dual=self.dual_spec)
        if self.command == "sum":
            echo.update(equivalence=self.check_equivalence)
        return echo


def parse_grid(text: str, flag: str = "--t") -> GridSpec:
    """Parse ``min:max:points[:lin]``.

    Raises:
        ParseError: Naming the flag and the offending text
    """
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ParseError(f"{flag}: expected min:max:points[:lin], got {text!r}", token=text)
    spacing = "log"
    if len(parts) == 4:
        if parts[3] not in ("lin", "log"):
            raise ParseError(f"{flag}: unknown spacing {parts[3]!r}", token=parts[3])
        spacing = parts[3]
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ParseError(f"{flag}: grid bounds must be numbers, got {text!r}", token=text)
    try:
        points = int(parts[2])
    except ValueError:
        raise ParseError(f"{flag}: point count must be an integer, got {parts[2]!r}", token=parts[2])
    if points < 2:
        raise ParseError(f"{flag}: need at least 2 points, got {points}", token=parts[2])
    if not 0 < lo < hi < float("inf"):
        raise ParseError(f"{flag}: need 0 < min < max < inf, got {text!r}", token=text)
    return GridSpec(lo=lo, hi=hi, points=points, spacing=spacing)


def parse_rv_spec(text: str) -> RandomVariable:
    """Parse ``atoms:v@p,...``, ``power:alpha=a[,scale=s]`` or ``const:c=v``.

    Raises:
        ParseError: Naming the offending token
    """
    kind, _, body = text.strip().partition(":")
    kind = kind.strip().lower()
    try:
        if kind == "atoms":
            pairs = []
            for token in body.split(","):
                value, sep, prob = token.partition("@")
                if not sep:
                    raise ParseError(f"expected value@probability, got {token!r}", token=token)
                pairs.append((float(value), float(prob)))
            return DiscreteRV.from_pairs(pairs)
        params = {}
        for token in filter(None, (t.strip() for t in body.split(","))):
            key, sep, value = token.partition("=")
            if not sep:
                raise ParseError(f"expected key=value, got {token!r}", token=token)
            params[key.strip()] = float(value)
        if kind == "power":
            if "alpha" not in params:
                raise ParseError(f"power random variable needs alpha in {text!r}", token=text)
            return AnalyticRV(alpha=params["alpha"], scale=params.get("scale", 1.0))
        if kind == "const":
            if "c" not in params:
                raise ParseError(f"constant random variable needs c in {text!r}", token=text)
            return DiscreteRV.constant(params["c"])
    except ValueError as e:
        raise ParseError(f"malformed number in {text!r}: {e}", token=text)
    except RiTailsError as e:
        if isinstance(e, ParseError):
            raise
        raise ParseError(f"{text!r}: {e}", token=text)
    raise ParseError(f"unknown random variable kind {kind!r}", token=kind)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ri_tails",
        description="Tchebychev characteristics of rearrangement-invariant spaces.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, default_format: str) -> None:
        p.add_argument("--format", choices=("csv", "json"), default=default_format, dest="output_format",
                       help=f"Output format (default: {default_format}).")
        p.add_argument("--output", dest="output_path", help="Write to this path instead of standard output.")

    p = sub.add_parser("char", help="Tabulate the characteristic. CSV columns: t, T.")
    p.add_argument("--space", required=True)
    p.add_argument("--t", dest="t_grid", default=DEFAULT_T_GRID["char"])
    common(p, "csv")

    p = sub.add_parser("fundamental", help="Tabulate the fundamental function. CSV columns: delta, phi.")
    p.add_argument("--space", required=True)
    p.add_argument("--delta", dest="delta_grid", default=DEFAULT_DELTA_GRID)
    common(p, "csv")

    p = sub.add_parser("regularity", help="Regularity ratio rho(t). CSV columns: t, lhs, rhs, ratio.")
    p.add_argument("--space", required=True)
    p.add_argument("--t", dest="t_grid", default=DEFAULT_T_GRID["regularity"])
    common(p, "json")

    p = sub.add_parser("associate", help="Associate product identities. CSV columns: t, lhs, rhs, ratio.")
    p.add_argument("--space", required=True)
    p.add_argument("--dual", help="Associate space; defaults to the conjugate exponent or Young function.")
    p.add_argument("--t", dest="t_grid", default=DEFAULT_T_GRID["associate"])
    p.add_argument("--delta", dest="delta_grid", default=DEFAULT_DELTA_GRID)
    common(p, "json")

    p = sub.add_parser("sum", help="Direct-sum sandwich max <= T_H <= vee. CSV columns: t, lhs, rhs, ratio.")
    p.add_argument("--space", action="append", required=True, help="Give exactly twice.")
    p.add_argument("--t", dest="t_grid", default=DEFAULT_T_GRID["sum"])
    p.add_argument("--equivalence", action="store_true", dest="check_equivalence",
                   help="Also check that vee and max are equivalent tails.")
    common(p, "json")

    p = sub.add_parser("witness", help="Extremal two-point witness at --at.")
    p.add_argument("--space", required=True)
    p.add_argument("--at", type=float, default=10.0)
    common(p, "json")

    p = sub.add_parser("mc", help="Monte-Carlo check of empirical tails. CSV columns: t, lhs, rhs, ratio.")
    p.add_argument("--space", required=True)
    p.add_argument("--rv", dest="rv_spec", help="Random variable; defaults to the space's witness at --at.")
    p.add_argument("--at", type=float, default=10.0)
    p.add_argument("--t", dest="t_grid", default=DEFAULT_T_GRID["mc"])
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--batch-csv", dest="batch_csv", help="Also write the sampled values as a single-column CSV.")
    common(p, "json")

    p = sub.add_parser("ci", help="Confidence radius sigma T^-1(alpha) / wn.")
    p.add_argument("--space", required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--wn", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--simulate", type=int, help="Also simulate coverage with this many samples.")
    p.add_argument("--seed", type=int, default=0)
    common(p, "csv")

    p = sub.add_parser("resonant", help="Universal C3/t bound. CSV columns: t, lhs, rhs, ratio.")
    p.add_argument("--space", required=True)
    p.add_argument("--t", dest="t_grid", default=DEFAULT_T_GRID["resonant"])
    common(p, "json")
    return parser


def config_from_args(args: argparse.Namespace, settings: Settings) -> RunConfig:
    spaces = args.space if isinstance(args.space, list) else [args.space]
    config = RunConfig(
        command=args.command,
        space_specs=spaces,
        output_format=args.output_format,
        output_path=args.output_path,
        workers=settings.workers,
    )
    if getattr(args, "t_grid", None):
        config.t_grid = parse_grid(args.t_grid, "--t")
    if getattr(args, "delta_grid", None):
        config.delta_grid = parse_grid(args.delta_grid, "--delta")
    for name in ("n", "at", "sigma", "wn", "alpha", "simulate", "check_equivalence", "batch_csv", "rv_spec"):
        if hasattr(args, name):
            setattr(config, name, getattr(args, name))
    if hasattr(args, "dual"):
        config.dual_spec = args.dual
    if hasattr(args, "seed"):
        config.seed = args.seed if settings.seed_override is None else settings.seed_override
    if config.command == "sum" and len(config.space_specs) != 2:
        raise UsageError(f"--space: sum needs exactly two spaces, got {len(config.space_specs)}")
    if config.n < 1:
        raise UsageError(f"--n must be at least 1, got {config.n}")
    return config


def _space(spec: str):
    from .spaces.factory import parse_space_spec

    try:
        return parse_space_spec(spec)
    except ParseError as e:
        raise ParseError(f"--space: {e}", token=e.token)


def _default_dual(space):
    from .spaces.functions import conjugate_young
    from .spaces.lp import LpSpace
    from .spaces.orlicz import OrliczSpace

    if isinstance(space, LpSpace) and 1.0 < space.p < float("inf"):
        return LpSpace(space.p / (space.p - 1.0))
    if isinstance(space, OrliczSpace):
        return OrliczSpace(conjugate_young(space.N))
    raise UsageError(f"--dual: no default associate space for {space.label}")


def _emit_report(config: RunConfig, report, stream) -> int:
    from . import reporting

    if config.output_format == "csv":
        header = (report.grid_kind,) + reporting.REPORT_COLUMNS[1:]
        reporting.write_csv(header, reporting.report_rows(report), stream)
    else:
        doc = reporting.document(config.command, config.describe(), report.verdict.value,
                                 report=reporting.report_to_dict(report))
        reporting.write_json(doc, stream)
    return EXIT_OK if report.passed else EXIT_VIOLATED


def _emit_table(config: RunConfig, header: Sequence[str], rows: List[List[float]], stream) -> int:
    from . import reporting

    if config.output_format == "csv":
        reporting.write_csv(header, rows, stream)
    else:
        table = [dict(zip(header, row)) for row in rows]
        reporting.write_json(reporting.document(config.command, config.describe(), None, rows=table), stream)
    return EXIT_OK


def run(config: RunConfig, stream=None) -> int:
    """Dispatch one command and write its output.

    Returns:
        Exit status: 0 on pass, 1 on a violated check
    """
    from . import diagnostics, montecarlo, reporting, witness

    stream = stream or sys.stdout
    started = time.perf_counter()
    command = config.command
    space = _space(config.space_specs[0])

    if command == "char":
        grid = config.t_grid.to_array()
        status = _emit_table(config, ("t", "T"), [[t, v] for t, v in zip(grid, space.characteristic().evaluate(grid))], stream)
    elif command == "fundamental":
        deltas = config.delta_grid.to_array()
        phi = space.fundamental()
        if phi.provenance == Provenance.ASYMPTOTIC and deltas[-1] > phi.delta_max:
            logger.warning("%s is monotone only up to delta = %.6g; larger deltas are clamped there",
                           phi.label, phi.delta_max)
        status = _emit_table(config, ("delta", "phi"), [[d, phi.clamped(float(d))] for d in deltas], stream)
    elif command == "regularity":
        report = diagnostics.regularity_report(space, config.t_grid.to_array(), workers=config.workers)
        status = _emit_report(config, report, stream)
    elif command == "associate":
        dual = _space(config.dual_spec) if config.dual_spec else _default_dual(space)
        report = diagnostics.associate_product(space, dual, config.t_grid.to_array(),
                                               config.delta_grid.to_array(), workers=config.workers)
        status = _emit_report(config, report, stream)
    elif command == "sum":
        other = _space(config.space_specs[1])
        report = diagnostics.sum_characteristic_bounds(space.characteristic(), other.characteristic(),
                                                       config.t_grid.to_array(),
                                                       check_equivalence=config.check_equivalence,
                                                       workers=config.workers)
        status = _emit_report(config, report, stream)
    elif command == "witness":
        wr = witness.witness_for(space, config.at)
        saturated = witness.verify_saturation(space, wr)
        verdict = diagnostics.Verdict.EXACT if saturated else diagnostics.Verdict.VIOLATED
        doc = reporting.document(command, config.describe(), verdict.value, report=reporting.witness_to_dict(wr))
        reporting.write_json(doc, stream)
        status = EXIT_OK if saturated else EXIT_VIOLATED
    elif command == "mc":
        rv = parse_rv_spec(config.rv_spec) if config.rv_spec else witness.witness_for(space, config.at).rv
        report = montecarlo.verify_tail_bound(space, rv, config.t_grid.to_array(), config.n, config.seed,
                                              workers=config.workers)
        if config.batch_csv:
            batch = montecarlo.sample(rv, config.n, config.seed, workers=config.workers)
            try:
                montecarlo.write_batch_csv(batch, config.batch_csv)
            except OSError as e:
                raise UsageError(f"--batch-csv: cannot write {config.batch_csv}: {e.strerror or e}") from e
        status = _emit_report(config, report, stream)
    elif command == "ci":
        req = montecarlo.CiRequest(sigma=config.sigma, wn=config.wn, alpha=config.alpha, space=space)
        radius = reporting.round_significant(montecarlo.confidence_interval(req))
        status = EXIT_OK
        if config.simulate:
            coverage = montecarlo.simulate_coverage(req, config.simulate, config.seed, workers=config.workers)
            status = EXIT_OK if coverage.passed else EXIT_VIOLATED
        else:
            coverage = None
        if config.output_format == "json":
            doc = reporting.document(command, config.describe(),
                                     coverage.verdict.value if coverage else None,
                                     rows=[{"radius": radius}],
                                     report=reporting.report_to_dict(coverage) if coverage else None)
            reporting.write_json(doc, stream)
        else:
            stream.write(reporting.format_number(radius) + "\n")
    elif command == "resonant":
        report = diagnostics.resonant_bound(space, config.t_grid.to_array())
        status = _emit_report(config, report, stream)
    else:
        raise UsageError(f"unknown command {command!r}")

    logger.debug("%s finished in %.3f s", command, time.perf_counter() - started)
    return status


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = Settings.from_env()
    except RiTailsError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR

    level = settings.log_level
    if args.verbose == 1:
        level = "INFO"
    elif args.verbose >= 2:
        level = "DEBUG"
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s", stream=sys.stderr)

    try:
        config = config_from_args(args, settings)
        if not config.output_path:
            return run(config)
        # the file is only created once the run has succeeded
        buffer = io.StringIO()
        status = run(config, buffer)
        try:
            with open(config.output_path, "w", newline="", encoding="utf-8") as f:
                f.write(buffer.getvalue())
        except OSError as e:
            print(f"error: --output: cannot write {config.output_path}: {e.strerror or e}", file=sys.stderr)
            return EXIT_ERROR
        return status
    except ParseError as e:
        print(f"error: {e} (token: {e.token})", file=sys.stderr)
        return EXIT_ERROR
    except RiTailsError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR
