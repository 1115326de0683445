"""Command-line interface: ``diffspectrum <command> [options]``.

Commands:
    spectrum     differential spectrum of x^(p^n - 3) (closed, brute, both, corollary)
    gamma        Gamma_{p,n}
    gamma-table  Gamma_{p,1} for every prime 5 <= p <= --max-p (CSV)
    charsum      Gamma, lambda1 or lambda2 by the closed form or by enumeration
    verify       full cross-check battery for one field
    sweep        verify every odd prime power up to --max-order

Exit codes: 0 ok, 2 invalid input, 3 cap exceeded, 4 mismatch, 5 internal error.
Reports go to stdout; errors and logs go to stderr.
"""

import argparse
import sys
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from pydantic import ValidationError

from DiffSpectrum_Py.charsum import charsum, gamma, gamma_table
from DiffSpectrum_Py.closedform import closed_spectrum, corollary_spectrum, validate_pair
from DiffSpectrum_Py.config import RuntimeConfig
from DiffSpectrum_Py.constants import (
    CharSumKind,
    ExitCode,
    FieldLimits,
    Method,
    OutputConstants,
    OutputFormat,
    SpectrumConstants,
    SweepDefaults,
)
from DiffSpectrum_Py.debug_mode import DebugComponent, debug_mode, enable_debug, parse_level
from DiffSpectrum_Py.exceptions import (
    CapExceededError,
    DiffSpectrumError,
    InvalidInputError,
    MismatchError,
)
from DiffSpectrum_Py.field import FieldCtx
from DiffSpectrum_Py.models import OutputEnvelope, SpectrumReport, VerificationReport
from DiffSpectrum_Py.oracle import brute_spectrum
from DiffSpectrum_Py.utils import Stopwatch
from DiffSpectrum_Py.verification import sweep, verify_field

OMEGA_COLUMNS = ",".join(f"omega{i}" for i in range(SpectrumConstants.CANONICAL_LENGTH))


@dataclass
class CommandOutput:
    """What a command produced, in every output format."""

    params: dict[str, int | str | None]
    result: Any
    pretty: list[str]
    csv: list[str]
    default_format: OutputFormat = OutputFormat.JSON
    exit_code: ExitCode = ExitCode.OK
    notes: list[str] = field(default_factory=list)

    def flag(self, error: DiffSpectrumError) -> None:
        """Keep the output but report error on stderr and in the exit code."""
        self.exit_code = exit_code_for(error)
        self.notes.append(str(error))


Handler = Callable[[argparse.Namespace, RuntimeConfig], CommandOutput]


def exit_code_for(error: Exception) -> ExitCode:
    """Map an exception to the CLI exit code of its category."""
    if isinstance(error, InvalidInputError):
        return ExitCode.INVALID_INPUT
    if isinstance(error, CapExceededError):
        return ExitCode.CAP_EXCEEDED
    if isinstance(error, MismatchError):
        return ExitCode.MISMATCH
    return ExitCode.INTERNAL


def _spectrum_line(report: SpectrumReport) -> str:
    omega = ", ".join(str(w) for w in report.spectrum.omega)
    head = f"p={report.p} n={report.n} {report.method.value}"
    return f"{head} [{omega}] delta={report.spectrum.delta}"


def _spectrum_row(report: SpectrumReport) -> str:
    padded = report.spectrum.padded(SpectrumConstants.CANONICAL_LENGTH)
    omega = ",".join(str(w) for w in padded.omega)
    return f"{report.p},{report.n},{report.method.value},{omega}"


def cmd_spectrum(args: argparse.Namespace, config: RuntimeConfig) -> CommandOutput:
    """Compute the spectrum; with ``both`` compare closed and brute results."""
    p, n = args.p, args.n
    method = Method(args.method)
    validate_pair(p, n)
    reports: list[SpectrumReport] = []
    if method in (Method.CLOSED, Method.BOTH):
        reports.append(closed_spectrum(p, n))
    if method in (Method.BRUTE, Method.BOTH):
        ctx = FieldCtx.build(p, n, cap=config.brute_cap, prime_cap=config.prime_cap)
        reports.append(brute_spectrum(ctx, ctx.order - 3, config))
    if method == Method.COROLLARY:
        reports.append(corollary_spectrum(p, n))

    params: dict[str, int | str | None] = {"p": p, "n": n, "d": str(p**n - 3)}
    output = CommandOutput(
        params=params,
        result=reports[0].to_result(),
        pretty=[_spectrum_line(r) for r in reports],
        csv=[f"p,n,method,{OMEGA_COLUMNS}", *(_spectrum_row(r) for r in reports)],
    )
    if method == Method.BOTH:
        closed, brute = reports
        match = closed.spectrum.same_as(brute.spectrum)
        output.result = {"closed": closed.to_result(), "brute": brute.to_result(), "match": match}
        try:
            closed.require_same(brute)
        except MismatchError as e:
            output.flag(e)
    return output


def cmd_gamma(args: argparse.Namespace, config: RuntimeConfig) -> CommandOutput:
    """Gamma_{p,n} from the point count and recurrence."""
    value = gamma(args.p, args.n)
    return CommandOutput(
        params={"p": args.p, "n": args.n},
        result={"gamma": str(value)},
        pretty=[str(value)],
        csv=["p,n,gamma", f"{args.p},{args.n},{value}"],
        default_format=OutputFormat.PRETTY,
    )


def cmd_gamma_table(args: argparse.Namespace, config: RuntimeConfig) -> CommandOutput:
    """Gamma_{p,1} for all primes up to --max-p."""
    if args.max_p < FieldLimits.CURVE_MIN_PRIME:
        raise InvalidInputError("--max-p must be at least 5", context={"max_p": args.max_p})
    rows = gamma_table(args.max_p)
    return CommandOutput(
        params={"max_p": args.max_p},
        result={"rows": [{"p": p, "gamma_p_1": a} for p, a in rows]},
        pretty=[f"{p:>6} {a:>6}" for p, a in rows],
        csv=[OutputConstants.GAMMA_TABLE_HEADER, *(f"{p},{a}" for p, a in rows)],
        default_format=OutputFormat.CSV,
    )


def cmd_charsum(args: argparse.Namespace, config: RuntimeConfig) -> CommandOutput:
    """One character sum, closed or by enumeration."""
    value = charsum(args.p, args.n, CharSumKind(args.which), Method(args.method), config)
    return CommandOutput(
        params={"p": args.p, "n": args.n, "which": args.which, "method": args.method},
        result={"which": value.which.value, "value": str(value.value)},
        pretty=[str(value.value)],
        csv=[
            "p,n,which,method,value",
            f"{args.p},{args.n},{args.which},{args.method},{value.value}",
        ],
        default_format=OutputFormat.PRETTY,
    )


def _verification_rows(report: VerificationReport) -> list[str]:
    prefix = f"{report.p},{report.n}"
    return [f"{prefix},{c.name},{c.passed},{c.expected},{c.actual}" for c in report.checks]


def cmd_verify(args: argparse.Namespace, config: RuntimeConfig) -> CommandOutput:
    """Every cross-check for one field; exit 4 if any fails."""
    report = verify_field(args.p, args.n, config, args.samples, args.seed)
    pretty = [report.summary_line()]
    pretty += [f"  {c.name}: expected {c.expected}, got {c.actual}" for c in report.failures]
    output = CommandOutput(
        params={"p": args.p, "n": args.n, "samples": args.samples, "seed": args.seed},
        result=report.to_result(),
        pretty=pretty,
        csv=["p,n,check,passed,expected,actual", *_verification_rows(report)],
    )
    try:
        report.raise_for_failures()
    except MismatchError as e:
        output.flag(e)
    return output


def cmd_sweep(args: argparse.Namespace, config: RuntimeConfig) -> CommandOutput:
    """Verify all odd prime powers up to --max-order."""
    reports = list(sweep(args.max_order, config, args.samples, args.seed))
    failed = [r for r in reports if not r.passed]
    output = CommandOutput(
        params={"max_order": args.max_order, "samples": args.samples, "seed": args.seed},
        result={"passed": not failed, "fields": [r.to_result() for r in reports]},
        pretty=[
            *(r.summary_line() for r in reports),
            f"fields={len(reports)} failed={len(failed)}",
        ],
        csv=["p,n,q,checks,passed"]
        + [f"{r.p},{r.n},{r.p**r.n},{len(r.checks)},{r.passed}" for r in reports],
        default_format=OutputFormat.PRETTY,
    )
    for report in failed:
        try:
            report.raise_for_failures()
        except MismatchError as e:
            output.flag(e)
    return output


HANDLERS: dict[str, Handler] = {
    "spectrum": cmd_spectrum,
    "gamma": cmd_gamma,
    "gamma-table": cmd_gamma_table,
    "charsum": cmd_charsum,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
}


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=[f.value for f in OutputFormat], default=None)
    common.add_argument(
        "--debug", metavar="LEVEL", help="OFF, ERROR, WARNING, INFO, DEBUG or TRACE"
    )
    common.add_argument("--brute-cap", dest="brute_cap", type=int, help="largest p^n to enumerate")
    common.add_argument("--workers", type=int, help="oracle worker threads")
    common.add_argument("--quadruple-cap", dest="quadruple_cap", type=int)
    common.add_argument(
        "--no-timing", dest="no_timing", action="store_true", help="report timing_ms as 0"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per operation."""
    parser = argparse.ArgumentParser(
        prog="diffspectrum",
        description="Differential spectrum of x^(p^n - 3) over F_{p^n}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options()

    spectrum = sub.add_parser("spectrum", parents=[common], help="compute a spectrum")
    spectrum.add_argument("--p", type=int, required=True)
    spectrum.add_argument("--n", type=int, required=True)
    spectrum.add_argument(
        "--method", choices=[m.value for m in Method], default=Method.CLOSED.value
    )

    gamma_cmd = sub.add_parser("gamma", parents=[common], help="character sum Gamma_{p,n}")
    gamma_cmd.add_argument("--p", type=int, required=True)
    gamma_cmd.add_argument("--n", type=int, default=1)

    table = sub.add_parser("gamma-table", parents=[common], help="Gamma_{p,1} table")
    table.add_argument("--max-p", dest="max_p", type=int, default=1000)

    sums = sub.add_parser("charsum", parents=[common], help="gamma, lambda1 or lambda2")
    sums.add_argument("--p", type=int, required=True)
    sums.add_argument("--n", type=int, required=True)
    sums.add_argument("--which", choices=[k.value for k in CharSumKind], required=True)
    sums.add_argument(
        "--method", choices=[Method.CLOSED.value, Method.BRUTE.value], default=Method.CLOSED.value
    )

    verify = sub.add_parser("verify", parents=[common], help="cross-check one field")
    verify.add_argument("--p", type=int, required=True)
    verify.add_argument("--n", type=int, required=True)
    verify.add_argument("--samples", type=int, default=SweepDefaults.VERIFY_SAMPLES)
    verify.add_argument("--seed", type=int, default=SweepDefaults.SEED)

    sweep_cmd = sub.add_parser("sweep", parents=[common], help="cross-check many fields")
    sweep_cmd.add_argument(
        "--max-order", dest="max_order", type=int, default=SweepDefaults.MAX_ORDER
    )
    sweep_cmd.add_argument("--samples", type=int, default=SweepDefaults.SWEEP_SAMPLES)
    sweep_cmd.add_argument("--seed", type=int, default=SweepDefaults.SEED)
    return parser


def render(output: CommandOutput, command: str, fmt: OutputFormat, timing_ms: int) -> str:
    """Render a command output in the requested format."""
    if fmt == OutputFormat.JSON:
        envelope = OutputEnvelope(
            command=command, params=output.params, result=output.result, timing_ms=timing_ms
        )
        return envelope.to_json()
    lines = output.pretty if fmt == OutputFormat.PRETTY else output.csv
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code."""
    args = build_parser().parse_args(argv)
    try:
        if args.debug:
            enable_debug(parse_level(args.debug))
        config = RuntimeConfig.from_env().with_overrides(
            brute_cap=args.brute_cap, workers=args.workers, quadruple_cap=args.quadruple_cap
        )
        debug_mode.debug("Running command", DebugComponent.CLI, command=args.command)
        with Stopwatch() as watch:
            output = HANDLERS[args.command](args, config)
    except DiffSpectrumError as e:
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)
    except ValidationError as e:
        print(f"error: internal consistency check failed: {e}", file=sys.stderr)
        return ExitCode.INTERNAL

    fmt = OutputFormat(args.format) if args.format else output.default_format
    print(render(output, args.command, fmt, 0 if args.no_timing else watch.elapsed_ms))
    for note in output.notes:
        print(f"error: {note}", file=sys.stderr)
    return output.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
