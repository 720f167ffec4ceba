"""
Command-line interface: ``selmergen generate | verify | validate | inspect``.

Exit codes: 0 success, 1 validation or verification failure, 2 trial or
stage budget exhausted, 3 unreadable or malformed file, 4 usage error
(including a prime beyond the counting bound without ``--counter-cmd``).
"""

import argparse
import logging
import shlex
import sys
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError

from selmergen.arithmetic.field import PrimeModulus
from selmergen.arithmetic.hash_stream import SeedContext
from selmergen.arithmetic.integers import Factorization
from selmergen.curves.counting import OrderData, SubprocessCounter
from selmergen.curves.validate import ValidationReport
from selmergen.generation.pipeline import generate, validate_external
from selmergen.generation.verify import verify
from selmergen.helpers.errors import (CountingUnavailable, MaxTrialsExceeded,
                                      ParseError, SelmerGenError,
                                      SingularInput, StageBudgetExceeded)
from selmergen.helpers.helper_functions import (canonical_json, check_sigma_hex,
                                                load_json_strict, to_hex)
from selmergen.main import DEFAULT_DS
from selmergen.models.config import GenerationConfig, GenerationSettings
from selmergen.models.policy import Policy
from selmergen.models.transcript import Transcript, parse, serialize

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BUDGET = 2
EXIT_IO = 3
EXIT_USAGE = 4


class _Parser(argparse.ArgumentParser):

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _integer(text: str) -> int:
    """Decimal, or hexadecimal with a 0x prefix."""
    try:
        return int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def _seed(text: str) -> str:
    try:
        return check_sigma_hex(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def _ell_set(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma separated primes, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="selmergen",
                     description="Descent-based elliptic curve generation "
                                 "with auditable transcripts.")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("generate", help="generate a validated curve")
    gen.add_argument("--prime", type=_integer, required=True)
    gen.add_argument("--ds", default=DEFAULT_DS, help="domain separator")
    gen.add_argument("--seed", type=_seed, required=True,
                     help="32-byte seed as 64 lowercase hex characters")
    gen.add_argument("--policy", choices=["strict", "demo"])
    gen.add_argument("--max-trials", type=int)
    gen.add_argument("--ell-set", type=_ell_set)
    gen.add_argument("--search-bound", type=int,
                     help="abscissae drawn for the quartic F_p search")
    gen.add_argument("--cubic-search-bound", type=int)
    gen.add_argument("--cubic-invariants",
                     choices=["classical", "hash_placeholder"])
    gen.add_argument("--full-scan", action="store_true", default=None,
                     help="scan all of F_p (p < 2^20 only)")
    gen.add_argument("--config", type=Path,
                     help="JSON file overriding generation settings")
    gen.add_argument("--counter-cmd", help="external point counter")
    gen.add_argument("--out", type=Path, help="transcript file")
    gen.add_argument("--json", action="store_true",
                     help="print the summary as canonical JSON")

    ver = commands.add_parser("verify", help="re-derive a transcript")
    ver.add_argument("path", type=Path)
    ver.add_argument("--policy", choices=["strict", "demo"],
                     help="additionally validate under this profile")
    ver.add_argument("--counter-cmd")
    ver.add_argument("--json", action="store_true")

    val = commands.add_parser("validate", help="validate a given curve")
    val.add_argument("--prime", type=_integer, required=True)
    val.add_argument("--c4", type=_integer, required=True)
    val.add_argument("--c6", type=_integer, required=True)
    val.add_argument("--policy", choices=["strict", "demo"])
    val.add_argument("--counter-cmd")
    val.add_argument("--quiet", action="store_true",
                     help="omit the summary on stderr")

    ins = commands.add_parser("inspect", help="summarize a transcript")
    ins.add_argument("path", type=Path)
    ins.add_argument("--json", action="store_true")
    return parser


# %% summaries

def _factor_string(factors: Factorization) -> str:
    parts = [f"{q}^{e}" if e > 1 else str(q) for q, e in factors.factors]
    if factors.remaining != 1:
        parts.append(f"{factors.remaining} (unfactored)")
    return " * ".join(parts) or "1"


def summary_rows(p: int, c4: int, c6: int, delta: int, od: OrderData,
                 report: ValidationReport, k_max: int) -> list[tuple[str, str]]:
    """Rows of the human-readable summary, one per recorded quantity."""
    k = report.embedding_k_found
    return [
        ("Prime p", str(p)),
        ("c4", str(c4)),
        ("c6", str(c6)),
        ("Discriminant Delta", str(delta)),
        ("#E(F_p)", f"{od.n} = {_factor_string(od.factors)}"),
        ("Cofactor h", str(od.h)),
        ("Prime order r", str(od.r)),
        ("Trace t", str(od.trace)),
        ("#E'(F_p) (twist)", f"{od.n_twist} = "
                             f"{_factor_string(od.twist_factors)}"),
        ("Twist cofactor h'", str(od.h_twist)),
        ("CM discriminant D0", str(report.cm_fundamental_disc)),
        ("Embedding degree k",
         f"None detected (k <= {k_max})" if k is None else str(k)),
        ("Result", "accepted" if report.passed
         else "rejected: " + ", ".join(report.failed())),
    ]


def _print_rows(rows: list[tuple[str, str]], stream=None):
    width = max(len(name) for name, _ in rows)
    for name, value in rows:
        print(f"{name:<{width}}  {value}", file=stream or sys.stdout)


def _transcript_rows(tr: Transcript) -> list[tuple[str, str]]:
    rec = tr.reconciliation
    rows = summary_rows(tr.p, rec.c4, rec.c6, rec.delta, tr.order_data,
                        tr.validation, tr.policy.k_max)
    rows.insert(1, ("Domain separator", tr.ds))
    rows.insert(2, ("Trial index", str(tr.trial_index)))
    return rows


def _print_json(obj) -> None:
    sys.stdout.write(canonical_json(obj).decode("utf-8") + "\n")


def _counter(cmd: Optional[str]) -> Optional[SubprocessCounter]:
    return SubprocessCounter(shlex.split(cmd)) if cmd else None


# %% commands

def _settings(args) -> GenerationSettings:
    values = {}
    if args.config is not None:
        loaded = load_json_strict(args.config.read_bytes())
        if not isinstance(loaded, dict):
            raise ParseError(f"{args.config} does not hold a JSON object")
        values.update(loaded)
    flags = {"ell_set": args.ell_set,
             "quartic_search_bound": args.search_bound,
             "cubic_search_bound": args.cubic_search_bound,
             "cubic_invariants": args.cubic_invariants,
             "fp_full_scan": args.full_scan}
    values.update({k: v for k, v in flags.items() if v is not None})
    return GenerationSettings(**values)


def cmd_generate(args) -> int:
    modulus = PrimeModulus(p=args.prime)
    policy = Policy.for_modulus(modulus, args.policy)
    if args.max_trials is not None:
        policy = Policy.model_validate(
            policy.model_dump() | {"max_trials": args.max_trials})
    config = GenerationConfig(
        seed_context=SeedContext(modulus=modulus, ds=args.ds,
                                 sigma=bytes.fromhex(args.seed)),
        policy=policy, settings=_settings(args))

    tr = generate(config, _counter(args.counter_cmd))
    data = serialize(tr)
    if args.out is not None:
        args.out.write_bytes(data)
        summary_stream = sys.stdout
    else:
        sys.stdout.write(data.decode("utf-8") + "\n")
        summary_stream = sys.stderr
    if args.json and args.out is not None:
        _print_json(dict(_transcript_rows(tr)))
    else:
        _print_rows(_transcript_rows(tr), summary_stream)
    return EXIT_OK


def _read_transcript(path: Path) -> Transcript:
    return parse(path.read_bytes())


def cmd_verify(args) -> int:
    tr = _read_transcript(args.path)
    override = None
    if args.policy is not None:
        override = Policy.for_modulus(PrimeModulus(p=tr.p), args.policy)
    report = verify(tr, override, _counter(args.counter_cmd))

    if args.json:
        _print_json(report.model_dump(mode="json")
                    | {"agreement": report.agreement,
                       "passed": report.passed})
    else:
        for name in report.identity_failures:
            print(f"identity check failed: {name}")
        if report.divergence is not None:
            print(f"divergence at {report.divergence}")
        if report.override_report is not None \
                and not report.override_report.passed:
            print("override policy rejects: "
                  + ", ".join(report.override_report.failed()))
        if report.partial:
            print("re-derivation skipped: point counting unavailable")
        if report.passed:
            print("transcript verified: full agreement")

    if not report.agreement:
        return EXIT_FAILED
    return EXIT_USAGE if report.partial else EXIT_OK


def cmd_validate(args) -> int:
    policy = None
    if args.policy is not None:
        policy = Policy.for_modulus(PrimeModulus(p=args.prime), args.policy)
    try:
        curve, od, report = validate_external(
            args.prime, args.c4, args.c6, policy,
            _counter(args.counter_cmd))
    except SingularInput as e:
        print(f"SingularInput: {e}", file=sys.stderr)
        return EXIT_FAILED

    # report on stdout, human summary on stderr
    _print_json({"p": to_hex(curve.p), "c4": to_hex(curve.c4.value),
                 "c6": to_hex(curve.c6.value),
                 "delta": to_hex(curve.delta.value),
                 "validation": report.model_dump(mode="json"),
                 "passed": report.passed})
    if not args.quiet:
        k_max = (policy or Policy.for_modulus(curve.modulus)).k_max
        _print_rows(summary_rows(curve.p, curve.c4.value, curve.c6.value,
                                 curve.delta.value, od, report, k_max),
                    sys.stderr)
        for name, check in report.checks().items():
            status = "pass" if check.passed else "FAIL"
            print(f"  {name:<10} {status}  {check.reason}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_inspect(args) -> int:
    tr = _read_transcript(args.path)
    if args.json:
        sys.stdout.write(serialize(tr).decode("utf-8") + "\n")
    else:
        _print_rows(_transcript_rows(tr))
        for warning in tr.warnings:
            print(f"warning: {warning}")
    return EXIT_OK


COMMANDS = {"generate": cmd_generate, "verify": cmd_verify,
            "validate": cmd_validate, "inspect": cmd_inspect}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Parse arguments, run one command and map errors to exit codes.

    Parameters
    ----------
    argv : sequence of str, optional
        Arguments without the program name; defaults to ``sys.argv[1:]``.

    Returns
    -------
    int
        The exit code.

    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    logger.debug("running %s", args.command)
    try:
        return COMMANDS[args.command](args)
    except (MaxTrialsExceeded, StageBudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except ParseError as e:
        print(f"error: malformed input: {e}", file=sys.stderr)
        return EXIT_IO
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except CountingUnavailable as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, ValueError) as e:
        print(f"error: invalid arguments: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SelmerGenError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILED


def main():
    sys.exit(run())
