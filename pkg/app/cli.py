"""Command-line front end.

Exit codes: 0 on success, 1 when any verification fails, 2 on usage or parameter errors.
Results go to the output stream; errors and usage text go to the error stream.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import NoReturn, Optional, Sequence, TextIO

from pydantic import ValidationError

from app import codec, settings
from app.canonical_service import CanonicalService
from app.errors import FormatError, PascalFormsError
from app.matrix import reduce_mod
from app.models import CheckReport, CliConfig, IntMatrix
from app.pascal_service import FAMILIES, PascalService
from app.verify_service import CHECKS, IDENTITIES, OpenQuestionKind, VerificationService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    """Raised instead of argparse's own exit so the caller controls the streams."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pascal-forms", description="Jordan and Smith forms of Pascal-related matrices")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = commands.add_parser("gen", help="print a matrix family")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--r", type=int)
    gen.add_argument("--seq", help="literal like 0,1,1,1 or sets, delta, stirling-partition:r, ...")
    gen.add_argument("--format", choices=("csv", "text"), default="text")

    snf = commands.add_parser("snf", help="Smith normal form of a family member or a matrix file")
    source = snf.add_mutually_exclusive_group(required=True)
    source.add_argument("--family", choices=FAMILIES)
    source.add_argument("--input", dest="input_path", help="matrix file in CSV or structured text form")
    snf.add_argument("--n", type=int)
    snf.add_argument("--r", type=int)
    snf.add_argument("--seq")
    snf.add_argument("--certify", action="store_true", help="also print and re-check U and V")
    snf.add_argument("--format", choices=("csv", "text"), default="text", help="format of --input")

    jordan = commands.add_parser("jordan", help="Jordan blocks of P_n mod p")
    jordan.add_argument("--n", type=int, required=True)
    jordan.add_argument("--mod", dest="p", type=int, required=True)

    verify = commands.add_parser("verify", help="run identity and theorem checks")
    what = verify.add_mutually_exclusive_group(required=True)
    what.add_argument("--identity", choices=(*IDENTITIES, "all"))
    what.add_argument("--check", choices=CHECKS)
    size = verify.add_mutually_exclusive_group(required=True)
    size.add_argument("--n", type=int)
    size.add_argument("--n-max", dest="n_max", type=int)
    verify.add_argument("--r", type=int)
    verify.add_argument("--mod", dest="p", type=int)
    verify.add_argument("--trials", type=int, default=settings.CONVOLUTION_TRIALS)
    verify.add_argument("--seed", type=int, default=settings.RANDOM_SEED)

    oracle = commands.add_parser("oracle", help="both sums of the cycle-coloring identity and a brute-force count")
    oracle.add_argument("--n", type=int, required=True)
    oracle.add_argument("--m", type=int, required=True)
    oracle.add_argument("--r", type=int, required=True)

    explore = commands.add_parser("explore", help="is Q_n(c) equivalent to its diagonal for a Stirling column c")
    explore.add_argument("--kind", required=True, choices=("stirling-cycle", "stirling-partition"))
    explore.add_argument("--r", type=int, required=True)
    explore.add_argument("--n-max", dest="n_max", type=int, required=True)
    return parser


def parse_config(argv: Sequence[str]) -> CliConfig:
    namespace = build_parser().parse_args(list(argv))
    fields = {key: value for key, value in vars(namespace).items() if value is not None}
    return CliConfig(**fields)


def _write(out: TextIO, text: str) -> None:
    out.write(text + "\n")


def _require(value: Optional[int], flag: str) -> int:
    if value is None:
        raise UsageError(f"{flag} is required here")
    return value


def _family_matrix(config: CliConfig) -> IntMatrix:
    n = _require(config.n, "--n")
    seq = codec.parse_sequence(config.seq, n) if config.seq is not None else None
    return PascalService.family(config.family or "", n, config.r, seq)


def exit_code_for(reports: Sequence[CheckReport]) -> int:
    return EXIT_OK if all(report.passed for report in reports) else EXIT_FAILED


def _emit_reports(reports: Sequence[CheckReport], out: TextIO) -> int:
    for report in reports:
        _write(out, codec.format_report(report))
    return exit_code_for(reports)


def _gen(config: CliConfig, out: TextIO) -> int:
    _write(out, codec.format_matrix(_family_matrix(config), config.format))
    return EXIT_OK


def _snf(config: CliConfig, out: TextIO) -> int:
    if config.input_path is not None:
        try:
            text = Path(config.input_path).read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            raise FormatError(f"{config.input_path} is not UTF-8 text: {e.reason}") from e
        is_text = config.format == "text" and text.lstrip().startswith("n=")
        a = codec.matrix_from_text(text) if is_text else codec.matrix_from_csv(text)
    else:
        a = _family_matrix(config)
    form = CanonicalService.smith_normal_form(a, want_transforms=config.certify)
    if not config.certify:
        _write(out, codec.format_smith_form(form))
        return EXIT_OK
    verified = CanonicalService.certificate_holds(a, form)
    _write(out, codec.format_smith_form(form, verified=verified))
    return EXIT_OK if verified else EXIT_FAILED


def _jordan(config: CliConfig, out: TextIO) -> int:
    n, p = _require(config.n, "--n"), _require(config.p, "--mod")
    computed = CanonicalService.jordan_blocks_unipotent_mod_p(reduce_mod(PascalService.pascal(n), p))
    predicted = CanonicalService.predicted_pascal_jordan_mod_p(n, p)
    exponent = CanonicalService.min_poly_exponent_mod_p(n, p)
    _write(out, f"blocks: {' '.join(map(str, computed.block_sizes))} (eigenvalue {computed.eigenvalue})")
    _write(out, f"predicted: {' '.join(map(str, predicted.block_sizes))}")
    _write(out, f"minimal polynomial: (x-1)^{exponent}")
    return EXIT_OK if computed == predicted else EXIT_FAILED


def _verify(config: CliConfig, out: TextIO) -> int:
    ns = range(config.n, config.n + 1) if config.n is not None else range(1, _require(config.n_max, "--n-max") + 1)
    if config.identity is not None:
        reports = VerificationService.identity_suite(config.identity, ns, config.r)
    else:
        check = config.check or ""
        reports = VerificationService.batch(check, ns, config.r, config.p, config.trials, config.seed)
    return _emit_reports(reports, out)


def _oracle(config: CliConfig, out: TextIO) -> int:
    n, m, r = _require(config.n, "--n"), _require(config.m, "--m"), _require(config.r, "--r")
    left, right = VerificationService.combinatorial_sides(n, m, r)
    counted = VerificationService.enumerate_colored_cycle_partitions(n, m, r)
    _write(out, f"left={left} right={right} enumerated={counted}")
    return _emit_reports([VerificationService.verify_combinatorial(n, m, r)], out)


def _explore(config: CliConfig, out: TextIO) -> int:
    kind: OpenQuestionKind = "stirling-cycle" if config.kind == "stirling-cycle" else "stirling-partition"
    r, n_max = _require(config.r, "--r"), _require(config.n_max, "--n-max")
    reports = VerificationService.explore_open_question(kind, r, n_max)
    agreeing = sum(1 for report in reports if report.passed)
    _emit_reports(reports, out)
    _write(out, f"summary: {agreeing}/{len(reports)} agree")
    # findings are informational
    return EXIT_OK


def run(argv: Sequence[str], out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    """Parse ``argv``, dispatch one command and return its exit code."""
    try:
        config = parse_config(argv)
        logger.info("running %s", config.command)
        match config.command:
            case "gen":
                return _gen(config, out)
            case "snf":
                return _snf(config, out)
            case "jordan":
                return _jordan(config, out)
            case "verify":
                return _verify(config, out)
            case "oracle":
                return _oracle(config, out)
            case "explore":
                return _explore(config, out)
    except UsageError as e:
        logger.debug("usage error: %s", e)
        _write(err, str(e))
        return EXIT_USAGE
    except (PascalFormsError, ValidationError, OSError) as e:
        logger.error("command failed: %s", e)
        _write(err, f"error: {e}")
        return EXIT_USAGE
    return EXIT_USAGE


def main() -> None:
    # diagnostics go to stderr so stdout stays machine-readable
    logging.basicConfig(
        level=settings.LOG_LEVEL, stream=sys.stderr, format="%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    )
    sys.exit(run(sys.argv[1:]))
