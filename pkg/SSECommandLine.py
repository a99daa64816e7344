#!/usr/bin/env python3
# Command line front end: classification, pipeline, chain verification and the family demos
import argparse
import enum
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from DoublyStochastic import (
    DEFAULT_SIZE_CAP,
    DoublyStochasticPipeline,
    PipelineOptions,
    SameSizeUnavailableError,
    SizeCapError,
    perron_weights,
)
from ExactMatrix import DomainError, MatrixError, RatPoly, charpoly, similar_over_rationals, to_rat
from MatrixFamilies import (
    PT_DEFAULT_VALUES,
    an_expected_charpoly,
    an_family,
    an_third_eigenvalue,
    circulant,
    circulant_determinant,
    circulant_minimum_scan,
    circulant_parameters,
    circulant_samples,
    pt_family,
)
from MatrixFiles import ChainDocument, MatrixFormatError, dump_chain, dump_matrix, load_chain, load_matrix
from ShiftEquivalence import ChainRejectedError, StructuralError, Violation, ViolationKind, verify_chain
from StochasticMatrix import classify, left_perron, same_size_conditions

logger = logging.getLogger('sse_cli')


class ExitCode(enum.IntEnum):
    OK = 0
    VERIFY = 1
    USAGE = 2
    PRECONDITION = 3
    SIZE_CAP = 4
    SAME_SIZE_UNAVAILABLE = 5


class UsageError(MatrixError):
    """A command line value is out of range."""


def _flag(value: Optional[bool]) -> str:
    if value is None:
        return "n/a"
    return "true" if value else "false"


def _vector(values: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(x) for x in values) + ")"


def _parse_t(text: str) -> Fraction:
    try:
        t = to_rat(text)
    except DomainError as e:
        raise UsageError(str(e)) from e
    if not 0 <= t <= 1:
        raise UsageError(f"t must lie in [0, 1], got {t}")
    return t


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


class SSECommandLine:
    """Dispatches subcommands and maps failures to the exit code contract."""

    def __init__(self, out: Optional[TextIO] = None, err: Optional[TextIO] = None):
        self._out = out
        self._err = err

    @property
    def out(self) -> TextIO:
        return self._out or sys.stdout

    @property
    def err(self) -> TextIO:
        return self._err or sys.stderr

    def _print(self, *args):
        print(*args, file=self.out)

    def _error(self, message: str):
        print(f"error: {message}", file=self.err)

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog='sse', description='Exact strong shift equivalence toolkit for stochastic matrices')
        parser.add_argument('-v', '--verbose', action='store_true', default=False,
                            help='Log progress messages')
        parser.add_argument('-d', '--debug', action='store_true', default=False,
                            help='Log every construction and verification step')
        commands = parser.add_subparsers(dest='command', metavar='COMMAND')
        commands.required = True

        classify_parser = commands.add_parser('classify', help='Print the exact classification of a matrix')
        classify_parser.add_argument('path', metavar='PATH')
        classify_parser.set_defaults(handler=self.cmd_classify)

        perron_parser = commands.add_parser('perron', help='Print the left Perron vector and its integer weights')
        perron_parser.add_argument('path', metavar='PATH')
        perron_parser.set_defaults(handler=self.cmd_perron)

        conditions_parser = commands.add_parser('conditions', help='Evaluate the same-size route conditions')
        conditions_parser.add_argument('path', metavar='PATH')
        conditions_parser.set_defaults(handler=self.cmd_conditions)

        make_parser = commands.add_parser('make-doubly', help='Build a doubly stochastic equivalent')
        make_parser.add_argument('path', metavar='PATH')
        route = make_parser.add_mutually_exclusive_group()
        route.add_argument('--same-size-only', action='store_true', default=False,
                           help='Fail with exit 5 instead of falling back to splitting')
        route.add_argument('--split-only', action='store_true', default=False,
                           help='Skip the same-size route')
        make_parser.add_argument('--max-den', type=_positive_int, default=None, metavar='N',
                                 help='Try a redenomination step with denominators up to N')
        make_parser.add_argument('--size-cap', type=_positive_int, default=DEFAULT_SIZE_CAP, metavar='N',
                                 help='Refuse targets larger than N (default %(default)s)')
        make_parser.add_argument('--allow-transpose', action='store_true', default=False,
                                 help='Also try the weighted transpose same-size route')
        make_parser.add_argument('--out', metavar='CHAINFILE', help='Write the chain document here')
        make_parser.add_argument('--matrix-out', metavar='PATH',
                                 help='Write the output matrix here (default: <CHAINFILE stem>.output.json)')
        make_parser.set_defaults(handler=self.cmd_make_doubly)

        verify_parser = commands.add_parser('verify', help='Verify chain documents')
        verify_parser.add_argument('chainfiles', nargs='+', metavar='CHAINFILE')
        verify_parser.add_argument('--workers', type=_positive_int, default=1, metavar='N',
                                   help='Verify the steps of each chain on N threads')
        verify_parser.set_defaults(handler=self.cmd_verify)

        pt_parser = commands.add_parser('demo-pt', help='Similar positive family P_t degenerating at t = 1')
        pt_parser.add_argument('t_values', nargs='*', metavar='T', default=list(PT_DEFAULT_VALUES))
        pt_parser.set_defaults(handler=self.cmd_demo_pt)

        an_parser = commands.add_parser('demo-an', help='Characteristic polynomials of the A_n family')
        an_parser.add_argument('n_max', nargs='?', type=_positive_int, default=10, metavar='N_MAX')
        an_parser.set_defaults(handler=self.cmd_demo_an)

        circulant_parser = commands.add_parser('demo-circulant', help='Zero-trace 3x3 doubly stochastic circulants')
        circulant_parser.add_argument('--matrix', metavar='FILE', help='Run the structural checker on this matrix')
        circulant_parser.add_argument('--max-den', type=_positive_int, default=1000, metavar='N',
                                      help='Largest denominator of the grid scan (default %(default)s)')
        circulant_parser.set_defaults(handler=self.cmd_demo_circulant)
        return parser

    def run(self, argv: Optional[Sequence[str]] = None) -> int:
        parser = self.build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as e:
            return int(e.code or 0)

        level = logging.DEBUG if args.debug else logging.INFO if args.verbose else logging.WARNING
        logging.basicConfig(level=level, format='%(levelname)s %(name)s: %(message)s')

        try:
            return int(args.handler(args))
        except (MatrixFormatError, UsageError) as e:
            self._error(str(e))
            return ExitCode.USAGE
        except SizeCapError as e:
            self._error(str(e))
            return ExitCode.SIZE_CAP
        except SameSizeUnavailableError as e:
            self._error(str(e))
            return ExitCode.SAME_SIZE_UNAVAILABLE
        except ChainRejectedError as e:
            self._error(str(e))
            for line in e.verdict.lines():
                self._error(line)
            return ExitCode.VERIFY
        except MatrixError as e:
            self._error(str(e))
            return ExitCode.PRECONDITION

    def cmd_classify(self, args) -> ExitCode:
        A = load_matrix(args.path)
        profile = classify(A)
        self._print(f"summary: {profile.describe()}")
        self._print(f"shape: {A.rows}x{A.cols}")
        for name in ('square', 'nonnegative', 'positive', 'stochastic', 'doubly_stochastic',
                     'irreducible', 'primitive'):
            self._print(f"{name}: {_flag(getattr(profile, name))}")
        self._print(f"row sums: {_vector(profile.row_sums)}")
        self._print(f"column sums: {_vector(profile.col_sums)}")
        return ExitCode.OK

    def cmd_perron(self, args) -> ExitCode:
        A = load_matrix(args.path)
        l = left_perron(A)
        weights = perron_weights(l)
        self._print(f"l = {l}; M = {weights.M}; weights = ({','.join(str(m) for m in weights.weights)})")
        return ExitCode.OK

    def cmd_conditions(self, args) -> ExitCode:
        A = load_matrix(args.path)
        report = same_size_conditions(A)
        for name, holds in report.conditions():
            line = f"{name}: {_flag(holds)}"
            if not holds and name in report.failures:
                line += f" ({report.failures[name]})"
            self._print(line)
        available = "available" if report.same_size_route_available else "unavailable"
        self._print(f"same-size route: {available}")
        return ExitCode.OK

    def cmd_make_doubly(self, args) -> ExitCode:
        P = load_matrix(args.path)
        options = PipelineOptions(
            prefer_same_size=not args.split_only,
            max_den=args.max_den,
            size_cap=args.size_cap,
            allow_transpose=args.allow_transpose,
            require_same_size=args.same_size_only,
        )
        report = DoublyStochasticPipeline(options).run(P)

        self._print(f"route: {report.route.value}")
        self._print(f"target size: {report.target_size}")
        self._print(f"lag: {report.lag}")
        self._print(f"size: {report.size}")
        for note in report.notes:
            self._print(f"note: {note}")
        if report.similarity_witness is not None:
            self._print(f"similarity witness X:\n{report.similarity_witness}")
            self._print(f"path positive: {_flag(report.path_positive)}")
        self._print(f"output:\n{report.output}")

        if args.out:
            out = Path(args.out)
            document = ChainDocument(
                report.chain, f"{report.route.value} chain for {Path(args.path).name}")
            dump_chain(document, out)
            matrix_out = Path(args.matrix_out) if args.matrix_out else out.with_name(f"{out.stem}.output.json")
            dump_matrix(report.output, matrix_out)
            self._print(f"wrote {out} and {matrix_out}")
        elif args.matrix_out:
            dump_matrix(report.output, args.matrix_out)
            self._print(f"wrote {args.matrix_out}")
        return ExitCode.OK

    def cmd_verify(self, args) -> ExitCode:
        documents = [(path, load_chain(path)) for path in args.chainfiles]
        status = ExitCode.OK
        for path, document in documents:
            verdict = verify_chain(document.chain, workers=args.workers)
            for key, message in document.metadata_mismatches().items():
                verdict.violations.append(Violation(ViolationKind.METADATA_MISMATCH, message, matrix=key))
            self._print(f"{path}: lag {document.chain.lag}, size {document.chain.size}")
            for k, holds in enumerate(verdict.spectrum, start=1):
                state = "not checked" if holds is None else "holds" if holds else "FAILS"
                self._print(f"  step {k}: padded charpoly identity {state}")
            for line in verdict.lines():
                self._print(f"  {line}")
            if not verdict.passed:
                status = ExitCode.VERIFY
        return status

    def cmd_demo_pt(self, args) -> ExitCode:
        values = [_parse_t(text) for text in args.t_values]
        P0 = pt_family(0)
        similar_below_one = True
        for t in values:
            P = pt_family(t)
            profile = classify(P)
            similar = similar_over_rationals(P0, P)
            self._print(f"t = {t}")
            self._print(f"P_t =\n{P}")
            self._print(f"  positive: {_flag(profile.positive)}, irreducible: {_flag(profile.irreducible)}")
            self._print(f"  charpoly: {charpoly(P)}")
            self._print(f"  similar to P_0 over Q: {_flag(similar)}")
            self._print(f"  Tr(P_t) = {P.trace()}, det(P_t) = {P.determinant()}; "
                        f"Tr(4P_t) = {(P * 4).trace()}, det(4P_t) = {(P * 4).determinant()}")
            if t < 1 and not (similar and profile.irreducible):
                similar_below_one = False
            if t == 1:
                self._print("  P_1 is reducible: " + _flag(not profile.irreducible))
        self._print(f"every listed t < 1 gives a positive matrix similar to P_0: {_flag(similar_below_one)}")
        self._print("note: trace 6 and determinant 8 belong to 4P_t; the normalized P_t has trace 3/2 "
                    "and determinant 1/2")
        return ExitCode.OK

    def cmd_demo_an(self, args) -> ExitCode:
        status = ExitCode.OK
        for n in range(1, args.n_max + 1):
            A = an_family(n)
            p = charpoly(A)
            expected = an_expected_charpoly(n)
            if p != expected:
                logger.error("charpoly(A_%d) = %s differs from %s", n, p, expected)
                status = ExitCode.VERIFY
            conditions = same_size_conditions(A)
            M = perron_weights(left_perron(A)).M
            same_size = "available" if conditions.ds_shift_positive else "unavailable"
            self._print(f"n = {n}: charpoly {p} ({'matches' if p == expected else 'MISMATCH'}); "
                        f"third eigenvalue {an_third_eigenvalue(n)}; same-size route {same_size}; "
                        f"splitting target M = {M}")
        self._print(f"third eigenvalue -(n-1)/(n+2) tends to -1, and {RatPoly.from_roots([0, 1, -1])} "
                    f"is not the charpoly of any 3x3 doubly stochastic matrix")
        return status

    def cmd_demo_circulant(self, args) -> ExitCode:
        if args.matrix:
            A = load_matrix(args.matrix)
            try:
                b, c = circulant_parameters(A)
            except StructuralError as e:
                self._print(f"structural check: {e}")
                return ExitCode.PRECONDITION
            self._print(f"structural check: circulant with b = {b}, c = {c}")
            self._print(f"det = {A.determinant()} = b^3 + c^3 = {b ** 3 + c ** 3}")
            self._print(f"charpoly: {charpoly(A)}")
            return ExitCode.OK

        target = RatPoly.from_roots([0, 1, -1])
        status = ExitCode.OK
        for b in circulant_samples():
            A = circulant(b)
            det = A.determinant()
            p = charpoly(A)
            if det != circulant_determinant(b) or p == target:
                status = ExitCode.VERIFY
            self._print(f"b = {b}: det = {det}, b^3 + (1-b)^3 = {circulant_determinant(b)}, charpoly {p}")
        scan = circulant_minimum_scan(args.max_den)
        self._print(f"grid scan over {scan.grid_points} points with denominators <= {scan.max_den}: "
                    f"minimum {scan.minimum} at b = {scan.argmin}")
        self._print(f"critical point b = {scan.critical_point} gives {scan.critical_value}")
        if scan.minimum != scan.critical_value or scan.minimum <= 0:
            status = ExitCode.VERIFY
        self._print(f"b^3 + c^3 >= {scan.minimum} > 0, so no such circulant has determinant 0 "
                    f"or charpoly {target}")
        return status


def main(argv: Optional[List[str]] = None) -> int:
    return SSECommandLine().run(argv)


if __name__ == "__main__":
    sys.exit(main())
