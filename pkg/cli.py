"""
Command-line interface for the Euler-operator ODE engine

Subcommands:
    solve <operator>                 series solutions from every rational indicial root
    classical <family> [n]           closed form of a classical equation, cross-checked
    qes sextic --n N --g G           exact levels of the sextic oscillator
    anharmonic --alpha A --beta B    approximate x^4 + x^6 ground state
    jack --partition P --nvars N     Jack polynomial of the Sutherland operator
    csm --partition P --nvars N      Calogero-Sutherland-Moser eigenstate
    verify <solution.json> <operator>

Exit codes: 0 success, 2 resonance, 3 parse or validation error,
4 degenerate eigenvalue, 5 verification failure.
"""

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from algebra import coeff_str
from classical import Branch, Family, FamilySpec, make_family
from emitters import FORMATS, Document, render, series_document
from errors import EulerOdeError, ResidualNonzero, ValidationError
from manybody import Partition, csm_state, jack, symbolic_beta
from operators import degree_split, differentiate_eq, indicial_roots, premultiply
from op_parser import operator_from_string
from series_solver import DEFAULT_MAX_ORDER, master_solve
from spectral import anharmonic_approx, anharmonic_operator, sextic_operator, sextic_qes
from verify_solution import verify_file

logger = logging.getLogger(__name__)

ENV_MAX_ORDER = "EULERODE_MAX_ORDER"


def default_max_order() -> int:
    raw = os.environ.get(ENV_MAX_ORDER)
    if raw is None or not raw.strip():
        return DEFAULT_MAX_ORDER
    try:
        return int(raw)
    except ValueError:
        raise ValidationError(f"{ENV_MAX_ORDER} must be an integer, got {raw!r}") from None


@dataclass
class RunConfig:
    """
    Settings shared by all subcommands.

    Args:
        max_order: Iteration cap K for master_solve
        premultiply: Power k in x^k * op applied before solving
        differentiate: Number of times the equation is differentiated first
        lambda_select: One indicial root to solve from; None means all rational roots
        param_bindings: Rational values for named parameters
        output: text, json or latex
        free: The parameter left symbolic
        order_cap: Cap on exponential-form applications (defaults to max_order)
        verbose: Log progress at INFO
    """
    max_order: int = DEFAULT_MAX_ORDER
    premultiply: int = 0
    differentiate: int = 0
    lambda_select: Optional[Fraction] = None
    param_bindings: Dict[str, Fraction] = field(default_factory=dict)
    output: str = "text"
    free: Optional[str] = None
    order_cap: Optional[int] = None
    verbose: bool = False

    def __post_init__(self):
        if self.max_order < 1:
            raise ValidationError(f"max_order must be >= 1, got {self.max_order}")
        if self.premultiply < 0 or self.differentiate < 0:
            raise ValidationError("premultiply and differentiate must be nonnegative")
        if self.order_cap is not None and self.order_cap < 1:
            raise ValidationError(f"order_cap must be >= 1, got {self.order_cap}")
        if self.output not in FORMATS:
            raise ValidationError(f"output must be one of {', '.join(FORMATS)}, got {self.output!r}")
        if self.lambda_select is not None:
            self.lambda_select = Fraction(self.lambda_select)
        self.param_bindings = {k: Fraction(v) for k, v in self.param_bindings.items()}

    @property
    def cap(self) -> int:
        return self.max_order if self.order_cap is None else self.order_cap


@dataclass
class RunResult:
    exit_code: int
    document: str = ""
    error: str = ""


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    """ArgumentParser whose usage errors map to the validation exit code."""

    def error(self, message):
        raise ValidationError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    return Fraction(text.strip())


def _binding(text: str) -> Tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name.strip():
        raise ValueError(f"expected name=value, got {text!r}")
    return name.strip(), Fraction(value.strip())


def _partition(text: str) -> Partition:
    body = text.strip().strip("()")
    return Partition.of(*(int(p) for p in body.split(",") if p.strip()))


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--max-order", type=int, default=default_max_order(),
                        help=f"iteration cap K (default 64, env {ENV_MAX_ORDER})")
    common.add_argument("--order-cap", type=int, default=None,
                        help="cap on exponential-form applications (default: max order)")
    common.add_argument("-o", "--output", choices=FORMATS, default="text", help="output format")
    common.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")

    bindable = _Parser(add_help=False)
    bindable.add_argument("--bind", type=_binding, action="append", default=[], metavar="NAME=VALUE",
                          help="bind a parameter to a rational value (repeatable)")
    bindable.add_argument("--free", default=None, metavar="NAME", help="the one symbolic parameter")

    beta = _Parser(add_help=False)
    beta.add_argument("--partition", type=_partition, required=True, help="e.g. 2,1")
    beta.add_argument("--nvars", type=int, required=True, help="number of variables N")
    group = beta.add_mutually_exclusive_group(required=True)
    group.add_argument("--beta", type=_rational, help="rational coupling")
    group.add_argument("--symbolic-beta", action="store_true", help="keep beta symbolic")

    parser = _Parser(description="Exact Euler-operator series solutions of linear ODEs")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[common, bindable], help="solve an operator equation")
    solve.add_argument("operator", help='e.g. "D - 2 - 1/2*d^2"')
    solve.add_argument("--premultiply", type=int, default=0, metavar="K", help="multiply by x^K first")
    solve.add_argument("--differentiate", type=int, default=0, metavar="K",
                       help="differentiate the equation K times first")
    solve.add_argument("--lambda", dest="lam", type=_rational, default=None,
                       help="solve from this indicial root only")

    classical = sub.add_parser("classical", parents=[common], help="classical special functions")
    classical.add_argument("family", choices=[f.value for f in Family])
    classical.add_argument("n", type=int, nargs="?", default=None, help="polynomial degree")
    classical.add_argument("--param", type=_binding, action="append", default=[], metavar="NAME=VALUE",
                           help="family parameter, e.g. alpha=1/2 (repeatable)")
    classical.add_argument("--branch", choices=[b.value for b in Branch], default=Branch.ASCENDING.value)

    qes = sub.add_parser("qes", parents=[common], help="quasi-exactly solvable spectra")
    qes.add_argument("kind", choices=["sextic"])
    qes.add_argument("--n", type=int, required=True, help="polynomial degree")
    qes.add_argument("--g", type=_rational, required=True, help="coupling, gamma = g^2")

    anharmonic = sub.add_parser("anharmonic", parents=[common], help="x^4 + x^6 ground state estimate")
    anharmonic.add_argument("--alpha", type=_rational, required=True)
    anharmonic.add_argument("--beta", type=_rational, required=True)

    sub.add_parser("jack", parents=[common, beta], help="Jack polynomial of the Sutherland operator")
    sub.add_parser("csm", parents=[common, beta], help="Calogero-Sutherland-Moser eigenstate")

    verify = sub.add_parser("verify", parents=[common, bindable], help="re-certify a JSON solution")
    verify.add_argument("solution", help="solution file written with --output json")
    verify.add_argument("operator")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    bindings = dict(getattr(args, "bind", []) or [])
    bindings.update(dict(getattr(args, "param", []) or []))
    return RunConfig(
        max_order=args.max_order,
        premultiply=getattr(args, "premultiply", 0),
        differentiate=getattr(args, "differentiate", 0),
        lambda_select=getattr(args, "lam", None),
        param_bindings=bindings,
        output=args.output,
        free=getattr(args, "free", None),
        order_cap=args.order_cap,
        verbose=args.verbose,
    )


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

Output = Union[Document, List[Document]]


def _one_or_many(docs: List[Document]) -> Output:
    return docs[0] if len(docs) == 1 else docs


def solve_command(args: argparse.Namespace, config: RunConfig) -> Output:
    op = operator_from_string(args.operator, config.param_bindings, config.free)
    if config.differentiate:
        op = differentiate_eq(op, config.differentiate)
    if config.premultiply:
        op = premultiply(op, config.premultiply)
    F, _ = degree_split(op)
    if config.lambda_select is not None:
        roots = [config.lambda_select]
    else:
        roots = indicial_roots(F).roots
        if not roots:
            raise ValidationError(f"F(D) = {F} has no rational roots")

    docs = []
    for lam in roots:
        report = master_solve(op, lam, config.max_order)
        docs.append(series_document(report.solution, report.status.name, {
            "operator": str(op),
            "euler_part": str(F),
            "lambda": str(lam),
            "iterations_used": report.iterations_used,
            "resonances_hit": report.resonances_hit,
        }))
    return _one_or_many(docs)


def classical_command(args: argparse.Namespace, config: RunConfig) -> Output:
    spec = FamilySpec(args.family, config.param_bindings, args.n, args.branch)
    family = make_family(spec)
    report = family.solve(config.max_order, config.cap)
    if not report.residual_zero:
        raise ResidualNonzero("closed form or master series", family.describe())
    constant = family.leading_constant()
    closed = report.closed if constant is None else report.closed.scaled(constant)
    F, _ = degree_split(report.operator)
    return series_document(closed, "terminated" if closed.is_exact else "truncated", {
        "family": family.describe(),
        "operator": str(report.operator),
        "euler_part": str(F),
        "exp_form": str(family.exp_form()),
        "master_status": report.master.status.name,
        "master_constant": coeff_str(report.master_constant),
        "closed_constant": coeff_str(report.closed_constant),
    })


def qes_command(args: argparse.Namespace, config: RunConfig) -> Output:
    result = sextic_qes(args.n, args.g, max(config.max_order, args.n + 3))
    return {
        "family": args.kind,
        "n": result.n,
        "g": str(result.g),
        "alpha": str(result.alpha),
        "gamma": str(result.gamma),
        "gauge": result.gauge,
        "termination_poly": str(result.termination_poly),
        "spectrum": [str(E) for E in result.spectrum],
        "eigenfunctions": [
            {"energy": str(E), "solution": series_document(psi, "terminated", {
                "operator": str(sextic_operator(result.n, result.g, E))})}
            for E, psi in result.eigenfunctions
        ],
    }


def anharmonic_command(args: argparse.Namespace, config: RunConfig) -> Output:
    result = anharmonic_approx(args.alpha, args.beta)
    series = result.series
    return {
        "alpha": str(result.alpha),
        "beta": str(result.beta),
        "cubic": str(result.cubic),
        "series": series_document(series, "terminated" if series.is_exact else "truncated", {
            "operator": str(anharmonic_operator(result.alpha, result.beta))}),
        "method": result.method,
        "complex_intermediate": result.complex_intermediate,
        "approximate": {
            "E0": format(result.E0, ".17g"),
            "mu": format(result.mu, ".17g"),
            "nu": format(result.nu, ".17g"),
            "closed_form_root": format(result.closed_form_root, ".17g"),
            "bisection_root": format(result.bisection_root, ".17g"),
        },
    }


def _beta(args: argparse.Namespace):
    return symbolic_beta() if args.symbolic_beta else args.beta


def jack_command(args: argparse.Namespace, config: RunConfig) -> Output:
    beta = _beta(args)
    result = jack(args.partition, args.nvars, beta)
    return {
        "partition": str(result.lam),
        "nvars": result.N,
        "beta": coeff_str(beta),
        "eigenvalue_shift": coeff_str(result.eigenvalue_shift),
        "coefficients": [{"partition": str(mu), "coeff": coeff_str(c)}
                         for mu, c in result.coefficients.items()],
        "polynomial": str(result.polynomial),
    }


def csm_command(args: argparse.Namespace, config: RunConfig) -> Output:
    beta = _beta(args)
    P, energy = csm_state(args.partition, args.nvars, beta)
    return {
        "partition": str(args.partition),
        "nvars": args.nvars,
        "beta": coeff_str(beta),
        "energy": coeff_str(energy),
        "coefficients": [{"partition": str(mu), "coeff": coeff_str(c)}
                         for mu, c in P.m_coefficients().items()],
        "polynomial": str(P),
    }


def verify_command(args: argparse.Namespace, config: RunConfig) -> Output:
    solutions = verify_file(args.solution, args.operator, config.param_bindings, config.free)
    return {"status": "verified", "solutions": len(solutions)}


COMMANDS = {
    "solve": solve_command,
    "classical": classical_command,
    "qes": qes_command,
    "anharmonic": anharmonic_command,
    "jack": jack_command,
    "csm": csm_command,
    "verify": verify_command,
}


def run(argv: Optional[Sequence[str]] = None) -> RunResult:
    """Parse argv, run the subcommand and return its exit code and rendered document."""
    try:
        args = build_parser().parse_args(argv)
        config = config_from_args(args)
        logging.basicConfig(stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s",
                            level=logging.INFO if config.verbose else logging.WARNING)
        doc = COMMANDS[args.command](args, config)
        return RunResult(0, render(doc, config.output))
    except EulerOdeError as exc:
        logger.debug("exit %d: %s", exc.exit_code, exc)
        return RunResult(exc.exit_code, error=str(exc))


def main(argv: Optional[Sequence[str]] = None) -> int:
    result = run(argv)
    if result.document:
        print(result.document)
    if result.error:
        print(f"error: {result.error}", file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
