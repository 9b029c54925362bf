"""Entry point for the cpskit CLI.

Subcommands:
    cpskit stats        - Quadrature statistics of one state
    cpskit sweep        - Statistics over a range of n or |eps|^2
    cpskit wavefunction - psi(x) samples of one state
    cpskit wigner       - Wigner function on a (q, p) lattice
    cpskit gaussianity  - Gaussianity measure G of one state
    cpskit fit-eta      - Large-n slope of R = <x>^2 + <p>^2
    cpskit figure       - Dataset behind one published figure

Exit status is 0 on success, 1 on invalid arguments and 2 when any
emitted row is flagged as not converged.
"""

import argparse
import math
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .datasets import (
    FIGURE_IDS,
    FORMATS,
    Dataset,
    figure_dataset,
    fit_eta_dataset,
    gaussianity_dataset,
    render,
    stats_dataset,
    sweep_dataset,
    wavefunction_dataset,
    wigner_dataset,
    write_dataset,
)
from .series import DEFAULT_POLICY, SeriesNotConvergedWarning, TruncationPolicy
from .states import PhaseState, eps_from_mean_n
from .sweep import eps2_grid, mean_n_grid
from .wavefunction import WAVEFUNCTION_POLICY
from .wigner import DEFAULT_TRUNCATION, WignerTruncation

COMMANDS = ("stats", "sweep", "wavefunction", "wigner", "gaussianity", "fit-eta", "figure")
STATE_COMMANDS = ("stats", "wavefunction", "wigner", "gaussianity")

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_UNCONVERGED = 2

_NAMED_PHASES = {"0": 0.0, "pi/2": math.pi / 2, "pi": math.pi}


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit status 1."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def parse_phase(token: str) -> float:
    """Phase in radians; the literal tokens ``0``, ``pi/2`` and ``pi`` are exact."""
    if token in _NAMED_PHASES:
        return _NAMED_PHASES[token]
    try:
        value = float(token)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid phase {token!r}: expected radians or 'pi/2'") from e
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"phase must be finite, got {token!r}")
    return value


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved settings of one CLI invocation."""

    command: str
    eps_abs: float | None = None
    n_bar: float | None = None
    phase: float = 0.0
    policy: TruncationPolicy = DEFAULT_POLICY
    psi_policy: TruncationPolicy = WAVEFUNCTION_POLICY
    wigner_truncation: WignerTruncation = DEFAULT_TRUNCATION
    fmt: str = "csv"
    output: Path | None = None
    figure: str | None = None
    caption_terms: bool = False
    range_kind: str = "nbar"
    """For sweep: whether ``value_range`` holds n values or |eps|^2 values."""

    value_range: tuple[float, float] | None = None
    p_range: tuple[float, float] | None = None
    points: int | None = None
    log: bool = False

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ValueError(f"Unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise ValueError(f"Unknown format {self.fmt!r}, expected one of {', '.join(FORMATS)}")
        if self.command in STATE_COMMANDS and (self.eps_abs is None) == (self.n_bar is None):
            raise ValueError(f"{self.command} needs exactly one of --eps / --nbar")
        if self.command == "figure" and self.figure not in FIGURE_IDS:
            raise ValueError(f"Unknown figure {self.figure!r}, expected one of {', '.join(FIGURE_IDS)}")
        if self.range_kind not in ("nbar", "eps2"):
            raise ValueError(f"Unknown range kind {self.range_kind!r}")
        if self.points is not None and self.points < 1:
            raise ValueError(f"--points must be positive, got {self.points}")

    def state(self) -> PhaseState:
        if self.n_bar is not None:
            return PhaseState.from_mean_n(self.n_bar, self.phase)
        return PhaseState(self.eps_abs, self.phase)


def _add_state_args(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--eps", type=float, dest="eps_abs", help="Modulus |eps| in [0, 1)")
    group.add_argument("--nbar", type=float, dest="n_bar", help="Mean number of quanta")
    parser.add_argument("--phi", type=parse_phase, default=0.0, help="Phase of eps in radians, or 'pi/2'")


def _add_series_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-terms", type=int, default=DEFAULT_POLICY.max_terms, help="Series term cap")
    parser.add_argument("--tail-tol", type=float, default=None, help="Absolute tail tolerance")
    parser.add_argument("--fixed-n", type=int, default=None, help="Sum exactly N terms")


def _add_output_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=FORMATS, default="csv", dest="fmt", help="Output format")
    parser.add_argument("--output", type=Path, default=None, help="Output file (stdout when omitted)")


def create_parser() -> argparse.ArgumentParser:
    """Create the CLI argument parser with subcommands."""
    parser = CliParser(prog="cpskit", description="Numerical toolkit for coherent phase states")
    subparsers = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    stats_parser = subparsers.add_parser("stats", help="Quadrature statistics of one state")
    _add_state_args(stats_parser)
    _add_series_args(stats_parser)
    _add_output_args(stats_parser)

    sweep_parser = subparsers.add_parser("sweep", help="Statistics over a parameter range")
    ranges = sweep_parser.add_mutually_exclusive_group(required=True)
    ranges.add_argument("--nbar-range", type=float, nargs=2, metavar=("MIN", "MAX"), help="Range of n")
    ranges.add_argument("--eps2-range", type=float, nargs=2, metavar=("MIN", "MAX"), help="Range of |eps|^2")
    sweep_parser.add_argument("--points", type=int, default=51, help="Number of sweep points")
    sweep_parser.add_argument("--phi", type=parse_phase, default=0.0, help="Phase of eps in radians, or 'pi/2'")
    sweep_parser.add_argument("--log", action="store_true", default=False, help="Logarithmic n spacing")
    _add_series_args(sweep_parser)
    _add_output_args(sweep_parser)

    wave_parser = subparsers.add_parser("wavefunction", help="Coordinate wavefunction samples")
    _add_state_args(wave_parser)
    wave_parser.add_argument("--x-range", type=float, nargs=2, default=(-6.0, 6.0), metavar=("MIN", "MAX"))
    wave_parser.add_argument("--points", type=int, default=241, help="Number of x samples")
    _add_series_args(wave_parser)
    _add_output_args(wave_parser)

    wigner_parser = subparsers.add_parser("wigner", help="Wigner function on a lattice")
    _add_state_args(wigner_parser)
    wigner_parser.add_argument("--q-range", type=float, nargs=2, default=(-6.0, 6.0), metavar=("MIN", "MAX"))
    wigner_parser.add_argument("--p-range", type=float, nargs=2, default=(-6.0, 6.0), metavar=("MIN", "MAX"))
    wigner_parser.add_argument("--resolution", type=int, default=61, help="Points per axis")
    wigner_parser.add_argument("--max-mu", type=int, default=DEFAULT_TRUNCATION.max_mu)
    wigner_parser.add_argument("--max-lambda", type=int, default=DEFAULT_TRUNCATION.max_lambda)
    wigner_parser.add_argument("--adaptive", action="store_true", default=False, help="Stop rows below 1e-12")
    _add_output_args(wigner_parser)

    gauss_parser = subparsers.add_parser("gaussianity", help="Gaussianity measure G")
    _add_state_args(gauss_parser)
    _add_series_args(gauss_parser)
    _add_output_args(gauss_parser)

    fit_parser = subparsers.add_parser("fit-eta", help="Slope of R against n")
    fit_parser.add_argument("--nbar-range", type=float, nargs=2, default=(50.0, 150.0), metavar=("MIN", "MAX"))
    fit_parser.add_argument("--points", type=int, default=20, help="Number of fit points")
    _add_series_args(fit_parser)
    _add_output_args(fit_parser)

    figure_parser = subparsers.add_parser("figure", help="Dataset behind a published figure")
    figure_parser.add_argument("figure", choices=FIGURE_IDS, help="Figure id")
    figure_parser.add_argument("--caption-terms", action="store_true", default=False, help="Use caption term counts")
    figure_parser.add_argument("--points", type=int, default=None, help="Samples (per axis for wig)")
    _add_output_args(figure_parser)

    return parser


def _policy_from_args(args: argparse.Namespace, default: TruncationPolicy) -> TruncationPolicy:
    max_terms = getattr(args, "max_terms", default.max_terms)
    tail_tol = getattr(args, "tail_tol", None)
    tail_tol = default.tail_tol if tail_tol is None else tail_tol
    fixed_n = getattr(args, "fixed_n", None)
    if fixed_n is not None:
        return TruncationPolicy(max_terms=max(max_terms, fixed_n), tail_tol=tail_tol, fixed_n=fixed_n)
    return TruncationPolicy(max_terms=max_terms, tail_tol=tail_tol)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Translate parsed arguments into a validated RunConfig."""
    command = args.command
    range_kind, value_range, p_range, points = "nbar", None, None, getattr(args, "points", None)
    if command == "sweep":
        range_kind = "nbar" if args.nbar_range is not None else "eps2"
        value_range = tuple(args.nbar_range if args.nbar_range is not None else args.eps2_range)
    elif command == "wavefunction":
        value_range = tuple(args.x_range)
    elif command == "wigner":
        value_range, p_range, points = tuple(args.q_range), tuple(args.p_range), args.resolution
    elif command == "fit-eta":
        value_range = tuple(args.nbar_range)

    wigner_truncation = DEFAULT_TRUNCATION
    if command == "wigner":
        wigner_truncation = WignerTruncation(
            max_mu=args.max_mu,
            max_lambda=args.max_lambda,
            mode="adaptive" if args.adaptive else "fixed",
        )

    return RunConfig(
        command=command,
        eps_abs=getattr(args, "eps_abs", None),
        n_bar=getattr(args, "n_bar", None),
        phase=getattr(args, "phi", 0.0),
        policy=_policy_from_args(args, DEFAULT_POLICY),
        psi_policy=_policy_from_args(args, WAVEFUNCTION_POLICY),
        wigner_truncation=wigner_truncation,
        fmt=args.fmt,
        output=args.output,
        figure=getattr(args, "figure", None),
        caption_terms=getattr(args, "caption_terms", False),
        range_kind=range_kind,
        value_range=value_range,
        p_range=p_range,
        points=points,
        log=getattr(args, "log", False),
    )


def build_dataset(config: RunConfig) -> Dataset:
    """Evaluate the dataset a config describes."""
    if config.command == "stats":
        return stats_dataset(config.state(), config.policy)
    if config.command == "sweep":
        low, high = config.value_range
        if config.range_kind == "eps2":
            eps_values = [math.sqrt(eps2) for eps2 in eps2_grid(low, high, config.points)]
        else:
            eps_values = [eps_from_mean_n(n) for n in mean_n_grid(low, high, config.points, log=config.log)]
        return sweep_dataset(eps_values, config.phase, config.policy)
    if config.command == "wavefunction":
        xs = np.linspace(config.value_range[0], config.value_range[1], config.points)
        return wavefunction_dataset(config.state(), xs, config.psi_policy)
    if config.command == "wigner":
        return wigner_dataset(
            config.state(), config.value_range, config.p_range, config.points, config.wigner_truncation
        )
    if config.command == "gaussianity":
        return gaussianity_dataset(config.state(), config.policy, config.psi_policy)
    if config.command == "fit-eta":
        return fit_eta_dataset(config.value_range, config.points, config.policy)
    return figure_dataset(config.figure, caption_terms=config.caption_terms, points=config.points)


def run(config: RunConfig) -> int:
    """Build and emit the dataset for a config, returning the exit status."""
    with warnings.catch_warnings():
        # non-convergence is reported through the converged column instead
        warnings.simplefilter("ignore", SeriesNotConvergedWarning)
        dataset = build_dataset(config)

    if config.output is None:
        sys.stdout.write(render(dataset, config.fmt))
    else:
        write_dataset(dataset, config.output, config.fmt)
        print(f"Wrote {len(dataset.rows)} rows to {config.output}", file=sys.stderr)

    if not dataset.all_converged:
        print("cpskit: warning: some rows did not converge (see the converged column)", file=sys.stderr)
        return EXIT_UNCONVERGED
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Main entry point for the cpskit CLI."""
    parser = create_parser()
    args = parser.parse_args(argv)
    try:
        return run(config_from_args(args))
    except ValueError as e:
        print(f"cpskit: error: {e}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
