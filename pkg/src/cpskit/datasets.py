"""Figure-ready datasets and their CSV / JSON serialisation."""

import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .observables import (
    ETA_DEFAULT,
    fit_eta,
    quadrature_stats,
    radius_R,
    radius_R_interp,
    rs_product_approx,
    sigma_x_min_approx,
    sigma_x_min_series,
    sigma_x_phi0_approx,
    sigma_x_sqzvac,
    sigma_x_sqzvac_asymptotic,
)
from .series import DEFAULT_POLICY, TruncationPolicy, s1
from .states import CoherentState, PhaseState, eps_from_mean_n
from .sweep import eps2_grid, mean_n_grid, parallel_map
from .wavefunction import (
    WAVEFUNCTION_POLICY,
    gaussian_density,
    gaussianity_report,
    gaussianity_small_eps,
    psi_coherent,
    psi_cps_series,
)
from .wigner import DEFAULT_TRUNCATION, WignerTruncation, wigner_grid

FORMATS = ("csv", "json")

FIGURE_IDS = ("sigmin", "R", "D", "sqz-mean-phi0", "psi-vf0", "psi-pi2", "G", "wig")

# term counts quoted in the published figure captions
CAPTION_TERMS = {
    "sigmin": 1000,
    "R": 10000,
    "D": 640000,
    "sqz-mean-phi0": 10000,
    "psi-vf0": 10000,
    "psi-pi2": 10000,
    "G": 10000,
}
CAPTION_WIGNER_TRUNCATION = WignerTruncation(max_mu=110, max_lambda=110, mode="fixed")
FIGURE_WIGNER_TRUNCATION = WignerTruncation(max_mu=600, max_lambda=600, mode="adaptive")

DEFAULT_POINTS = {
    "sigmin": 201,
    "R": 151,
    "D": 41,
    "sqz-mean-phi0": 101,
    "psi-vf0": 801,
    "psi-pi2": 601,
    "G": 101,
    "wig": 61,
}

STATS_COLUMNS = (
    "eps_abs",
    "n_bar",
    "phi",
    "mean_x",
    "mean_p",
    "var_x",
    "var_p",
    "cov_xp",
    "rs_product",
    "radius_sq",
    "terms_used",
    "converged",
)


@dataclass(frozen=True)
class Dataset:
    """Rows of one command or figure, with the metadata written in its header."""

    name: str
    columns: tuple[str, ...]
    units: tuple[str, ...]
    rows: list[tuple]
    truncation: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.units) != len(self.columns):
            raise ValueError(f"{self.name}: {len(self.columns)} columns but {len(self.units)} units")
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError(f"{self.name}: row of length {len(row)}, expected {len(self.columns)}")

    @property
    def all_converged(self) -> bool:
        """False iff some row carries converged = False."""
        if "converged" not in self.columns:
            return True
        index = self.columns.index("converged")
        return all(row[index] for row in self.rows)


def _format_value(value: object) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _json_value(value: object) -> object:
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if math.isnan(value) else float(value)
    return value


def render_csv(dataset: Dataset) -> str:
    """One '#' header line documenting the columns, then comma separated rows."""
    out = io.StringIO()
    header = "; ".join(
        [
            f"dataset={dataset.name}",
            "columns=" + ",".join(dataset.columns),
            "units=" + ",".join(dataset.units),
            f"truncation={dataset.truncation}",
            *(f"{key}={_format_value(value)}" for key, value in sorted(dataset.meta.items())),
        ]
    )
    out.write(f"# {header}\n")
    for row in dataset.rows:
        out.write(",".join(_format_value(value) for value in row))
        out.write("\n")
    return out.getvalue()


def render_json(dataset: Dataset) -> str:
    payload = {
        "columns": list(dataset.columns),
        "meta": {
            "dataset": dataset.name,
            "units": list(dataset.units),
            "truncation": dataset.truncation,
            **{key: _json_value(value) for key, value in sorted(dataset.meta.items())},
        },
        "rows": [[_json_value(value) for value in row] for row in dataset.rows],
    }
    return json.dumps(payload, indent=2) + "\n"


def render(dataset: Dataset, fmt: str = "csv") -> str:
    if fmt == "csv":
        return render_csv(dataset)
    if fmt == "json":
        return render_json(dataset)
    raise ValueError(f"Unknown format {fmt!r}, expected one of {', '.join(FORMATS)}")


def write_dataset(dataset: Dataset, path: Path, fmt: str = "csv") -> Path:
    """Write a dataset to path, creating parent directories."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render(dataset, fmt))
    return path


# -- command datasets ------------------------------------------------------


def _stats_row(state: PhaseState, policy: TruncationPolicy) -> tuple:
    stats = quadrature_stats(state, policy)
    return (
        state.eps_abs,
        state.mean_n,
        state.phase,
        stats.mean_x,
        stats.mean_p,
        stats.var_x,
        stats.var_p,
        stats.cov_xp,
        stats.rs_product,
        stats.radius_sq,
        stats.terms_used,
        stats.converged,
    )


_STATS_UNITS = ("1", "quanta", "rad", "1", "1", "1", "1", "1", "1", "1", "count", "flag")


def stats_dataset(state: PhaseState, policy: TruncationPolicy = DEFAULT_POLICY) -> Dataset:
    return Dataset("stats", STATS_COLUMNS, _STATS_UNITS, [_stats_row(state, policy)], policy.describe())


def sweep_dataset(
    eps_values: list[float], phase: float, policy: TruncationPolicy = DEFAULT_POLICY
) -> Dataset:
    """Statistics over a list of moduli, evaluated in parallel, rows in input order."""
    rows = parallel_map(lambda eps_abs: _stats_row(PhaseState(eps_abs, phase), policy), eps_values)
    return Dataset("sweep", STATS_COLUMNS, _STATS_UNITS, rows, policy.describe())


def wavefunction_dataset(
    state: PhaseState, xs: np.ndarray, policy: TruncationPolicy = WAVEFUNCTION_POLICY
) -> Dataset:
    psi = psi_cps_series(state, xs, policy)
    rows = [
        (float(x), float(value.real), float(value.imag), float(abs(value) ** 2), psi.converged)
        for x, value in zip(xs, psi.values)
    ]
    return Dataset(
        "wavefunction",
        ("x", "re", "im", "density", "converged"),
        ("1", "1", "1", "1", "flag"),
        rows,
        policy.describe(),
        meta={"eps_abs": state.eps_abs, "phi": state.phase, "terms_used": psi.terms_used},
    )


def wigner_dataset(
    state: PhaseState,
    q_range: tuple[float, float],
    p_range: tuple[float, float],
    resolution: int,
    truncation: WignerTruncation = DEFAULT_TRUNCATION,
    name: str = "wigner",
) -> Dataset:
    grid = wigner_grid(state, q_range, p_range, resolution, truncation)
    rows = [
        (float(q), float(p), float(grid.values[iq, jp]), grid.converged)
        for iq, q in enumerate(grid.q_axis)
        for jp, p in enumerate(grid.p_axis)
    ]
    return Dataset(
        name,
        ("q", "p", "w", "converged"),
        ("1", "1", "1", "flag"),
        rows,
        truncation.describe(),
        meta={
            "eps_abs": state.eps_abs,
            "phi": state.phase,
            "lambda_used": grid.lambda_used,
            "tail_estimate": grid.tail_estimate,
        },
    )


def gaussianity_dataset(
    state: PhaseState, policy: TruncationPolicy = DEFAULT_POLICY, psi_policy: TruncationPolicy = WAVEFUNCTION_POLICY
) -> Dataset:
    report = gaussianity_report(state, policy, psi_policy)
    return Dataset(
        "gaussianity",
        ("eps_abs", "n_bar", "phi", "g", "mean_x", "var_x", "density_at_mean", "converged"),
        ("1", "quanta", "rad", "1", "1", "1", "1", "flag"),
        [
            (
                state.eps_abs,
                state.mean_n,
                state.phase,
                report.g,
                report.mean_x,
                report.var_x,
                report.density_at_mean,
                report.converged,
            )
        ],
        f"stats {policy.describe()}; psi {psi_policy.describe()}",
    )


def fit_eta_dataset(
    n_range: tuple[float, float], n_points: int, policy: TruncationPolicy = DEFAULT_POLICY
) -> Dataset:
    fit = fit_eta(n_range, n_points, policy)
    return Dataset(
        "fit-eta",
        ("eta", "intercept", "n_min", "n_max", "n_points", "residual"),
        ("1", "quanta", "quanta", "quanta", "count", "quanta"),
        [(fit.eta, fit.intercept, fit.fit_range[0], fit.fit_range[1], n_points, fit.residual)],
        policy.describe(),
    )


# -- figure datasets -------------------------------------------------------


def _figure_sigmin(policy: TruncationPolicy, points: int) -> Dataset:
    def row(eps2: float) -> tuple:
        eps_abs = math.sqrt(eps2)
        exact = sigma_x_min_series(eps_abs, policy)
        return (eps2, exact.value, sigma_x_min_approx(eps_abs), 0.5 * (1.0 - eps2), exact.terms_used, exact.converged)

    return Dataset(
        "sigmin",
        ("eps2", "sigma_exact", "sigma_approx", "sigma_line", "terms_used", "converged"),
        ("1", "1", "1", "1", "count", "flag"),
        parallel_map(row, eps2_grid(0.0, 0.9999, points)),
        policy.describe(),
    )


def _figure_radius(policy: TruncationPolicy, points: int) -> Dataset:
    def row(n_bar: float) -> tuple:
        eps_abs = eps_from_mean_n(n_bar)
        series = s1(eps_abs, policy)
        return (
            n_bar,
            radius_R(eps_abs, policy),
            radius_R_interp(n_bar, ETA_DEFAULT),
            2.0 * n_bar,
            ETA_DEFAULT * n_bar,
            series.terms_used,
            series.converged,
        )

    return Dataset(
        "R",
        ("n_bar", "r_exact", "r_interp", "r_small_n", "r_large_n", "terms_used", "converged"),
        ("quanta", "1", "1", "1", "1", "count", "flag"),
        parallel_map(row, mean_n_grid(0.0, 150.0, points)),
        policy.describe(),
        meta={"eta": ETA_DEFAULT},
    )


def _figure_rs_product(policy: TruncationPolicy, points: int) -> Dataset:
    def row(n_bar: float) -> tuple:
        stats = quadrature_stats(PhaseState.from_mean_n(n_bar), policy)
        return (
            n_bar,
            stats.rs_product,
            rs_product_approx(n_bar, ETA_DEFAULT, "full"),
            rs_product_approx(n_bar, ETA_DEFAULT, "simplified"),
            stats.terms_used,
            stats.converged,
        )

    return Dataset(
        "D",
        ("n_bar", "d_exact", "d_approx_full", "d_approx_simplified", "terms_used", "converged"),
        ("quanta", "1", "1", "1", "count", "flag"),
        parallel_map(row, mean_n_grid(0.01, 9999.0, points, log=True)),
        policy.describe(),
        meta={"eta": ETA_DEFAULT},
    )


def _figure_squeezing(policy: TruncationPolicy, points: int) -> Dataset:
    def row(n_bar: float) -> tuple:
        squeezed = quadrature_stats(PhaseState.from_mean_n(n_bar, math.pi / 2), policy)
        stretched = quadrature_stats(PhaseState.from_mean_n(n_bar, 0.0), policy)
        return (
            n_bar,
            squeezed.var_x,
            sigma_x_sqzvac(n_bar),
            sigma_x_sqzvac_asymptotic(n_bar),
            stretched.mean_x,
            stretched.var_x,
            sigma_x_phi0_approx(n_bar, ETA_DEFAULT),
            stretched.terms_used,
            squeezed.converged and stretched.converged,
        )

    return Dataset(
        "sqz-mean-phi0",
        (
            "n_bar",
            "sigma_pi2",
            "sigma_sqzvac",
            "sigma_sqzvac_asymptotic",
            "mean_x_phi0",
            "sigma_phi0",
            "sigma_phi0_approx",
            "terms_used",
            "converged",
        ),
        ("quanta", "1", "1", "1", "1", "1", "1", "count", "flag"),
        parallel_map(row, mean_n_grid(0.0, 100.0, points)),
        policy.describe(),
        meta={"eta": ETA_DEFAULT},
    )


def _figure_wavefunction(
    name: str, phase: float, x_range: tuple[float, float], policy: TruncationPolicy, points: int
) -> Dataset:
    state = PhaseState.from_mean_n(25.0, phase)
    stats = quadrature_stats(state)
    xs = np.linspace(x_range[0], x_range[1], points)
    psi = psi_cps_series(state, xs, policy)
    reference = gaussian_density(stats.mean_x, stats.var_x, xs)
    coherent = psi_coherent(CoherentState.matching(state), xs)
    rows = [
        (float(x), value.real, value.imag, abs(value) ** 2, float(ref), coherent_value.real, psi.converged)
        for x, value, ref, coherent_value in zip(xs, psi.values, reference, coherent)
    ]
    return Dataset(
        name,
        ("x", "re", "im", "density", "gaussian_density", "coherent_re", "converged"),
        ("1", "1", "1", "1", "1", "1", "flag"),
        rows,
        policy.describe(),
        meta={
            "n_bar": 25.0,
            "phi": phase,
            "mean_x": stats.mean_x,
            "var_x": stats.var_x,
            "terms_used": psi.terms_used,
        },
    )


def _figure_gaussianity(policy: TruncationPolicy, psi_policy: TruncationPolicy, points: int) -> Dataset:
    def row(n_bar: float) -> tuple:
        along = gaussianity_report(PhaseState.from_mean_n(n_bar, 0.0), policy, psi_policy)
        across = gaussianity_report(PhaseState.from_mean_n(n_bar, math.pi / 2), policy, psi_policy)
        eps_abs = eps_from_mean_n(n_bar)
        small = gaussianity_small_eps(eps_abs) if eps_abs <= 0.3 else math.nan
        return (n_bar, along.g, across.g, small, along.converged and across.converged)

    return Dataset(
        "G",
        ("n_bar", "g_phi0", "g_pi2", "g_small_eps", "converged"),
        ("quanta", "1", "1", "1", "flag"),
        parallel_map(row, mean_n_grid(0.0, 200.0, points)),
        f"stats {policy.describe()}; psi {psi_policy.describe()}",
    )


def figure_dataset(figure: str, *, caption_terms: bool = False, points: int | None = None) -> Dataset:
    """Dataset behind one published figure.

    Args:
        figure: One of :data:`FIGURE_IDS`.
        caption_terms: Use the fixed term counts quoted in the captions instead
            of adaptive truncation.
        points: Sample count (per axis for ``wig``); defaults per figure.
    """
    if figure not in FIGURE_IDS:
        raise ValueError(f"Unknown figure {figure!r}, expected one of {', '.join(FIGURE_IDS)}")
    points = DEFAULT_POINTS[figure] if points is None else points
    if caption_terms and figure in CAPTION_TERMS:
        policy = TruncationPolicy.fixed(CAPTION_TERMS[figure])
        psi_policy = TruncationPolicy.fixed(CAPTION_TERMS[figure], tail_tol=WAVEFUNCTION_POLICY.tail_tol)
    else:
        policy, psi_policy = DEFAULT_POLICY, WAVEFUNCTION_POLICY

    if figure == "sigmin":
        return _figure_sigmin(policy, points)
    if figure == "R":
        return _figure_radius(policy, points)
    if figure == "D":
        return _figure_rs_product(policy, points)
    if figure == "sqz-mean-phi0":
        return _figure_squeezing(policy, points)
    if figure == "psi-vf0":
        return _figure_wavefunction(figure, 0.0, (-10.0, 30.0), psi_policy, points)
    if figure == "psi-pi2":
        return _figure_wavefunction(figure, math.pi / 2, (-3.0, 3.0), psi_policy, points)
    if figure == "G":
        return _figure_gaussianity(DEFAULT_POLICY, psi_policy, points)
    truncation = CAPTION_WIGNER_TRUNCATION if caption_terms else FIGURE_WIGNER_TRUNCATION
    return wigner_dataset(PhaseState.from_mean_n(30.0), (-6.0, 14.0), (-8.0, 8.0), points, truncation, name="wig")
