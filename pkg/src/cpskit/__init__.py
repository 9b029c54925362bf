"""cpskit - Numerical toolkit for coherent phase states."""

from .observables import (
    ETA_DEFAULT,
    EtaFit,
    QuadratureStats,
    coherent_stats,
    fit_eta,
    quadrature_means,
    quadrature_stats,
    radius_R,
    radius_R_interp,
    rs_product,
    rs_product_alt,
    rs_product_approx,
    sigma_x_min,
    sigma_x_min_approx,
    sigma_x_min_series,
    sigma_x_phi0_approx,
    sigma_x_sqzvac,
    sigma_x_sqzvac_asymptotic,
    thermal_fidelity,
    thermal_stats,
)
from .quadrature import QuadratureCoverageWarning, QuadratureSpec
from .series import (
    DEFAULT_POLICY,
    InvalidPolicyError,
    NeumaierSum,
    SeriesNotConvergedWarning,
    SeriesResult,
    TruncationPolicy,
    clear_series_cache,
    s1,
    s2,
    sum_series,
    sum_terms,
)
from .states import (
    CoherentState,
    DomainError,
    PhaseState,
    eps_from_mean_n,
    evolve,
    mean_n,
    photon_number_distribution,
)
from .wavefunction import (
    WAVEFUNCTION_POLICY,
    DensityMoments,
    ExpansionRangeWarning,
    GaussianityResult,
    PsiSeries,
    WavefunctionSample,
    density_moments_quadrature,
    density_peak,
    gaussian_density,
    gaussianity_G,
    gaussianity_report,
    gaussianity_small_eps,
    oscillator_eigenfunction_sequence,
    psi_coherent,
    psi_cps,
    psi_cps_series,
    wavefunction_samples,
)
from .wigner import (
    DEFAULT_TRUNCATION,
    EmptyGridError,
    NegativityReport,
    PhasePoint,
    WignerGrid,
    WignerTruncation,
    marginal_q,
    negativity_scan,
    weyl_wigner_symbol,
    wigner_coherent,
    wigner_cps,
    wigner_cps_series,
    wigner_from_wavefunction,
    wigner_grid,
    wigner_quadrature_oracle,
    wigner_section,
    wigner_thermal,
    wigner_thermal_series,
)

__version__ = "0.1.0"

__all__ = [
    "CoherentState",
    "DEFAULT_POLICY",
    "DEFAULT_TRUNCATION",
    "DensityMoments",
    "DomainError",
    "ETA_DEFAULT",
    "EmptyGridError",
    "EtaFit",
    "ExpansionRangeWarning",
    "GaussianityResult",
    "InvalidPolicyError",
    "NegativityReport",
    "NeumaierSum",
    "PhasePoint",
    "PhaseState",
    "PsiSeries",
    "QuadratureCoverageWarning",
    "QuadratureSpec",
    "QuadratureStats",
    "SeriesNotConvergedWarning",
    "SeriesResult",
    "TruncationPolicy",
    "WAVEFUNCTION_POLICY",
    "WavefunctionSample",
    "WignerGrid",
    "WignerTruncation",
    "clear_series_cache",
    "coherent_stats",
    "density_moments_quadrature",
    "density_peak",
    "eps_from_mean_n",
    "evolve",
    "fit_eta",
    "gaussian_density",
    "gaussianity_G",
    "gaussianity_report",
    "gaussianity_small_eps",
    "marginal_q",
    "mean_n",
    "negativity_scan",
    "oscillator_eigenfunction_sequence",
    "photon_number_distribution",
    "psi_coherent",
    "psi_cps",
    "psi_cps_series",
    "quadrature_means",
    "quadrature_stats",
    "radius_R",
    "radius_R_interp",
    "rs_product",
    "rs_product_alt",
    "rs_product_approx",
    "s1",
    "s2",
    "sigma_x_min",
    "sigma_x_min_approx",
    "sigma_x_min_series",
    "sigma_x_phi0_approx",
    "sigma_x_sqzvac",
    "sigma_x_sqzvac_asymptotic",
    "sum_series",
    "sum_terms",
    "thermal_fidelity",
    "thermal_stats",
    "wavefunction_samples",
    "weyl_wigner_symbol",
    "wigner_coherent",
    "wigner_cps",
    "wigner_cps_series",
    "wigner_from_wavefunction",
    "wigner_grid",
    "wigner_quadrature_oracle",
    "wigner_section",
    "wigner_thermal",
    "wigner_thermal_series",
    "__version__",
]
