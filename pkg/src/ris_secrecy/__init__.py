"""Secrecy-outage evaluation for active-RIS-assisted NOMA downlinks.

Two independent engines compute the same physical quantities: `analytic`
holds the closed forms (cascaded-channel statistics, outage theorems,
high-budget asymptotes, diversity slopes), `montecarlo` re-derives them
from first-principles channel draws.  `model` carries the shared system
description and exact SINRs, `budget` the equal-total-power bookkeeping,
`specfun` the Bessel/quadrature kernel, and `config`/`cli` the sweep and
validation harness.
"""

from .analytic import (
    DegenerateCurveError,
    SopEstimate,
    UnsupportedScenarioError,
    cdf_user_f,
    cdf_user_n_ipsic,
    cdf_user_n_psic,
    default_table,
    diversity_order,
    pdf_eve_f,
    pdf_eve_n_ipsic,
    pdf_eve_n_psic,
    pdf_internal_f_to_n,
    scenario_rate,
    secrecy_throughput,
    sop,
    sop_asymptotic,
    sop_curve_fixed_eavesdropper,
    sop_external_f,
    sop_external_n,
    sop_internal,
    sop_system_external,
)
from .budget import BudgetInfeasibleError, PowerBudget, solve_bs_power
from .config import (
    ConfigError,
    ScenarioConfig,
    SweepSpec,
    db_to_linear,
    dbm_to_watts,
    list_presets,
    load_config,
    load_preset,
    parse_config,
    realize_point,
)
from .model import (
    SIC_MODES,
    DerivedConstants,
    SystemParams,
    derive,
    mean_channel_gain,
    sinr_eve_f,
    sinr_eve_n,
    sinr_internal_f_to_n,
    sinr_user_f,
    sinr_user_n,
)
from .montecarlo import (
    ChannelDraw,
    McResult,
    empirical_sinr_cdf,
    empirical_sinr_cdfs,
    estimate_sop,
    estimate_sop_grid,
    estimate_throughput,
    sample_draw,
    sinr_samples,
)
from .specfun import (
    QuadratureTable,
    UnderflowWarning,
    bessel_k,
    gauss_laguerre,
    kdist_cdf,
    kdist_logsf,
    kdist_pdf,
    kdist_sf,
    ln_gamma,
    log_bessel_k,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetInfeasibleError",
    "ChannelDraw",
    "ConfigError",
    "DegenerateCurveError",
    "DerivedConstants",
    "McResult",
    "PowerBudget",
    "QuadratureTable",
    "SIC_MODES",
    "ScenarioConfig",
    "SopEstimate",
    "SweepSpec",
    "SystemParams",
    "UnderflowWarning",
    "UnsupportedScenarioError",
    "bessel_k",
    "cdf_user_f",
    "cdf_user_n_ipsic",
    "cdf_user_n_psic",
    "db_to_linear",
    "dbm_to_watts",
    "default_table",
    "derive",
    "diversity_order",
    "empirical_sinr_cdf",
    "empirical_sinr_cdfs",
    "estimate_sop",
    "estimate_sop_grid",
    "estimate_throughput",
    "gauss_laguerre",
    "kdist_cdf",
    "kdist_logsf",
    "kdist_pdf",
    "kdist_sf",
    "list_presets",
    "ln_gamma",
    "load_config",
    "load_preset",
    "log_bessel_k",
    "mean_channel_gain",
    "parse_config",
    "pdf_eve_f",
    "pdf_eve_n_ipsic",
    "pdf_eve_n_psic",
    "pdf_internal_f_to_n",
    "realize_point",
    "sample_draw",
    "scenario_rate",
    "secrecy_throughput",
    "sinr_eve_f",
    "sinr_eve_n",
    "sinr_internal_f_to_n",
    "sinr_samples",
    "sinr_user_f",
    "sinr_user_n",
    "solve_bs_power",
    "sop",
    "sop_asymptotic",
    "sop_curve_fixed_eavesdropper",
    "sop_external_f",
    "sop_external_n",
    "sop_internal",
    "sop_system_external",
    "__version__",
]
