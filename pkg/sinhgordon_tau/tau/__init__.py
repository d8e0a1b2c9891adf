"""
tau(t; nu, lambda): action integrals, the nu-term, exact identities and fits.
"""
from .action import (
    Estimate,
    action_nu_derivative_smallt,
    action_S,
    action_S_direct,
    action_S_estimate,
    action_smallt_analytic,
    amplitude_from_smallt_limits,
    j_difference_closed,
    j_difference_quadrature,
    nu_derivative_estimate,
    nu_derivative_term,
    nu_term_smallt_analytic,
)
from .fit import PowerLawFit, ScalingFit, fit_connection, fit_power_law, fit_scaling_limit
from .identity import (
    hamiltonian_identity_residual,
    log_cosh,
    log_tau_direct,
    tau_direct,
    tau_exact,
    tau_series,
)

__all__ = [
    "Estimate",
    "PowerLawFit",
    "ScalingFit",
    "action_S",
    "action_S_direct",
    "action_S_estimate",
    "action_nu_derivative_smallt",
    "action_smallt_analytic",
    "amplitude_from_smallt_limits",
    "fit_connection",
    "fit_power_law",
    "fit_scaling_limit",
    "hamiltonian_identity_residual",
    "j_difference_closed",
    "j_difference_quadrature",
    "log_cosh",
    "log_tau_direct",
    "nu_derivative_estimate",
    "nu_derivative_term",
    "nu_term_smallt_analytic",
    "tau_direct",
    "tau_exact",
    "tau_series",
]
