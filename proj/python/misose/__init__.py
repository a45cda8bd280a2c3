"""Ergodic secrecy capacity of the MISOSE Rayleigh wiretap channel."""

from ._core import (
    ChannelModel,
    EvalMethod,
    Method,
    OptimizerConfig,
    OptimizerTrace,
    OrderCheckReport,
    PowerAllocation,
    ProbeSizes,
    RateEstimate,
    Side,
    SweepRow,
    Witness,
    __version__,
    asymptote_high_snr,
    asymptote_large_nt,
    cm_derivative,
    ergodic_log_rate_mc,
    ergodic_log_rate_quadrature,
    grad_estimate,
    lt_order_gap,
    majorization_slack,
    majorizes,
    mgf_quadratic_form,
    objective_value,
    optimize_allocation,
    project_to_simplex,
    quadratic_form,
    random_allocation,
    sample_channel,
    secrecy_capacity,
    secrecy_rate_coupled_mc,
    secrecy_rate_direct_mc,
    snr_db_to_linear,
    sweep_antennas,
    sweep_snr,
    verify_lemma_lt_implies_expectation,
    verify_suite,
    write_csv,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
