"""Two-cell dynamic-TDD massive MIMO simulator with repeater gain optimization."""

from ._version import __version__
from .channels import ChannelSet, LinkBetas, dump_channel_set, link_betas, sample_channel_set, trial_rng
from .experiments import (
    CdfResult,
    SweepResult,
    run_cdf,
    run_position_sweep,
    run_single,
    write_results,
)
from .gain_optimizer import (
    AlternatingResult,
    GainOptResult,
    SinrPolyCoeffs,
    alternating_optimize,
    dl_poly_coeffs,
    optimize_amplification,
    optimize_gain,
    rational_sinr,
    sinr_derivative_numerator,
    stationary_points,
    ul_poly_coeffs,
)
from .link_metrics import LinkReport, se_from_sinr, sinr_dl, sinr_ul
from .scenario import (
    Geometry,
    LargeScaleModel,
    SystemParams,
    build_line_scenario,
    calibrate_tx_snr,
    default_params,
    large_scale_coeff,
    load_config,
    params_from_config,
    with_repeater_position,
)
from .system_model import (
    BeamformerState,
    RepeaterGain,
    composite_dl_channel,
    composite_inter_ap,
    composite_inter_user,
    composite_ul_channel,
    max_amplification,
    max_power_control,
    mr_beamformers,
    mr_state,
    repeater_input_power,
)

__all__ = [name for name in dir() if not name.startswith("_")]
