"""Multipath channel parameter estimation by GA search on a thresholded
frequency-domain least-squares error."""

__version__ = "0.1.0"

from .errors import (
    ConditioningError,
    ConfigError,
    DomainError,
    EstimationError,
    GaRunError,
    NoUsableBandError,
)
from .signals import (
    AwgnSpec,
    ChirpSpec,
    MultipathChannel,
    SampledSignal,
    add_awgn,
    apply_channel,
    generate_chirp,
    window_value,
)
from .spectral import (
    Spectrum,
    ThresholdedSupport,
    build_p,
    dft,
    select_support,
    steering_matrix,
    tau_to_lambda,
)
from .error_functions import (
    ParamVector,
    caef_full,
    caef_thresholded,
    ls_amplitudes,
    raef,
)
from .ga import (
    GaConfig,
    GaResult,
    Gene,
    GeneLayout,
    Individual,
    crossover_one_point,
    decode,
    mutate_bitflip,
    run_ga,
    select_parent,
)
from .estimator import (
    MODE_FULL,
    MODE_HYBRID,
    ChannelEstimate,
    EstimationTask,
    MseReport,
    estimate,
    parameter_mse,
    prepare,
    squared_errors,
)
from .scenario import (
    BenchResult,
    ScenarioConfig,
    make_clean_record,
    make_pulse,
    make_received,
    make_task,
    run_bench,
    sweep_slice,
    trial_seeds,
)

__all__ = [name for name in dir() if not name.startswith("_")]
