"""Exact simulator and verification harness for generalized and noisy
order finding, with coherence and decoherence accounting."""

from .numerics import (
    DimensionLimitError,
    EigenSystem,
    hermitian_eigensystem,
    psd_sqrt,
    tensor_product,
    trace_product,
)
from .shor import (
    Amplitudes,
    Hadamard,
    LocalUnitary,
    NotCoprimeError,
    PseudoPure,
    ShorInstance,
    continued_fraction_order,
    find_order,
    initial_amplitudes,
    inverse_qft,
    local_unitary_amplitudes,
    modexp_permutation,
    modexp_unitary,
    order_eigenvector,
    outcome_distribution,
    prepare_initial,
    run_pure_pipeline,
    success_probability,
)
from .coherence import (
    ComposedChannel,
    DepolarizingChannel,
    KrausChannel,
    MeasurementChannel,
    OperatorMonotoneFunction,
    QuantumChannel,
    UnitaryChannel,
    channel_coherence,
    depolarizing_channel,
    measurement_channel,
    morozova_chentsov,
    noisy_outcome_distribution,
    noisy_shor_channel,
    pure_channel_coherence,
    ramp_phases,
    shor_unitary_channel,
    skew_information,
    sld_function,
    wy_channel_coherence,
    wy_function,
)
from .theorems import (
    TheoremReport,
    amplitude_groups,
    coherence_closed_form,
    collision_bounds,
    collision_probability,
    decoherence_closed_form,
    decoherence_success_gap,
    euler_phi,
    local_unitary_forms,
    noisy_forms,
    noisy_success_lower_bound,
    pseudo_pure_forms,
    pseudo_pure_success,
    success_lower_bound,
    success_squared_upper_bound,
)
from .verification import run_suite

__version__ = "0.1.0"
