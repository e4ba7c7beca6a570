"""Python interface to the forward-model solvability and security toolkit."""

from ota_inverse._core import (
    BlockMeta,
    ComputationError,
    CondEstimate,
    CondNumber,
    ConcentrationRow,
    DofMode,
    DomainError,
    Error,
    EstimationError,
    FadingKind,
    FadingSet,
    GradientSet,
    IoError,
    LinearOperator,
    ModelKind,
    ParameterError,
    SecurityReport,
    SecurityRow,
    SeedSpec,
    ShapeError,
    SolvabilityReport,
    SolvabilityRow,
    SweepRow,
    SweepSpec,
    SystemParams,
    TailBound,
    approximation_probability,
    build_eaves_per_user,
    build_eaves_shared,
    build_per_user,
    build_shared,
    check_meshed_security,
    check_tbc,
    chi2_cdf,
    chi2_sf,
    condition_number,
    estimate_expected_cond,
    estimate_fading_cond,
    fact1_bounds,
    mean_target,
    noise_stream,
    run_concentration,
    run_fig1,
    run_paired_security,
    run_solvability_sweep,
    sample_gaussian,
    sample_gaussian_fading,
    singular_values,
    solvability_bound_per_user,
    solvability_bound_shared,
    sparsify,
    tail_bound,
    transmit,
    write_concentration_csv,
    write_fig1_csv,
    write_security_csv,
    write_solvability_csv,
    z_value,
)

__all__ = [name for name in dir() if not name.startswith("_")]
