"""Selective quantum state routing in cavity-QED star networks."""

from ._cqroute import (
    ConfigError,
    Cscq,
    DegenerateQubit,
    DimensionGuard,
    EigenFailure,
    Error,
    EvolutionFailure,
    ExcessiveTruncation,
    Mode,
    ModeKind,
    NetworkConfig,
    NoTransferPeak,
    OracleComparison,
    ParseError,
    TernarySet,
    TransferReport,
    build_coupling_matrix,
    compare_with_oracle,
    default_horizon,
    emit_config,
    eigenvalues,
    evolve,
    figure_config,
    figure_ids,
    mean_photon_number,
    mode_count,
    mode_ordinal,
    parse_config,
    propagator,
    selectivity_report,
    standard_set,
    sweep,
    transfer_fidelity,
    __version__,
)
