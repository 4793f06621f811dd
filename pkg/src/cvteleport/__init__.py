"""Gaussian-state simulator of broadband continuous-variable quantum teleportation."""

from cvteleport._version import __version__
from cvteleport.gaussian import (
    GaussianState,
    PhysicsError,
    VACUUM_VARIANCE,
    TWO_MODE_VACUUM_VARIANCE,
    apply_symplectic,
    beamsplitter,
    coherent_state,
    db_from_variance,
    displace,
    homodyne_condition,
    impure_squeezed_vacuum,
    loss,
    marginal_mean,
    marginal_variance,
    partial_trace,
    rotate,
    sample_homodyne,
    sample_phase_space,
    sample_quadrature,
    squeeze,
    symplectic_eigenvalues,
    tensor,
    total_mean_photons,
    vacuum,
    variance_from_db,
)
from cvteleport.sideband import (
    EntanglementVerdict,
    SidebandPair,
    delta_sq,
    is_entangled,
    noise_power_from_single_mode,
    sidebands_from_single_mode,
)
from cvteleport.teleporter import (
    BellOutcome,
    CascadeStage,
    EprCorrelations,
    TeleportReport,
    TeleporterParams,
    bell_measure,
    cascade,
    coherent_fidelity,
    epr_correlations,
    feed_forward,
    make_epr,
    measure_gains,
    output_variances_pure,
    squeezing_threshold_db,
    teleport_analytic,
    teleport_mc,
)
from cvteleport.tomography import (
    GridSpec,
    PhaseScanTrace,
    QuadratureRecord,
    WignerGrid,
    WignerMoments,
    inverse_radon,
    sample_record,
    spectrum_trace,
    wigner_analytic,
    wigner_moments,
)
from cvteleport.harness import (
    CalibrationResult,
    ConfigError,
    ExperimentConfig,
    ReproRow,
    RunResult,
    benchmark_config,
    calibrate_losses,
    emit_config,
    format_repro_table,
    paper_repro,
    parse_config,
    result_from_json_dict,
    result_to_json_dict,
    run,
    write_report_json,
    write_trace_csv,
    write_wigner_csv,
)
