"""Python bindings for the Shared-PIM data movement simulator."""

from ._core import (
    ComputeParams,
    CopyTargets,
    FabricConfig,
    Mechanism,
    MechanismParams,
    Platform,
    PowerModel,
    SimError,
    TimingParams,
    WorkloadDag,
    aap_latency,
    area_overhead_percent,
    build_bfs,
    build_dfs,
    build_mm,
    build_ntt,
    build_pmm,
    build_wide_add,
    build_wide_mul,
    calibrate_plut_op,
    calibrate_power,
    compare,
    ddr3_1600_11,
    ddr4_2400t_17,
    load_dag,
    run_metrics,
    save_dag,
    tracking_storage,
)

__all__ = [
    "ComputeParams",
    "CopyTargets",
    "FabricConfig",
    "Mechanism",
    "MechanismParams",
    "Platform",
    "PowerModel",
    "SimError",
    "TimingParams",
    "WorkloadDag",
    "aap_latency",
    "area_overhead_percent",
    "build_bfs",
    "build_dfs",
    "build_mm",
    "build_ntt",
    "build_pmm",
    "build_wide_add",
    "build_wide_mul",
    "calibrate_plut_op",
    "calibrate_power",
    "compare",
    "ddr3_1600_11",
    "ddr4_2400t_17",
    "load_dag",
    "run_metrics",
    "save_dag",
    "tracking_storage",
]
