"""Jet-level checks for F-manifold, Saito and CV chart data."""

from ._cvforge import (
    Chart,
    CvforgeError,
    Report,
    ReportEntry,
    bound_k0,
    bound_k1,
    canonical,
    check_connection,
    check_cv,
    check_higgs_pair,
    check_saito,
    curvature_discrepancy,
    example_frobenius2,
    example_rank1,
    example_semisimple,
    rho,
    run_command,
    sample_nilpotent_cone,
    sectional_curvature,
    sinh_gordon_jet,
    sinh_gordon_unfolded,
    solve_formal_iso,
)

__all__ = [
    "Chart",
    "CvforgeError",
    "Report",
    "ReportEntry",
    "bound_k0",
    "bound_k1",
    "canonical",
    "check_connection",
    "check_cv",
    "check_higgs_pair",
    "check_saito",
    "curvature_discrepancy",
    "example_frobenius2",
    "example_rank1",
    "example_semisimple",
    "rho",
    "run_command",
    "sample_nilpotent_cone",
    "sectional_curvature",
    "sinh_gordon_jet",
    "sinh_gordon_unfolded",
    "solve_formal_iso",
]
