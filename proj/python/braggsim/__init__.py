"""Bragg-waveguide pump filter and four-wave-mixing pair source simulator."""

from ._core import (
    DomainError,
    GratingSpec,
    InvalidArgument,
    NonlinearParams,
    design_periods,
    paper_grating,
    paper_nonlinear,
    rejection_db_for_periods,
    roundtrip_config,
    run,
    spont_rate,
    stimulated_idler_power,
    stopband_center,
    transmission_spectrum,
)

__all__ = [
    "DomainError",
    "GratingSpec",
    "InvalidArgument",
    "NonlinearParams",
    "design_periods",
    "paper_grating",
    "paper_nonlinear",
    "rejection_db_for_periods",
    "roundtrip_config",
    "run",
    "spont_rate",
    "stimulated_idler_power",
    "stopband_center",
    "transmission_spectrum",
]
