"""Invariant EKF for legged robots on moving ground."""

from ._niekf import (
    adjoint,
    biped_leg_fk,
    biped_leg_jacobian,
    cli,
    compare,
    default_config,
    exp_se23,
    log_se23,
    matrix_A,
    observability,
    phi_blocks,
    process_f,
    propagate_mean,
    zmatrix,
)

__all__ = [
    "adjoint",
    "biped_leg_fk",
    "biped_leg_jacobian",
    "cli",
    "compare",
    "default_config",
    "exp_se23",
    "log_se23",
    "matrix_A",
    "observability",
    "phi_blocks",
    "process_f",
    "propagate_mean",
    "zmatrix",
]
