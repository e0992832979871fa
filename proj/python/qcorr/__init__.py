"""Non-commutativity measures of bipartite quantum correlations."""

from ._qcorr import (
    ConfigError,
    DimensionError,
    IoError,
    SamplerError,
    ValidityError,
    affine_kraus,
    apply_local,
    basis_dependence_probe,
    bell_diagonal_D,
    bell_diagonal_state,
    decohering_kraus,
    guo_D,
    isotropic_kraus,
    isotropic_scaling_check,
    minimize_d,
    random_bell_diagonal,
    random_mixed_state,
    random_pure_state,
    random_unitary,
    validate_state,
)

__all__ = [
    "ConfigError",
    "DimensionError",
    "IoError",
    "SamplerError",
    "ValidityError",
    "affine_kraus",
    "apply_local",
    "basis_dependence_probe",
    "bell_diagonal_D",
    "bell_diagonal_state",
    "decohering_kraus",
    "guo_D",
    "isotropic_kraus",
    "isotropic_scaling_check",
    "minimize_d",
    "random_bell_diagonal",
    "random_mixed_state",
    "random_pure_state",
    "random_unitary",
    "validate_state",
]
