"""Operators on l2, their finite sections and P-tests relative to transformed bases."""
from .basis import (
    BasisSpec,
    ConjugationSide,
    block_hadamard_unitary,
    block_rotation_products,
    commutes,
    conjugate,
    inverse_p_check,
    p_test_relative,
)
from .operators import OperatorKind, OperatorSpec, apply_operator, diagonal_bounds, truncate, verify_witness_prefix
from .presets import Preset, get_preset, load_presets, preset_names
from .sequences import SequenceGen, get_sequence

__all__ = [
    "BasisSpec",
    "ConjugationSide",
    "OperatorKind",
    "OperatorSpec",
    "Preset",
    "SequenceGen",
    "apply_operator",
    "block_hadamard_unitary",
    "block_rotation_products",
    "commutes",
    "conjugate",
    "diagonal_bounds",
    "get_preset",
    "get_sequence",
    "inverse_p_check",
    "load_presets",
    "p_test_relative",
    "preset_names",
    "truncate",
    "verify_witness_prefix",
]
