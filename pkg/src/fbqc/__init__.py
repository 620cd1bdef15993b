"""Fusion network simulator: stabilizer algebra, lattice builders, decoding,
and Monte Carlo threshold estimation for fusion-based quantum computation."""

from .pauli import (
    ErrorClass,
    GeneratorSet,
    Outcome,
    OutcomeVector,
    PauliOp,
    canonicalize,
    centralizer_in,
    classify_error,
    commutes,
    decompose,
    flipped_outcomes,
    intersection,
    multiply,
    output_stabilizers,
)

__version__ = "0.1.0"

__all__ = [
    "ErrorClass",
    "GeneratorSet",
    "Outcome",
    "OutcomeVector",
    "PauliOp",
    "canonicalize",
    "centralizer_in",
    "classify_error",
    "commutes",
    "decompose",
    "flipped_outcomes",
    "intersection",
    "multiply",
    "output_stabilizers",
    "__version__",
]
