"""Exact simulation of affine finite automata used as nondeterministic verifiers."""

from .affine import (
    AffineOperator,
    AffineVector,
    apply,
    basis_vector,
    identity,
    tensor,
    tensor_vectors,
    validate_operator,
    weight,
)
from .engine import DEFAULT_BUDGET, Enumeration, PathOutcome, enumerate_paths, run_many
from .errors import (
    AfavError,
    ConfigurationError,
    InputError,
    InvariantViolation,
    MachineFormatError,
    ParameterError,
    PrecisionError,
    ResourceError,
    SerializationError,
    StructuralError,
)
from .estimator import MachineVerifier, SubsetSumVerifier, UnaryVerifier, UPolyVerifier, USquareVerifier
from .gadgets import PolynomialSpec, polynomial_gadget, square_gadget
from .machine import LEFT_MARKER, RIGHT_MARKER, Configuration, MachineSpec, step
from .protocols import (
    UnaryLanguageSpec,
    UnaryVerifierConfig,
    alpha_exact,
    alpha_interval,
    build_subsetsum_verifier,
    build_unary_verifier,
    build_upoly_verifier,
    build_usquare_verifier,
)
from .scalars import RationalInterval, format_scalar, parse_scalar
from .textformat import emit_machine, load_machine, parse_machine
from .verification import ACCEPT, INCONCLUSIVE, REJECT, VerificationResult, decide, verify

__all__ = [
    "AffineOperator",
    "AffineVector",
    "apply",
    "basis_vector",
    "identity",
    "tensor",
    "tensor_vectors",
    "validate_operator",
    "weight",
    "DEFAULT_BUDGET",
    "Enumeration",
    "PathOutcome",
    "enumerate_paths",
    "run_many",
    "AfavError",
    "ConfigurationError",
    "InputError",
    "InvariantViolation",
    "MachineFormatError",
    "ParameterError",
    "PrecisionError",
    "ResourceError",
    "SerializationError",
    "StructuralError",
    "MachineVerifier",
    "SubsetSumVerifier",
    "UnaryVerifier",
    "UPolyVerifier",
    "USquareVerifier",
    "PolynomialSpec",
    "polynomial_gadget",
    "square_gadget",
    "LEFT_MARKER",
    "RIGHT_MARKER",
    "Configuration",
    "MachineSpec",
    "step",
    "UnaryLanguageSpec",
    "UnaryVerifierConfig",
    "alpha_exact",
    "alpha_interval",
    "build_subsetsum_verifier",
    "build_unary_verifier",
    "build_upoly_verifier",
    "build_usquare_verifier",
    "RationalInterval",
    "format_scalar",
    "parse_scalar",
    "emit_machine",
    "load_machine",
    "parse_machine",
    "ACCEPT",
    "INCONCLUSIVE",
    "REJECT",
    "VerificationResult",
    "decide",
    "verify",
]

__version__ = "0.1.0"
