"""Builders for complete verifier machines."""

from .subsetsum import build_subsetsum_verifier, subsetsum_path_probability
from .unary import (
    UnaryLanguageSpec,
    UnaryVerifierConfig,
    alpha_exact,
    alpha_interval,
    build_unary_verifier,
    completeness_bound,
    default_k,
    error_target,
    load_language_spec,
    parse_language_spec,
    soundness_bound,
    unary_prune_hook,
)
from .unary_poly import build_upoly_verifier, build_usquare_verifier, check_amplification

__all__ = [
    "build_subsetsum_verifier",
    "subsetsum_path_probability",
    "build_usquare_verifier",
    "build_upoly_verifier",
    "check_amplification",
    "UnaryLanguageSpec",
    "UnaryVerifierConfig",
    "alpha_exact",
    "alpha_interval",
    "build_unary_verifier",
    "completeness_bound",
    "soundness_bound",
    "default_k",
    "error_target",
    "parse_language_spec",
    "load_language_spec",
    "unary_prune_hook",
]
