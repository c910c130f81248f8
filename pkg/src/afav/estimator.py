"""scikit-learn style wrappers around the verifier machines.

A verifier is a fixed machine, so ``fit`` only builds it; nothing is
learned from labels. ``predict`` returns 1 for accept, 0 for reject and -1
for inconclusive, and ``decision_function`` returns the exact maximum path
probability. ``predict_proba`` is a float rendering for sklearn tooling.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from .engine import run_many
from .errors import ParameterError
from .gadgets import PolynomialSpec
from .machine import MachineSpec
from .protocols import (
    UnaryLanguageSpec,
    UnaryVerifierConfig,
    build_subsetsum_verifier,
    build_unary_verifier,
    build_upoly_verifier,
    build_usquare_verifier,
    unary_prune_hook,
)
from .scalars import RationalInterval
from .validation import as_labels, as_words
from .verification import ACCEPT, REJECT, check_epsilon, decide

__all__ = ["MachineVerifier", "SubsetSumVerifier", "USquareVerifier", "UPolyVerifier", "UnaryVerifier"]

_LABEL = {ACCEPT: 1, REJECT: 0}


class _VerifierBase(ClassifierMixin, BaseEstimator):
    _unary_symbol = None

    def _build(self) -> MachineSpec:
        raise NotImplementedError

    def _epsilon(self, machine) -> Fraction:
        return Fraction(1, 3) if self.epsilon is None else self.epsilon

    def _prune_hook(self, machine):
        return None

    def fit(self, X=None, y=None):
        """Build the machine. ``X``/``y`` are checked for shape only."""
        machine = self._build()
        self.epsilon_ = check_epsilon(self._epsilon(machine))
        self.machine_ = machine
        self.classes_ = np.array([0, 1])
        if X is not None:
            words = as_words(X, machine, self._unary_symbol)
            if y is not None:
                as_labels(y, len(words))
        return self

    def verify(self, X) -> list:
        """One :class:`VerificationResult` per input, in input order."""
        check_is_fitted(self, "machine_")
        words = as_words(X, self.machine_, self._unary_symbol)
        runs = run_many(
            self.machine_,
            words,
            dedup=self.dedup,
            prune=self._prune_hook(self.machine_),
            budget=self.budget,
            threads=self.threads,
        )
        return [decide(runs[w], self.epsilon_) for w in words]

    def decision_function(self, X) -> np.ndarray:
        """Exact maximum path probability per input (object array)."""
        values = [r.max_probability for r in self.verify(X)]
        out = np.empty(len(values), dtype=object)
        out[:] = values
        return out

    def predict(self, X) -> np.ndarray:
        return np.array([_LABEL.get(r.decision, -1) for r in self.verify(X)], dtype=np.int64)

    def predict_proba(self, X) -> np.ndarray:
        """``[1 - p, p]`` with ``p`` the (lower bound of the) maximum path probability, as floats."""
        out = []
        for r in self.verify(X):
            p = r.max_probability
            p = p.lo if isinstance(p, RationalInterval) else Fraction(p)
            out.append((float(1 - p), float(p)))
        return np.array(out, dtype=float).reshape(-1, 2)

    def score(self, X, y, sample_weight=None):
        """Fraction of inputs whose decision matches the membership label."""
        return super().score(X, as_labels(y, len(as_words(X, self.machine_, self._unary_symbol))), sample_weight)


class MachineVerifier(_VerifierBase):
    """Wraps an arbitrary :class:`MachineSpec` (e.g. loaded from a file)."""

    def __init__(self, machine=None, epsilon=None, prune=None, dedup=True, budget=None, threads=1):
        self.machine = machine
        self.epsilon = epsilon
        self.prune = prune
        self.dedup = dedup
        self.budget = budget
        self.threads = threads

    def _build(self):
        if not isinstance(self.machine, MachineSpec):
            raise ParameterError("MachineVerifier needs a MachineSpec")
        return self.machine

    def _prune_hook(self, machine):
        return self.prune


class SubsetSumVerifier(_VerifierBase):
    """Subset-sum verifier; ``epsilon`` defaults to ``1/(2t+1)``."""

    def __init__(self, t=1, epsilon=None, dedup=True, budget=None, threads=1):
        self.t = t
        self.epsilon = epsilon
        self.dedup = dedup
        self.budget = budget
        self.threads = threads

    def _build(self):
        return build_subsetsum_verifier(self.t)

    def _epsilon(self, machine):
        return Fraction(1, 2 * self.t + 1) if self.epsilon is None else self.epsilon


class USquareVerifier(SubsetSumVerifier):
    """Verifier for ``{0^(i^2)}``; inputs may be words or lengths."""

    _unary_symbol = "0"

    def _build(self):
        return build_usquare_verifier(self.t)


class UPolyVerifier(_VerifierBase):
    """Verifier for ``{0^P(i)}``; ``coefficients`` is ``(c0, ..., cd)``."""

    _unary_symbol = "0"

    def __init__(self, coefficients=(0, 0, 1), t=1, epsilon=None, dedup=True, budget=None, threads=1):
        self.coefficients = coefficients
        self.t = t
        self.epsilon = epsilon
        self.dedup = dedup
        self.budget = budget
        self.threads = threads

    def _build(self):
        P = self.coefficients
        if isinstance(P, str):
            P = PolynomialSpec.parse(P)
        return build_upoly_verifier(P, self.t)

    def _epsilon(self, machine):
        return Fraction(1, 2 * self.t + 1) if self.epsilon is None else self.epsilon


class UnaryVerifier(_VerifierBase):
    """Verifier for any unary language; ``epsilon`` defaults to the base's error target."""

    _unary_symbol = "a"

    def __init__(self, language=None, k=None, epsilon=None, prune=False, dedup=True, budget=None, threads=1):
        self.language = language
        self.k = k
        self.epsilon = epsilon
        self.prune = prune
        self.dedup = dedup
        self.budget = budget
        self.threads = threads

    def _build(self):
        if not isinstance(self.language, UnaryLanguageSpec):
            raise ParameterError("UnaryVerifier needs a UnaryLanguageSpec")
        self.config_ = UnaryVerifierConfig(self.language, self.k)
        return build_unary_verifier(self.config_)

    def _epsilon(self, machine):
        return self.config_.target if self.epsilon is None else self.epsilon

    def _prune_hook(self, machine):
        return unary_prune_hook(self.language.base) if self.prune else None
