"""Input coercion shared by the estimator wrappers."""

from __future__ import annotations

from typing import Optional

import numpy as np

from .errors import InputError
from .machine import MachineSpec


def as_words(X, machine: MachineSpec, unary_symbol: Optional[str] = None) -> list:
    """Turn ``X`` into a list of input words for ``machine``.

    ``X`` may be a string, a 1-D sequence of strings, or (for unary
    machines, where ``unary_symbol`` is given) non-negative lengths. A
    2-D array with a single column is accepted and flattened.
    """
    if isinstance(X, str):
        X = [X]
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise InputError(f"expected a 1-D collection of inputs, got shape {arr.shape}")
    words = []
    for item in arr.tolist():
        if isinstance(item, str):
            word = item
        elif unary_symbol is not None and isinstance(item, (int, np.integer)) and not isinstance(item, bool):
            if item < 0:
                raise InputError(f"input lengths must be non-negative, got {item}")
            word = unary_symbol * int(item)
        else:
            raise InputError(f"inputs must be strings, got {item!r}")
        machine.check_word(word)
        words.append(word)
    return words


def as_labels(y, n: int) -> np.ndarray:
    """Membership labels as an int array of 0/1 of length ``n``."""
    arr = np.asarray(y).ravel()
    if arr.shape[0] != n:
        raise InputError(f"got {arr.shape[0]} labels for {n} inputs")
    if not np.isin(arr, (0, 1, True, False)).all():
        raise InputError("labels must be 0/1 membership flags")
    return arr.astype(np.int64)
