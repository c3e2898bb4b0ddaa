"""Brute-force dense eigensolver, independent from the power iteration, used as a test oracle."""

from typing import Literal

import numpy as np

from fsn_selector.spectral.perron import PerronPair


def dense_perron_pair(matrix: np.ndarray, kind: Literal["min", "max"]) -> PerronPair:
    """Return the real eigenpair with the smallest ("min") or largest ("max") real part.

    The eigenvector is sign-aligned to a positive sum and normalized.
    """
    values, vectors = np.linalg.eig(matrix)
    index = int(np.argmin(values.real) if kind == "min" else np.argmax(values.real))
    eigenvalue = float(values[index].real)
    v = vectors[:, index].real
    if v.sum() < 0:
        v = -v
    v = v / np.linalg.norm(v)
    residual = float(np.linalg.norm(matrix @ v - eigenvalue * v))
    return PerronPair(eigenvalue, v, residual, 0)


def direction_gap(u: np.ndarray, v: np.ndarray) -> float:
    """Distance between two unit vectors after sign alignment."""
    return float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))
