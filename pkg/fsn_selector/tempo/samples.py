"""
Relative tempo samples, computed from observed state-rates only.

Continuous time:  g_ij(t) = |ẋ_i(t)| / |ẋ_j(t)|.
Discrete time:    g_ij(k) = |x_i(k) - x_i(k-1)| / |x_j(k) - x_j(k-1)|.

Asymptotically, g_ij tends to v_i / v_j, where v is the Perron vector of the network.
"""

import csv
import io
from pathlib import Path
from typing import Iterable

import numpy as np

from fsn_selector import param
from fsn_selector.dynamics import Trajectory
from fsn_selector.errors import NumericalError, ValidationError
from fsn_selector.spectral import Mode


class ConvergedDynamicsError(NumericalError):
    """Error raised when a tempo denominator vanishes: dynamics already converged, sample earlier."""


def _ratio(numerator: float, denominator: float) -> float:
    if not abs(denominator) > param.UNDERFLOW:
        raise ConvergedDynamicsError(
            f"State-rate {denominator!r} is too small to sample a relative tempo; "
            "dynamics already converged, sample earlier."
        )
    return abs(numerator) / abs(denominator)


def _check_mode(traj: Trajectory, mode: Mode) -> None:
    if traj.mode is not mode:
        raise ValidationError(f"Expected a {mode} trajectory, got a {traj.mode} one.")


def tempo_sample_continuous(traj: Trajectory, t_index: int, i: int, j: int) -> float:
    _check_mode(traj, Mode.CONTINUOUS)
    if i == j:
        return 1.0
    return _ratio(traj.rates[t_index, i - 1], traj.rates[t_index, j - 1])


def tempo_sample_discrete(traj: Trajectory, k: int, i: int, j: int) -> float:
    _check_mode(traj, Mode.DISCRETE)
    if k < 1:
        raise ValidationError(f"State increments are only defined from k=1 (got k={k}).")
    if i == j:
        return 1.0
    return _ratio(traj.rates[k, i - 1], traj.rates[k, j - 1])


def tempo_sample(traj: Trajectory, index: int, i: int, j: int) -> float:
    match traj.mode:
        case Mode.CONTINUOUS:
            return tempo_sample_continuous(traj, index, i, j)
        case Mode.DISCRETE:
            return tempo_sample_discrete(traj, index, i, j)
        case _:
            raise NotImplementedError(traj.mode)


def subset_tempo(traj: Trajectory, v1: Iterable[int], v2: Iterable[int], at: int) -> float:
    """Relative tempo between two agent subsets: ‖rates on v1‖ / ‖rates on v2‖ (Euclidean norms)."""
    v1 = sorted(set(v1))
    v2 = sorted(set(v2))
    if not v1 or not v2:
        raise ValidationError("Agent subsets must not be empty.")
    if v1 == v2:
        return 1.0
    rates = traj.rates[at]
    return _ratio(
        float(np.linalg.norm(rates[np.array(v1) - 1])), float(np.linalg.norm(rates[np.array(v2) - 1]))
    )


def tempo_series(
    traj: Trajectory, pairs: Iterable[tuple[int, int]], start: int = 0
) -> list[tuple[int, int, int, float]]:
    """Rows `(tick, i, j, g_ij)` for every sample where g_ij is defined."""
    pairs = list(pairs)
    rows = []
    for index in range(start, len(traj)):
        rates = traj.rates[index]
        for i, j in pairs:
            numerator, denominator = rates[i - 1], rates[j - 1]
            if np.isfinite(numerator) and np.isfinite(denominator) and abs(denominator) > param.UNDERFLOW:
                rows.append((index, i, j, abs(float(numerator)) / abs(float(denominator))))
    return rows


def tempo_series_csv(rows: Iterable[tuple[int, int, int, float]], path: Path = None) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["tick", "i", "j", "g"])
    writer.writerows((tick, i, j, repr(float(g))) for tick, i, j, g in rows)
    text = buffer.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf8")
    return text
