"""
Simulation of leader-follower networks.

Continuous time (CLFN):  ẋ = -L_B x + δ u_0, integrated with classical fixed-step RK4.
Discrete time (DLFN):    x(k+1) = P x(k) + q u_0.

Since the input is homogeneous, x = u_0·1 is an equilibrium, and both systems are integrated
in deviation coordinates e = x - u_0·1 (ė = -L_B e, e(k+1) = P e(k)) on each leader segment.
"""

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterator, Sequence

import numpy as np

from fsn_selector import param
from fsn_selector.errors import ValidationError
from fsn_selector.graph.connectivity import reachable_set
from fsn_selector.graph.network import (
    DimensionMismatchError,
    DirectedNetwork,
    LeaderProfile,
    LeaderSchedule,
    LeaderSegment,
    ScheduleError,
)
from fsn_selector.spectral import Mode, build_perturbed_laplacian, build_perturbed_stochastic, prepare_network


class StepSizeError(ValidationError):
    """Error raised when the integration step is non-positive, unstable, or off the schedule grid."""


class UnreachableAgentsError(ValidationError):
    """Error raised when some agents can not be reached from any leader: they would never converge."""


@dataclass(frozen=True)
class Tick:
    """One sample of a simulation: state and state-rate at a given time."""

    index: int
    time: float
    state: np.ndarray
    # Continuous: ẋ = -L_B x + δ u_0. Discrete: Δx(k) = x(k) - x(k-1) (NaN for k = 0).
    rate: np.ndarray
    # Index of the leader schedule segment in effect.
    segment: int = 0


@dataclass(frozen=True, eq=False)
class Trajectory:
    mode: Mode
    times: np.ndarray
    states: np.ndarray
    rates: np.ndarray
    schedule: LeaderSchedule

    @property
    def n(self) -> int:
        return self.states.shape[1]

    def __len__(self) -> int:
        return len(self.times)

    def input_at(self, index: int) -> float:
        return self.schedule.profile_at(float(self.times[index])).input_value

    def deviation(self, index: int) -> float:
        """‖x - u_0·1‖_∞ at the given sample."""
        return float(np.abs(self.states[index] - self.input_at(index)).max())

    def to_csv(self, path: Path = None) -> str:
        """Export as CSV (header `t,x1,...,xn,dx1,...,dxn`); write it to `path` if given."""
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        nodes = range(1, self.n + 1)
        writer.writerow(["t"] + [f"x{i}" for i in nodes] + [f"dx{i}" for i in nodes])
        for t, x, dx in zip(self.times, self.states, self.rates):
            writer.writerow(repr(float(value)) for value in (t, *x, *dx))
        text = buffer.getvalue()
        if path is not None:
            Path(path).write_text(text, encoding="utf8")
        return text


def rk4_step(f: Callable[[np.ndarray], np.ndarray], x: np.ndarray, h: float) -> np.ndarray:
    """One step of the classical 4th-order Runge-Kutta method for the autonomous system ẋ = f(x)."""
    k1 = f(x)
    k2 = f(x + 0.5 * h * k1)
    k3 = f(x + 0.5 * h * k2)
    k4 = f(x + h * k3)
    return x + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)


def default_initial_state(n: int, seed: int = param.DEFAULT_SEED) -> np.ndarray:
    """Uniform random initial state in [0, 1]^n."""
    return np.random.default_rng(seed).uniform(0.0, 1.0, n)


def as_schedule(leaders: LeaderSchedule | LeaderProfile, t_end: float) -> LeaderSchedule:
    """Promote a constant leader profile to a single-segment schedule on [0, t_end]."""
    if isinstance(leaders, LeaderProfile):
        return LeaderSchedule.constant(leaders, t_end)
    return leaders


def switching_scenario() -> LeaderSchedule:
    """The leader-switching scenario on the 7-agent network.

    Leaders {1} with u_0 = 0.1 on [0, 50], {6} with u_0 = 0.9 on [50, 100],
    then {2, 7} with u_0 = 0.1 on [100, 150]; all with unit influence weights.
    """
    return LeaderSchedule(
        (
            LeaderSegment(0.0, 50.0, LeaderProfile.from_mapping(7, {1: 1.0}, 0.1)),
            LeaderSegment(50.0, 100.0, LeaderProfile.from_mapping(7, {6: 1.0}, 0.9)),
            LeaderSegment(100.0, 150.0, LeaderProfile.from_mapping(7, {2: 1.0, 7: 1.0}, 0.1)),
        )
    )


# ------------------------------------
#         Tick generators
# ====================================


def _on_grid(t: float, step: float) -> int:
    k = round(t / step)
    if abs(k * step - t) > 1e-9 * max(1.0, abs(t)):
        raise StepSizeError(f"Time {t} is not a multiple of the step {step}.")
    return k


def _runs(
    schedule: LeaderSchedule, t_end: float, step: float
) -> list[tuple[int, int, int, LeaderProfile]]:
    """Split [t_start, t_end] into runs of steps `first <= k < last` sharing the same schedule segment."""
    if not t_end > schedule.t_start:
        raise ScheduleError(f"Simulation end {t_end} must come after the schedule start {schedule.t_start}.")
    if not schedule.covers(t_end, schedule.t_start):
        raise ScheduleError(f"Schedule [{schedule.t_start}, {schedule.t_end}] does not cover t_end={t_end}.")
    runs = []
    for index, segment in enumerate(schedule.segments):
        hi = min(segment.t_end, t_end)
        if hi > segment.t_start:
            first = _on_grid(segment.t_start - schedule.t_start, step)
            last = _on_grid(hi - schedule.t_start, step)
            runs.append((index, first, last, segment.profile))
    return runs


def _require_lf_reachable(net: DirectedNetwork, leaders: LeaderProfile) -> None:
    leaders.check_compatible(net)
    unreachable = set(net.nodes) - reachable_set(net, leaders.leaders)
    if unreachable:
        raise UnreachableAgentsError(f"Agents {sorted(unreachable)} can not be reached from any leader.")


def _initial_state(x0: Sequence[float] | np.ndarray, n: int) -> np.ndarray:
    x = np.array(x0, dtype=float)
    if x.shape != (n,):
        raise DimensionMismatchError(f"Initial state must have {n} entries, not {x.shape}.")
    if not np.all(np.isfinite(x)):
        raise ValidationError(f"Initial state must be finite: {x}.")
    return x


def clfn_ticks(
    net: DirectedNetwork,
    schedule: LeaderSchedule,
    x0: Sequence[float] | np.ndarray,
    h: float = param.DEFAULT_H,
    t_end: float = None,
) -> Iterator[Tick]:
    """Lazily integrate the CLFN, yielding one tick per step, from t_start to t_end inclusive.

    L_B is rebuilt at each schedule boundary; the state is continuous across boundaries.
    """
    if not h > 0:
        raise StepSizeError(f"Step must be positive, not {h!r}.")
    if t_end is None:
        t_end = schedule.t_end
    runs = _runs(schedule, t_end, h)
    x = _initial_state(x0, net.n)
    t0 = schedule.t_start
    for segment, first, last, profile in runs:
        _require_lf_reachable(net, profile)
        lb = build_perturbed_laplacian(net, profile, check_connectivity=False).matrix
        if h * lb.diagonal().max() > param.STABILITY_LIMIT:
            raise StepSizeError(
                f"Step h={h} is too large: h·max_i [L_B]_ii = {h * lb.diagonal().max():g} "
                f"exceeds {param.STABILITY_LIMIT}."
            )
        u = profile.input_value

        def rhs(e: np.ndarray, lb: np.ndarray = lb) -> np.ndarray:
            return -lb @ e

        e = x - u
        for k in range(first, last):
            yield Tick(k, t0 + k * h, e + u, rhs(e), segment)
            e = rk4_step(rhs, e, h)
        x = e + u
    yield Tick(last, t0 + last * h, x, rhs(x - u), segment)


def dlfn_ticks(
    net: DirectedNetwork,
    schedule: LeaderSchedule,
    x0: Sequence[float] | np.ndarray,
    k_end: int = None,
    self_loop_weight: float = 0.0,
) -> Iterator[Tick]:
    """Lazily iterate the DLFN, yielding x(k) and Δx(k) for k = k_start..k_end.

    Missing self-loops are added with `self_loop_weight` if it is positive, else they are required.
    """
    net = prepare_network(net, Mode.DISCRETE, self_loop_weight)
    if k_end is None:
        k_end = int(schedule.t_end)
    runs = _runs(schedule, k_end, 1)
    x = _initial_state(x0, net.n)
    k0 = schedule.t_start
    rate = np.full(net.n, math.nan)
    for segment, first, last, profile in runs:
        _require_lf_reachable(net, profile)
        p = build_perturbed_stochastic(net, profile, check_connectivity=False).matrix
        u = profile.input_value
        e = x - u
        for k in range(first, last):
            yield Tick(k, k0 + k, e + u, rate, segment)
            following = p @ e
            rate = following - e
            e = following
        x = e + u
    yield Tick(last, k0 + last, x, rate, segment)


# ------------------------------------
#           Trajectories
# ====================================


def _collect(ticks: Iterator[Tick], mode: Mode, schedule: LeaderSchedule) -> Trajectory:
    samples = list(ticks)
    return Trajectory(
        mode,
        np.array([tick.time for tick in samples], dtype=float),
        np.array([tick.state for tick in samples]),
        np.array([tick.rate for tick in samples]),
        schedule,
    )


def simulate_clfn(
    net: DirectedNetwork,
    schedule: LeaderSchedule | LeaderProfile,
    x0: Sequence[float] | np.ndarray,
    h: float = param.DEFAULT_H,
    t_end: float = param.DEFAULT_T_END,
) -> Trajectory:
    schedule = as_schedule(schedule, t_end)
    return _collect(clfn_ticks(net, schedule, x0, h, t_end), Mode.CONTINUOUS, schedule)


def simulate_dlfn(
    net: DirectedNetwork,
    schedule: LeaderSchedule | LeaderProfile,
    x0: Sequence[float] | np.ndarray,
    k_end: int = param.DEFAULT_K_END,
    self_loop_weight: float = 0.0,
) -> Trajectory:
    schedule = as_schedule(schedule, k_end)
    return _collect(dlfn_ticks(net, schedule, x0, k_end, self_loop_weight), Mode.DISCRETE, schedule)


def simulate(
    net: DirectedNetwork,
    schedule: LeaderSchedule | LeaderProfile,
    x0: Sequence[float] | np.ndarray,
    mode: Mode,
    h: float = param.DEFAULT_H,
    t_end: float = param.DEFAULT_T_END,
    k_end: int = param.DEFAULT_K_END,
    self_loop_weight: float = 0.0,
) -> Trajectory:
    match mode:
        case Mode.CONTINUOUS:
            return simulate_clfn(net, schedule, x0, h, t_end)
        case Mode.DISCRETE:
            return simulate_dlfn(net, schedule, x0, k_end, self_loop_weight)
        case _:
            raise NotImplementedError(mode)


def consensus_time(traj: Trajectory, band: float = param.CONSENSUS_BAND) -> float | None:
    """First sample time with ‖x - u_0·1‖_∞ < band, u_0 being the input of the last segment.

    Return None if the band is never reached.
    """
    u = traj.schedule.segments[-1].profile.input_value
    inside = np.abs(traj.states - u).max(axis=1) < band
    if not inside.any():
        return None
    return float(traj.times[int(np.argmax(inside))])
