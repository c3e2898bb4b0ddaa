"""
Distributed neighbor selection.

Every agent samples g_ij = |Δx_i| / |Δx_j| for each of its in-neighbors j at each tick,
using nothing but its own state-rate and those of its in-neighbors.
Once its samples stop moving (max_j |g_ij(k) - g_ij(k-1)| < ε_i on `confirm_ticks` consecutive ticks),
it terminates and keeps neighbor j if and only if g_ij > 1 + guard.

Agents advance in lockstep: the network state is computed once per tick, then every agent
observes its local view of it.
"""

from dataclasses import dataclass, field
from typing import Any, Iterable, Iterator, Mapping

import numpy as np

from fsn_selector import param
from fsn_selector.dynamics import Tick, clfn_ticks, default_initial_state, dlfn_ticks
from fsn_selector.errors import NumericalError, ValidationError
from fsn_selector.graph.connectivity import require_strongly_connected
from fsn_selector.graph.network import DirectedNetwork, Edge, LeaderProfile, LeaderSchedule
from fsn_selector.spectral import Mode, prepare_network
from fsn_selector.tempo.samples import ConvergedDynamicsError


class SelectionError(NumericalError):
    """Error raised when some agents did not terminate (horizon reached or dynamics converged)."""

    def __init__(self, message: str, unterminated: Iterable[int] = ()):
        super().__init__(message)
        self.unterminated = frozenset(unterminated)

    def __reduce__(self) -> tuple[Any, ...]:
        return type(self), (self.args[0], self.unterminated)


@dataclass(frozen=True)
class ZeroIncrementEvent:
    """A neighbor's state-rate vanished: the previous sample was carried forward."""

    tick: int
    agent: int
    neighbor: int


@dataclass(kw_only=True)
class AgentTempoState:
    id: int
    neighbors: tuple[int, ...]
    epsilon: float = param.DEFAULT_EPS
    guard: float = param.DEFAULT_GUARD
    confirm_ticks: int = param.DEFAULT_CONFIRM_TICKS
    g_current: dict[int, float] = field(default_factory=dict)
    g_previous: dict[int, float] = field(default_factory=dict)
    # Number of consecutive ticks satisfying the termination condition.
    streak: int = 0
    terminated: bool = False
    termination_tick: int | None = None
    reduced_neighbors: frozenset[int] = frozenset()
    # Neighbors with |g_ij - 1| <= guard when deciding (resolved as "not kept").
    undecided: frozenset[int] = frozenset()
    events: list[ZeroIncrementEvent] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValidationError(f"Termination threshold of agent {self.id} must be positive.")
        if not self.guard >= 0:
            raise ValidationError(f"Margin guard must be non-negative, not {self.guard!r}.")
        if self.confirm_ticks < 1:
            raise ValidationError(f"`confirm_ticks` must be at least 1, not {self.confirm_ticks!r}.")

    def observe(self, tick: int, own: float, neighbors: Mapping[int, float]) -> None:
        """Process the state-rates observed at this tick: own rate, and in-neighbors' rates."""
        if self.terminated:
            return
        own = abs(own)
        samples: dict[int, float] = {}
        carried = False
        for j in self.neighbors:
            rate = abs(neighbors[j])
            if rate > param.UNDERFLOW:
                samples[j] = own / rate
            else:
                carried = True
                self.events.append(ZeroIncrementEvent(tick, self.id, j))
                if j in self.g_current:
                    samples[j] = self.g_current[j]
        vanished = [j for j in self.neighbors if not abs(neighbors[j]) > param.UNDERFLOW]
        if vanished and len(vanished) == len(self.neighbors) and not own > param.UNDERFLOW:
            raise ConvergedDynamicsError(
                f"Agent {self.id}: own and neighbors' state-rates vanished at tick {tick} before termination."
            )
        self.g_previous, self.g_current = self.g_current, samples
        complete = len(samples) == len(self.neighbors) and self.g_previous.keys() == samples.keys()
        if carried or not complete:
            self.streak = 0
            return
        change = max((abs(g - self.g_previous[j]) for j, g in samples.items()), default=0.0)
        self.streak = self.streak + 1 if change < self.epsilon else 0
        if self.streak >= self.confirm_ticks:
            self.decide(tick)

    def decide(self, tick: int) -> None:
        """Terminate, and select neighbors from the latest samples."""
        self.terminated = True
        self.termination_tick = tick
        self.reduced_neighbors = frozenset(j for j, g in self.g_current.items() if g > 1 + self.guard)
        self.undecided = frozenset(j for j, g in self.g_current.items() if abs(g - 1) <= self.guard)


def local_view(rate: np.ndarray, agent: AgentTempoState) -> tuple[float, dict[int, float]]:
    """Extract what `agent` may observe from the network state-rate: its own rate and its neighbors'."""
    return float(rate[agent.id - 1]), {j: float(rate[j - 1]) for j in agent.neighbors}


@dataclass(frozen=True, eq=False)
class SelectionResult:
    mode: Mode
    leaders: LeaderProfile
    reduced_neighbor_sets: dict[int, frozenset[int]]
    termination_ticks: dict[int, int | None]
    # Final samples g_ij, keyed by edge (i, j).
    final_g: dict[Edge, float]
    undecided: frozenset[Edge]
    events: tuple[ZeroIncrementEvent, ...]
    # Agents which had to decide from their latest samples, without terminating.
    forced: frozenset[int] = frozenset()

    def kept_arrows(self) -> set[tuple[int, int]]:
        """Kept edges as `(src, dst)` arrows."""
        return {(j, i) for i, js in self.reduced_neighbor_sets.items() for j in js}

    def reduced_network(self, net: DirectedNetwork) -> DirectedNetwork:
        kept = [(i, j) for i, js in self.reduced_neighbor_sets.items() for j in js]
        return net.restricted_to(kept + [(i, i) for i in net.nodes if net.has_self_loop(i)])

    def as_dict(self) -> dict[str, Any]:
        return {
            "mode": str(self.mode),
            "leaders": self.leaders.as_dict(),
            "reduced_neighbors": {str(i): sorted(js) for i, js in sorted(self.reduced_neighbor_sets.items())},
            "termination_ticks": {str(i): tick for i, tick in sorted(self.termination_ticks.items())},
            "final_g": [{"src": j, "dst": i, "g": g} for (i, j), g in sorted(self.final_g.items())],
            "undecided": [{"src": j, "dst": i} for i, j in sorted(self.undecided)],
            "zero_increment_events": len(self.events),
            "forced": sorted(self.forced),
        }


class _LockstepRun:
    """Drive one fresh set of agents with the successive ticks of a simulation."""

    def __init__(
        self, net: DirectedNetwork, eps: float | Mapping[int, float], guard: float, confirm_ticks: int
    ):
        if not isinstance(eps, Mapping):
            eps = {i: eps for i in net.nodes}
        self.agents = {
            i: AgentTempoState(
                id=i, neighbors=net.in_neighbors(i), epsilon=eps[i], guard=guard, confirm_ticks=confirm_ticks
            )
            for i in net.nodes
        }

    @property
    def unterminated(self) -> list[int]:
        return [i for i, agent in self.agents.items() if not agent.terminated]

    def feed(self, tick: Tick, tolerate_convergence: bool = False) -> bool:
        """Let every agent observe this tick; return True once all of them have terminated.

        An agent whose rates have vanished keeps its latest samples while the others go on.
        Unless `tolerate_convergence` is set, the first such error is raised once every agent
        has observed the tick.
        """
        if np.isnan(tick.rate).any():
            # No increment before the first discrete step.
            return False
        error: ConvergedDynamicsError | None = None
        for agent in self.agents.values():
            if not agent.terminated:
                try:
                    agent.observe(tick.index, *local_view(tick.rate, agent))
                except ConvergedDynamicsError as e:
                    error = error or e
        if error is not None and not tolerate_convergence:
            raise error
        return not self.unterminated

    def result(self, mode: Mode, leaders: LeaderProfile, tick: int) -> SelectionResult:
        forced = self.unterminated
        for i in forced:
            self.agents[i].decide(tick)
        return SelectionResult(
            mode=mode,
            leaders=leaders,
            reduced_neighbor_sets={i: agent.reduced_neighbors for i, agent in self.agents.items()},
            termination_ticks={
                i: (None if i in forced else agent.termination_tick) for i, agent in self.agents.items()
            },
            final_g={(i, j): g for i, agent in self.agents.items() for j, g in agent.g_current.items()},
            undecided=frozenset((i, j) for i, agent in self.agents.items() for j in agent.undecided),
            events=tuple(event for agent in self.agents.values() for event in agent.events),
            forced=frozenset(forced),
        )


def _ticks(
    net: DirectedNetwork,
    schedule: LeaderSchedule,
    mode: Mode,
    x0: np.ndarray,
    h: float,
    horizon: float,
) -> Iterator[Tick]:
    match mode:
        case Mode.CONTINUOUS:
            return clfn_ticks(net, schedule, x0, h, horizon)
        case Mode.DISCRETE:
            return dlfn_ticks(net, schedule, x0, int(horizon))
        case _:
            raise NotImplementedError(mode)


def _default_horizon(mode: Mode) -> float:
    return param.DEFAULT_SELECTION_T_END if mode is Mode.CONTINUOUS else param.DEFAULT_SELECTION_K_END


def run_distributed_selection(
    net: DirectedNetwork,
    leaders: LeaderProfile,
    mode: Mode,
    eps: float | Mapping[int, float] = param.DEFAULT_EPS,
    guard: float = param.DEFAULT_GUARD,
    *,
    h: float = param.DEFAULT_H,
    horizon: float = None,
    x0: np.ndarray = None,
    seed: int = param.DEFAULT_SEED,
    confirm_ticks: int = param.DEFAULT_CONFIRM_TICKS,
    self_loop_weight: float = 0.0,
) -> SelectionResult:
    """Simulate the dynamics and let every agent select its neighbors from its own observations.

    `horizon` is a time (continuous mode) or an iteration count (discrete mode).
    Raise `SelectionError` if some agent has not terminated when the horizon is reached.
    """
    net = prepare_network(net, mode, self_loop_weight)
    require_strongly_connected(net)
    if horizon is None:
        horizon = _default_horizon(mode)
    if x0 is None:
        x0 = default_initial_state(net.n, seed)
    run = _LockstepRun(net, eps, guard, confirm_ticks)
    last = 0
    try:
        for tick in _ticks(net, LeaderSchedule.constant(leaders, horizon), mode, x0, h, horizon):
            last = tick.index
            if run.feed(tick):
                break
        else:
            raise SelectionError(
                f"Agents {run.unterminated} did not terminate before the horizon {horizon}; "
                "increase the horizon or the termination thresholds.",
                run.unterminated,
            )
    except ConvergedDynamicsError as e:
        raise SelectionError(
            f"Dynamics converged before agents {run.unterminated} terminated: {e}", run.unterminated
        ) from e
    if param.DEBUG:
        print(f"Distributed selection ({mode}) completed after {last} ticks.")
    return run.result(mode, leaders, last)


def run_switching_selection(
    net: DirectedNetwork,
    schedule: LeaderSchedule,
    mode: Mode = Mode.CONTINUOUS,
    eps: float | Mapping[int, float] = param.DEFAULT_EPS,
    guard: float = param.DEFAULT_GUARD,
    *,
    h: float = param.DEFAULT_H,
    x0: np.ndarray = None,
    seed: int = param.DEFAULT_SEED,
    confirm_ticks: int = param.DEFAULT_CONFIRM_TICKS,
    self_loop_weight: float = 0.0,
) -> list[SelectionResult]:
    """Run a fresh neighbor selection on every leader segment, along a single trajectory.

    Agents still running at the end of a segment decide from their latest samples,
    and are listed in the `forced` field of that segment's result.
    """
    net = prepare_network(net, mode, self_loop_weight)
    require_strongly_connected(net)
    if x0 is None:
        x0 = default_initial_state(net.n, seed)
    results: list[SelectionResult] = []
    run = _LockstepRun(net, eps, guard, confirm_ticks)
    segment = 0
    last = 0
    for tick in _ticks(net, schedule, mode, x0, h, schedule.t_end):
        if tick.segment != segment:
            results.append(run.result(mode, schedule.segments[segment].profile, last))
            run = _LockstepRun(net, eps, guard, confirm_ticks)
            segment = tick.segment
        last = tick.index
        # Leaders unchanged for long enough: agents keep their latest samples.
        run.feed(tick, tolerate_convergence=True)
    results.append(run.result(mode, schedule.segments[segment].profile, last))
    return results
