"""
Command handlers of the command line interface.

Every handler takes a `RunConfig`, writes its results in the output directory,
and returns the list of written files.
"""

import json
from argparse import Namespace
from dataclasses import dataclass, field
from functools import wraps
from pathlib import Path
from typing import Any, Callable

try:
    from ptyx.shell import print_success, red, yellow
except ImportError:  # newer ptyx releases
    from ptyx.pretty_print import print_success, red, yellow

import fsn_selector.param as param
from fsn_selector.dynamics import consensus_time, default_initial_state, simulate, switching_scenario
from fsn_selector.errors import TheoremViolationError, ValidationError
from fsn_selector.fsn import centralized_fsn, rate_report, verify_lf_reachability
from fsn_selector.graph import g7_leaders, g7_network, random_leaders, random_strongly_connected
from fsn_selector.graph.io import (
    format_network,
    load_leaders,
    load_network,
    load_schedule,
    parse_leader_spec,
    save_leaders,
    save_network,
)
from fsn_selector.graph.network import DirectedNetwork, LeaderProfile, LeaderSchedule
from fsn_selector.internal_state import BUILTIN_DEFAULTS, State
from fsn_selector.spantree import TieBreak, build_spanning_tree, save_tree, verify_spanning_tree
from fsn_selector.spectral import Mode, prepare_network
from fsn_selector.sweep import run_sweep
from fsn_selector.tempo import (
    run_distributed_selection,
    run_switching_selection,
    tempo_series,
    tempo_series_csv,
)


@dataclass(kw_only=True)
class RunConfig:
    """Everything a command needs, assembled from the command line and the persisted defaults."""

    command: str
    # None means the shipped 7-agent network.
    network: Path | None = None
    # Inline specification ("1:1,5:1") or path to a leader file; None means the shipped leaders.
    leaders: str | None = None
    mode: Mode = Mode.CONTINUOUS
    switching: bool = False
    schedule: Path | None = None
    h: float = param.DEFAULT_H
    t_end: float = param.DEFAULT_T_END
    k_end: int = param.DEFAULT_K_END
    eps: float = param.DEFAULT_EPS
    ratio_tol: float = param.DEFAULT_RATIO_TOL
    guard: float = param.DEFAULT_GUARD
    tol: float = param.DEFAULT_TOL
    u0: float = param.DEFAULT_INPUT
    seed: int = param.DEFAULT_SEED
    confirm_ticks: int = param.DEFAULT_CONFIRM_TICKS
    self_loop_weight: float = 1.0
    jobs: int = 0
    out: Path = field(default_factory=Path.cwd)
    policy: TieBreak = TieBreak.SMALLEST_INDEX
    # Explicit spanning tree choices, like "5:6" (agent 5 keeps in-neighbor 6).
    choose: str | None = None
    n: int = 7
    p: float = 0.3
    count: int | None = None
    instances: int = 200
    settings: list[str] = field(default_factory=list)

    @classmethod
    def from_namespace(cls, args: Namespace, state: State) -> "RunConfig":
        """Use command line values when given, persisted defaults else."""
        values: dict[str, Any] = dict(state.defaults)
        values.update({key: value for key, value in vars(args).items() if value is not None})
        values.pop("debug", None)
        for key in ("mode", "policy"):
            if isinstance(values.get(key), str):
                values[key] = (Mode if key == "mode" else TieBreak)(values[key])
        known = cls.__dataclass_fields__.keys()
        return cls(**{key: value for key, value in values.items() if key in known})

    def validate(self) -> None:
        for name in ("h", "eps", "ratio_tol", "tol", "t_end"):
            if not getattr(self, name) > 0:
                raise ValidationError(f"`{name}` must be positive, not {getattr(self, name)!r}.")
        for name in ("guard", "self_loop_weight", "jobs"):
            if not getattr(self, name) >= 0:
                raise ValidationError(f"`{name}` must be non-negative, not {getattr(self, name)!r}.")
        if self.k_end < 1 or self.confirm_ticks < 1 or self.instances < 1:
            raise ValidationError("`k_end`, `confirm_ticks` and `instances` must be at least 1.")
        if self.switching and self.schedule is not None:
            raise ValidationError("Options `--switching` and `--schedule` are mutually exclusive.")
        if self.switching and self.network is not None:
            raise ValidationError("The shipped switching scenario only applies to the shipped network.")

    # ---------------------
    #     Input loading
    # =====================

    def load_network(self) -> DirectedNetwork:
        net = g7_network() if self.network is None else load_network(self.network)
        return prepare_network(net, self.mode, self.self_loop_weight)

    def load_leaders(self, net: DirectedNetwork) -> LeaderProfile:
        if self.leaders is None:
            if self.network is not None:
                raise ValidationError("Leaders must be given (option `--leaders`) for a custom network.")
            return LeaderProfile(g7_leaders().delta, self.u0)
        if Path(self.leaders).is_file():
            return load_leaders(self.leaders, net.n, self.u0)
        return parse_leader_spec(self.leaders, net.n, self.u0)

    def load_schedule(self, net: DirectedNetwork) -> LeaderSchedule | None:
        """The leader switching schedule, with the simulation end adjusted to it."""
        if self.switching:
            schedule = switching_scenario()
        elif self.schedule is not None:
            schedule = load_schedule(self.schedule, net.n)
        else:
            return None
        if self.mode is Mode.CONTINUOUS:
            self.t_end = schedule.t_end
        else:
            self.k_end = int(schedule.t_end)
        return schedule

    def horizon(self) -> float:
        return self.t_end if self.mode is Mode.CONTINUOUS else self.k_end

    def output_path(self, name: str) -> Path:
        self.out.mkdir(parents=True, exist_ok=True)
        return self.out / name


def command(f: Callable[[RunConfig], list[Path]]) -> Callable[[RunConfig], list[Path]]:
    """Decorator used to trace command calls.

    The decorated function must return the list of the files it wrote.
    """

    @wraps(f)
    def wrapper(config: RunConfig) -> list[Path]:
        if param.DEBUG:
            print(f"{f.__name__}({config!r})")
        else:
            print(f.__name__)
        files = f(config)
        assert isinstance(files, list) and all(
            isinstance(path, Path) for path in files
        ), f"Command `{f.__name__}` must return a list of paths, not {files!r}"
        return files

    return wrapper


def _write_json(config: RunConfig, name: str, data: Any) -> Path:
    path = config.output_path(name)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf8")
    return path


# ---------------------
#       Commands
# =====================


@command
def cmd_analyze(config: RunConfig) -> list[Path]:
    """Compute the Perron pair, the FSN network, and check reachability and convergence rates."""
    net = config.load_network()
    leaders = config.load_leaders(net)
    pair, fsn = centralized_fsn(net, leaders, config.mode, config.tol, config.ratio_tol)
    verdict = verify_lf_reachability(fsn, leaders)
    report = rate_report(net, leaders, fsn, config.mode, config.tol)
    data: dict[str, Any] = {"leaders": leaders.as_dict(), "perron": pair.as_dict()}
    data |= fsn.as_dict() | report.as_dict()
    data |= {"reachable": verdict.reachable, "unreachable": sorted(verdict.unreachable)}
    print(f"Eigenvector: {' '.join(f'{x:.4f}' for x in pair.eigenvector)}")
    print(f"FSN keeps {len(fsn.kept)} of {len(fsn.decisions)} edges.")
    print(f"Convergence value: {report.lambda_orig:.6g} -> {report.lambda_fsn:.6g}")
    if not verdict:
        print(red(f"Agents {sorted(verdict.unreachable)} are not reachable from leaders!"))
    fsn_path = config.output_path("fsn.edges")
    fsn_path.write_text(format_network(fsn.reduced), encoding="utf8")
    files = [_write_json(config, "analysis.json", data), fsn_path]
    print_success(f"Analysis written in '{config.out}'.")
    return files


@command
def cmd_simulate(config: RunConfig) -> list[Path]:
    """Simulate the original network and its FSN network from the same initial state."""
    net = config.load_network()
    schedule = config.load_schedule(net)
    x0 = default_initial_state(net.n, config.seed)
    runs: dict[str, DirectedNetwork] = {"original": net}
    drive: LeaderSchedule | LeaderProfile
    if schedule is None:
        drive = leaders = config.load_leaders(net)
        runs["fsn"] = centralized_fsn(net, leaders, config.mode, config.tol, config.ratio_tol)[1].reduced
    else:
        drive = schedule
        print(yellow("Leader switching: the FSN network changes over time, only the original is simulated."))
    files = []
    summary: dict[str, Any] = {"seed": config.seed, "x0": [float(x) for x in x0]}
    for name, network in runs.items():
        traj = simulate(
            network,
            drive,
            x0,
            config.mode,
            config.h,
            config.t_end,
            config.k_end,
            config.self_loop_weight,
        )
        edges = [(i, j) for i, j, _ in network.edges() if i != j]
        start = 1 if config.mode is Mode.DISCRETE else 0
        trajectory_path = config.output_path(f"{name}_trajectory.csv")
        tempo_path = config.output_path(f"{name}_tempo.csv")
        traj.to_csv(trajectory_path)
        tempo_series_csv(tempo_series(traj, edges, start), tempo_path)
        files += [trajectory_path, tempo_path]
        summary[name] = {"consensus_time": consensus_time(traj), "samples": len(traj)}
        print(f"{name}: consensus band reached at {summary[name]['consensus_time']}.")
    files.append(_write_json(config, "simulation.json", summary))
    print_success(f"Simulation written in '{config.out}'.")
    return files


@command
def cmd_select(config: RunConfig) -> list[Path]:
    """Run the distributed neighbor selection."""
    net = config.load_network()
    schedule = config.load_schedule(net)
    options: dict[str, Any] = {
        "h": config.h,
        "seed": config.seed,
        "confirm_ticks": config.confirm_ticks,
        "self_loop_weight": config.self_loop_weight,
    }
    if schedule is None:
        leaders = config.load_leaders(net)
        result = run_distributed_selection(
            net, leaders, config.mode, config.eps, config.guard, horizon=config.horizon(), **options
        )
        results = [result]
    else:
        results = run_switching_selection(net, schedule, config.mode, config.eps, config.guard, **options)
    for index, result in enumerate(results):
        arrows = ", ".join(f"{j}->{i}" for j, i in sorted(result.kept_arrows()))
        print(f"Leaders {sorted(result.leaders.leaders)}: kept {arrows}")
        if result.undecided:
            print(yellow(f"Undecided edges (resolved as removed): {sorted(result.undecided)}"))
        if result.forced:
            print(yellow(f"Agents {sorted(result.forced)} decided without terminating."))
    data = [result.as_dict() for result in results]
    files = [_write_json(config, "selection.json", data if schedule is not None else data[0])]
    print_success(f"Selection written in '{config.out}'.")
    return files


def _parse_choices(spec: str | None) -> dict[int, int]:
    choices: dict[int, int] = {}
    for item in (spec or "").replace(" ", "").split(","):
        if item:
            i, _, j = item.partition(":")
            try:
                choices[int(i)] = int(j)
            except ValueError:
                raise ValidationError(f"Invalid choice {item!r} (expected 'agent:neighbor').") from None
    return choices


@command
def cmd_spantree(config: RunConfig) -> list[Path]:
    """Extract a directed spanning tree from the FSN network of a single leader."""
    net = config.load_network()
    leaders = config.load_leaders(net)
    _, fsn = centralized_fsn(net, leaders, config.mode, config.tol, config.ratio_tol)
    result = build_spanning_tree(fsn, leaders, config.policy, config.seed, _parse_choices(config.choose))
    verdict = verify_spanning_tree(result, net.n)
    if not verdict:
        raise TheoremViolationError(f"Invalid spanning tree: {'; '.join(verdict.violations)}")
    files = [
        save_tree(result, config.output_path("tree.edges")),
        _write_json(config, "tree.json", result.as_dict() | {"valid": verdict.valid}),
    ]
    print_success(f"Spanning tree rooted at {result.root} written in '{config.out}'.")
    return files


@command
def cmd_gen(config: RunConfig) -> list[Path]:
    """Generate a random strongly connected instance."""
    net = random_strongly_connected(config.n, config.p, config.seed)
    leaders = random_leaders(config.n, config.seed, config.count, config.u0)
    stem = f"random-n{config.n}-seed{config.seed}"
    files = [
        save_network(net, config.output_path(f"{stem}.edges")),
        save_leaders(leaders, config.output_path(f"{stem}.leaders")),
    ]
    print_success(f"Instance written in '{config.out}'.")
    return files


@command
def cmd_verify(config: RunConfig) -> list[Path]:
    """Check the guaranteed properties on random instances, in both modes."""
    seeds = range(config.seed, config.seed + config.instances)
    reports = run_sweep(seeds, list(Mode), config.jobs)
    failed = [report for report in reports if not report.ok]
    files = [_write_json(config, "verify.json", [report.as_dict() for report in reports])]
    for report in failed:
        print(red(f"Instance {report.seed} ({report.mode}, n={report.n}): {'; '.join(report.failures)}"))
    if failed:
        raise TheoremViolationError(f"{len(failed)} of {len(reports)} instances failed.")
    print_success(f"All {len(reports)} instances passed.")
    return files


@command
def cmd_config(config: RunConfig) -> list[Path]:
    """Show or update the persisted defaults."""
    state = State.load()
    files = []
    if config.settings:
        values = {}
        for setting in config.settings:
            key, sep, value = setting.partition("=")
            if not sep:
                raise ValidationError(f"Invalid setting {setting!r} (expected 'key=value').")
            values[key.strip()] = value.strip()
        state.update_defaults(**values)
        files.append(state.save())
    for key in BUILTIN_DEFAULTS:
        print(f"{key} = {state.defaults[key]!r}")
    return files


COMMANDS: dict[str, Callable[[RunConfig], list[Path]]] = {
    "analyze": cmd_analyze,
    "simulate": cmd_simulate,
    "select": cmd_select,
    "spantree": cmd_spantree,
    "gen": cmd_gen,
    "verify": cmd_verify,
    "config": cmd_config,
}
