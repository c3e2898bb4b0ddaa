#!/usr/bin/python3
import sys
from argparse import ArgumentParser
from pathlib import Path

import argcomplete
from argcomplete import FilesCompleter
try:
    from ptyx.shell import print_error
except ImportError:  # newer ptyx releases
    from ptyx.pretty_print import print_error

import fsn_selector.param as param
from fsn_selector.commands import COMMANDS, RunConfig
from fsn_selector.errors import NumericalError, ValidationError
from fsn_selector.internal_state import State
from fsn_selector.spantree import TieBreak
from fsn_selector.spectral import Mode

EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_INTERRUPTED = 130


def _common_parser() -> ArgumentParser:
    """Options shared by the network based commands. Omitted options fall back to persisted defaults."""
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "network",
        nargs="?",
        metavar="NETWORK",
        type=Path,
        help="Edge list file ('src dst weight' lines). Default to the shipped 7-agent network.",
    ).completer = FilesCompleter(  # type: ignore
        (".edges",)
    )
    parser.add_argument(
        "--leaders", help="Leaders, either inline ('1:1,5:1', i.e. 'agent:delta') or as a leader file."
    )
    parser.add_argument("--mode", choices=[str(mode) for mode in Mode], help="Continuous or discrete time.")
    parser.add_argument("--u0", type=float, help="Homogeneous external input.")
    parser.add_argument(
        "--self-loops",
        dest="self_loop_weight",
        type=float,
        help="Discrete mode: weight of the self-loops added where missing (0 to require them).",
    )
    parser.add_argument("--h", type=float, help="Integration step (continuous mode).")
    parser.add_argument("--t-end", dest="t_end", type=float, help="Simulation end time (continuous mode).")
    parser.add_argument("--k-end", dest="k_end", type=int, help="Number of iterations (discrete mode).")
    parser.add_argument("--tol", type=float, help="Residual tolerance of the power iteration.")
    parser.add_argument("--ratio-tol", dest="ratio_tol", type=float, help="Tie tolerance of the FSN rule.")
    parser.add_argument("--seed", type=int, help="Random seed (initial state, random choices).")
    parser.add_argument("--out", type=Path, help="Output directory (default: current directory).")
    return parser


def _switching_options(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--switching", action="store_true", help="Use the shipped leader-switching scenario."
    )
    parser.add_argument(
        "--schedule", type=Path, help="Leader schedule file ('t_start t_end u0 agent:delta,...' lines)."
    ).completer = FilesCompleter(  # type: ignore
        (".schedule",)
    )


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(
        prog=param.PROGRAM_NAME,
        description="Neighbor selection in leader-follower networks: following the slower neighbor.",
    )
    parser.add_argument("--debug", action="store_true", help="Print debugging information.")
    subparsers = parser.add_subparsers(dest="command", required=True)
    common = _common_parser()

    subparsers.add_parser(
        "analyze", parents=[common], help="Perron eigenpair, FSN network and convergence rates."
    )

    simulate = subparsers.add_parser(
        "simulate", parents=[common], help="Trajectories and relative tempos, original vs FSN network."
    )
    _switching_options(simulate)

    select = subparsers.add_parser(
        "select", parents=[common], help="Distributed neighbor selection from observed state-rates."
    )
    _switching_options(select)
    select.add_argument("--eps", type=float, help="Termination threshold of every agent.")
    select.add_argument("--guard", type=float, help="Margin around 1 below which an edge is undecided.")
    select.add_argument(
        "--confirm-ticks",
        dest="confirm_ticks",
        type=int,
        help="Number of consecutive ticks the termination condition must hold.",
    )

    spantree = subparsers.add_parser(
        "spantree", parents=[common], help="Directed spanning tree of a single-leader FSN network."
    )
    spantree.add_argument("--policy", choices=[str(policy) for policy in TieBreak], help="Tie-break policy.")
    spantree.add_argument("--choose", help="Explicit choices, like '5:6' (agent 5 keeps in-neighbor 6).")

    gen = subparsers.add_parser("gen", help="Generate a random strongly connected instance.")
    gen.add_argument("--n", type=int, help="Number of agents.")
    gen.add_argument("--p", type=float, help="Probability of every extra edge.")
    gen.add_argument("--count", type=int, help="Number of leaders (1 or 2 at random by default).")
    gen.add_argument("--seed", type=int, help="Random seed.")
    gen.add_argument("--u0", type=float, help="Homogeneous external input.")
    gen.add_argument("--out", type=Path, help="Output directory (default: current directory).")

    verify = subparsers.add_parser("verify", help="Check the guaranteed properties on random instances.")
    verify.add_argument("--instances", type=int, help="Number of instances per mode.")
    verify.add_argument("--seed", type=int, help="First seed.")
    verify.add_argument("--jobs", type=int, help="Number of worker processes (0: run in-process).")
    verify.add_argument("--out", type=Path, help="Output directory (default: current directory).")

    config = subparsers.add_parser("config", help="Show or update the persisted defaults.")
    config.add_argument("settings", nargs="*", metavar="KEY=VALUE", help="Defaults to update.")
    return parser


def main(args: list | None = None) -> int:
    parser = build_parser()
    argcomplete.autocomplete(parser, always_complete_options=False)
    parsed_args = parser.parse_args(args)
    if parsed_args.debug:
        param.DEBUG = True
    state = State.load()
    try:
        config = RunConfig.from_namespace(parsed_args, state)
        config.validate()
        COMMANDS[config.command](config)
    except ValidationError as e:
        print_error(str(e))
        return EXIT_VALIDATION
    except NumericalError as e:
        print_error(str(e))
        return EXIT_NUMERICAL
    except KeyboardInterrupt:
        print_error("Interrupted.")
        return EXIT_INTERRUPTED
    if config.network is not None:
        state = State.load()
        state.remember_network(config.network)
        state.save()
    return 0


if __name__ == "__main__":
    sys.exit(main())
