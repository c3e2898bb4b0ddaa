import multiprocessing
import pickle
from dataclasses import dataclass
from multiprocessing import Process
from multiprocessing.connection import Connection
from typing import Iterable, Sequence

try:
    from ptyx.shell import red, yellow
except ImportError:  # newer ptyx releases
    from ptyx.pretty_print import red, yellow

from fsn_selector import param
from fsn_selector.spectral import Mode
from fsn_selector.sweep.checks import DEFAULT_MAX_NODES, InstanceReport, check_instance


# Send this custom object to indicate that the connection must be closed.
# (This is more explicit than None.)
class EndConnectionRequest:
    def __str__(self) -> str:
        return "<END_CONNECTION_REQUEST>"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EndConnectionRequest)


END_CONNECTION_REQUEST = EndConnectionRequest()

Task = tuple[int, Mode]


@dataclass
class ProcessInfo:
    process: Process
    pipe_this_side: Connection
    pipe_other_side: Connection


def _shareable(e: BaseException) -> BaseException:
    """Return the exception itself if it survives pickling, else a vanilla `RuntimeError`."""
    try:
        if type(pickle.loads(pickle.dumps(e))) is type(e):
            return e
    except Exception:
        pass
    print(red(f"ERROR: Exception {type(e)} is not compatible with pickle!"))
    print(yellow("Please open a bug report about it!"))
    return RuntimeError(f"{type(e).__name__}: {e}")


def check_tasks(tasks: Sequence[Task], n_max: int, connection: Connection) -> None:
    """Check instances from another process, streaming reports through `connection`."""
    try:
        for seed, mode in tasks:
            connection.send(check_instance(seed, mode, n_max))
    except BaseException as e:
        # Objects are pickled to go through the pipe: only send picklable exceptions.
        connection.send(_shareable(e))
    # End communication.
    connection.send(END_CONNECTION_REQUEST)


def _receive(info: ProcessInfo) -> list[InstanceReport]:
    reports: list[InstanceReport] = []
    while (content := info.pipe_this_side.recv()) != END_CONNECTION_REQUEST:
        if isinstance(content, InstanceReport):
            reports.append(content)
        elif isinstance(content, BaseException):
            raise content
        else:
            raise ValueError(f"Unrecognized data: {content}")
    return reports


def run_sweep(
    seeds: Iterable[int], modes: Iterable[Mode], jobs: int = 0, n_max: int = DEFAULT_MAX_NODES
) -> list[InstanceReport]:
    """Check every (seed, mode) instance, using `jobs` worker processes (in-process if `jobs` is 0).

    Reports are returned in task order, whatever the number of workers.
    """
    tasks: list[Task] = [(seed, mode) for mode in modes for seed in seeds]
    if jobs <= 0:
        return [check_instance(seed, mode, n_max) for seed, mode in tasks]
    # https://docs.python.org/3/library/multiprocessing.html#multiprocessing-start-methods
    ctx = multiprocessing.get_context("spawn")
    workers: list[ProcessInfo] = []
    for index in range(jobs):
        this_side, other_side = ctx.Pipe(duplex=True)
        process: Process = ctx.Process(  # type: ignore
            target=check_tasks, args=(tasks[index::jobs], n_max, other_side)
        )
        workers.append(ProcessInfo(process, this_side, other_side))
        process.start()
        if param.DEBUG:
            print(f"Worker {index} started (pid {process.pid}).")
    try:
        chunks = [_receive(info) for info in workers]
    except BaseException:
        for info in workers:
            info.process.terminate()
        raise
    finally:
        for info in workers:
            info.process.join()
    # Restore the task order from the round-robin distribution.
    reports: list[InstanceReport] = []
    for position in range(len(tasks)):
        reports.append(chunks[position % jobs][position // jobs])
    return reports
