import pickle

import numpy as np
import pytest

from fsn_selector.spectral import Mode, PerronPair
from fsn_selector.sweep import InstanceReport, check_instance, run_sweep
from fsn_selector.sweep.checks import _bound_failures
from fsn_selector.sweep.sweep_worker import END_CONNECTION_REQUEST, EndConnectionRequest, _shareable


def test_check_instance():
    report = check_instance(3, Mode.DISCRETE)
    assert report.ok, report.failures
    assert report.seed == 3
    assert report.mode is Mode.DISCRETE
    assert 2 <= report.n <= 10
    assert report.leaders
    data = report.as_dict()
    assert data["mode"] == "discrete"
    assert data["failures"] == []
    # Instances are fully determined by their seed.
    assert check_instance(3, Mode.DISCRETE) == report


def test_failed_report():
    report = InstanceReport(seed=0, mode=Mode.CONTINUOUS, n=2, leaders=(1,), failures=("oops",))
    assert not report.ok


def test_in_process_sweep():
    reports = run_sweep(range(3), list(Mode))
    assert [(r.seed, r.mode) for r in reports] == [(s, m) for m in Mode for s in range(3)]
    assert all(report.ok for report in reports)


def test_sweep_with_workers():
    seeds = range(10, 15)
    expected = run_sweep(seeds, [Mode.CONTINUOUS])
    reports = run_sweep(seeds, [Mode.CONTINUOUS], jobs=2)
    assert [r.as_dict() for r in reports] == [r.as_dict() for r in expected]


def test_more_workers_than_tasks():
    reports = run_sweep([7], [Mode.DISCRETE], jobs=3)
    assert len(reports) == 1
    assert reports[0].seed == 7


def test_end_connection_request():
    assert pickle.loads(pickle.dumps(END_CONNECTION_REQUEST)) == EndConnectionRequest()
    assert END_CONNECTION_REQUEST != None  # noqa: E711


def test_shareable_exceptions():
    error = ValueError("bad")
    assert _shareable(error) is error

    class LocalError(Exception):
        pass

    shared = _shareable(LocalError("local"))
    assert type(shared) is RuntimeError
    assert str(shared) == "LocalError: local"


@pytest.mark.parametrize(
    "mode, eigenvalue, ok",
    [
        (Mode.CONTINUOUS, 0.13, True),
        (Mode.CONTINUOUS, 0.0, False),
        (Mode.CONTINUOUS, -1e-3, False),
        (Mode.DISCRETE, 0.95, True),
        (Mode.DISCRETE, 1.0, False),
        (Mode.DISCRETE, 0.0, False),
    ],
)
def test_spectral_bounds(mode, eigenvalue, ok):
    pair = PerronPair(eigenvalue, np.ones(2) / np.sqrt(2), 0.0, 1)
    assert (not _bound_failures(pair, mode)) == ok


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_spectral_bounds_on_random_instances(seed):
    for mode in Mode:
        report = check_instance(seed, mode, n_max=12)
        assert not [f for f in report.failures if f.startswith("bounds") or "Error:" in f], report.failures
