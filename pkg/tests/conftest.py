import numpy as np
import pytest
from hypothesis import settings

from oecm.config import ExperimentConfig
from oecm.experiment import run
from oecm.hamiltonian import SpinChainSpec, build_ising, diagonalize


# deadline off: the first call of each numba kernel includes compilation
settings.register_profile("oecm", deadline=None, max_examples=60)
settings.load_profile("oecm")


def pytest_configure(config):
    np.set_printoptions(precision=12)


@pytest.fixture(scope="session")
def chain3():
    spec = SpinChainSpec(3)
    ham = build_ising(spec)
    return spec, ham, diagonalize(ham)


@pytest.fixture(scope="session")
def decomp10():
    return diagonalize(build_ising(SpinChainSpec(10)))


@pytest.fixture(scope="session")
def default_run(tmp_path_factory):
    """The default-parameter N=10 pipeline with every default, written to disk once."""
    out = tmp_path_factory.mktemp("default_run")
    return run(ExperimentConfig(output_dir=str(out))), out


_criterion_lines = []


def pytest_runtest_logreport(report):
    if report.when == "call":
        _criterion_lines.extend(line for line in report.capstdout.splitlines() if line.startswith("criterion "))


def pytest_terminal_summary(terminalreporter):
    if _criterion_lines:
        terminalreporter.section("acceptance criteria")
        for line in _criterion_lines:
            terminalreporter.write_line(line)
