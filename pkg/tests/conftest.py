import numpy as np
import pytest

from fecg_anc import datasets
from fecg_anc.recording import read_recording
from fecg_anc.signals import tap_matrix

ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number}. {name}: {detail}")


@pytest.fixture(scope="session")
def synthetic_recording():
    return read_recording(datasets.synthetic_record_path())


@pytest.fixture(scope="session")
def synthetic_peaks_path():
    return datasets.synthetic_annotation_path()


def linear_plant(seed, n, order=4, sigma=0.01, flip_at=None):
    """White-noise input through a random FIR plant; returns (x, d, w_true)."""
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(n)
    w = rng.uniform(-1, 1, order)
    U = tap_matrix(x, order)
    d = U @ w
    if flip_at is not None:
        d[flip_at:] = U[flip_at:] @ (-w)
    return x, d + sigma * rng.standard_normal(n), w
