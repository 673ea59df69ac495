import numpy as np
import pytest

from prs.dataset import LabeledDataset, SignalSegment, generate_synthetic


def make_segment(id, label, samples, fs=1000.0):
    return SignalSegment(
        id=id, label=label, sampling_rate=fs, samples=np.asarray(samples, dtype=np.float64)
    )


@pytest.fixture
def tiny_dataset():
    """4 segments, 2 per class, minimum-length signals."""
    rng = np.random.default_rng(11)
    segs = [
        make_segment("a1", "A", rng.normal(size=32)),
        make_segment("a2", "A", rng.normal(size=32)),
        make_segment("b1", "B", 3.0 + rng.normal(size=32)),
        make_segment("b2", "B", 3.0 + rng.normal(size=32)),
    ]
    return LabeledDataset(name="tiny", segments=tuple(segs))


@pytest.fixture(scope="session")
def small_synth():
    """Deterministic 12-segment synthetic dataset shared across tests."""
    return generate_synthetic(n_per_class=6, length=256, seed=3)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdict lines after the test run."""
    try:
        from test_acceptance import RESULT_LINES
    except ImportError:
        return
    if RESULT_LINES:
        terminalreporter.section("acceptance criteria")
        for line in RESULT_LINES:
            terminalreporter.write_line(line)
