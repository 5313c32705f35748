import numpy as np
import pytest
from hypothesis import given, strategies as st

from fecg_anc.errors import ContractError, InputError
from fecg_anc.signals import (MultichannelRecording, Regressor, Signal, power, remove_mean,
                              tap_matrix)

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_push_shifts_newest_first():
    r = Regressor(3)
    assert r.push(1).taps.tolist() == [1, 0, 0]
    assert r.push(2).taps.tolist() == [2, 1, 0]
    assert r.push(3).taps.tolist() == [3, 2, 1]


def test_push_rejects_non_finite():
    with pytest.raises(InputError):
        Regressor(2).push(float("nan"))


@given(st.integers(1, 8), st.lists(finite, max_size=40))
def test_replay_keeps_length_and_reproduces_signal(order, xs):
    r = Regressor(order)
    seen = []
    for x in xs:
        r.push(x)
        assert len(r.taps) == order
        seen.append(r.taps[0])
    assert seen == xs


@given(st.integers(1, 6), st.lists(finite, min_size=1, max_size=30))
def test_tap_matrix_matches_regressor(order, xs):
    U = tap_matrix(xs, order)
    r = Regressor(order)
    for n, x in enumerate(xs):
        r.push(x)
        np.testing.assert_array_equal(U[n], r.taps)


@pytest.mark.parametrize("x, expected", [
    ([1, 1, 1], [0, 0, 0]),
    ([1, -1], [1, -1]),
    ([0, 2, 4], [-2, 0, 2]),
])
def test_remove_mean(x, expected):
    out = remove_mean(Signal(x, 250))
    np.testing.assert_allclose(out.samples, expected)
    assert out.fs == 250


def test_remove_mean_empty():
    with pytest.raises(InputError):
        remove_mean(Signal([], 250))


@pytest.mark.parametrize("x, p", [([0, 0, 0], 0.0), ([1, -1, 1, -1], 1.0), ([3, 4], 12.5)])
def test_power(x, p):
    assert power(Signal(x)) == p


def test_power_empty():
    with pytest.raises(InputError):
        power([])


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=50))
def test_centering_never_adds_power(xs):
    s = Signal(xs)
    centred = remove_mean(s)
    assert power(centred) <= power(s) * (1 + 1e-12) + 1e-300
    rms = np.sqrt(power(s))
    assert abs(centred.samples.mean()) <= 1e-12 * max(rms, 1e-300) + 1e-12


def test_signal_invariants():
    with pytest.raises(InputError):
        Signal([1.0, np.inf])
    with pytest.raises(InputError):
        Signal([1.0], fs=0)


def test_recording_channels_and_roles():
    rec = MultichannelRecording(np.arange(12.0).reshape(4, 3), 250, ("abdominal", "abdominal", "thoracic"))
    assert rec.channel(2).samples.tolist() == [2, 5, 8, 11]
    with pytest.raises(ContractError):
        rec.channel(3)
    with pytest.raises(InputError):
        MultichannelRecording(np.zeros((4, 2)), 250, ("abdominal", "lung"))
