import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fecg_anc.errors import ConfigError, ContractError, InsufficientDataError, ParseError
from fecg_anc.qrs import (FETAL, MATERNAL, PeakList, biquad_highpass, biquad_lowpass,
                          format_peaks, heart_rate, pan_tompkins, parse_peaks, preset)
from fecg_anc.signals import Signal
from fecg_anc.synthetic import spike_train

FS = 250.0


def refractory(cfg):
    return int(round(cfg.refractory_ms * FS / 1000.0))


def noisy_train(seed, snr_db=10.0):
    x, pos = spike_train()
    rng = np.random.default_rng(seed)
    sigma = np.sqrt(np.mean(x ** 2) / 10 ** (snr_db / 10))
    return x + sigma * rng.standard_normal(x.shape[0]), pos


def test_zeros_and_constant_give_no_peaks():
    assert len(pan_tompkins(np.zeros(2500), fs=FS)) == 0
    assert len(pan_tompkins(np.full(2500, 3.2), fs=FS)) == 0


@pytest.mark.parametrize("cfg", [MATERNAL, FETAL], ids=["maternal", "fetal"])
def test_spike_train_recovered_exactly(cfg):
    x, pos = spike_train()
    assert pos.tolist() == list(range(150, 2500, 150))
    p = pan_tompkins(Signal(x, FS), cfg)
    assert len(p) == len(pos) == 16
    assert np.abs(p.indices - pos).max() <= 3


@pytest.mark.parametrize("cfg", [MATERNAL, FETAL], ids=["maternal", "fetal"])
@pytest.mark.parametrize("seed", range(5))
def test_spike_train_under_noise(cfg, seed):
    x, pos = noisy_train(seed)
    p = pan_tompkins(x, cfg, fs=FS)
    hits = sum(np.abs(p.indices - q).min() <= 3 for q in pos) if len(p) else 0
    assert hits >= 0.95 * len(pos)
    assert np.all(np.diff(p.indices) >= refractory(cfg))


@given(st.floats(1e-3, 1e3))
@settings(max_examples=30, deadline=None)
def test_amplitude_scale_invariance(c):
    x, _ = noisy_train(3)
    for cfg in (MATERNAL, FETAL):
        assert pan_tompkins(c * x, cfg, fs=FS) == pan_tompkins(x, cfg, fs=FS)


def test_amplitude_invariance_on_recording(synthetic_recording):
    x = synthetic_recording.data[:, 1]
    for c in (0.01, 7.0, 2.0 ** 20):
        assert pan_tompkins(c * x, FETAL, fs=FS) == pan_tompkins(x, FETAL, fs=FS)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(["maternal", "fetal"]))
@settings(max_examples=30, deadline=None)
def test_refractory_spacing_fuzz(seed, name):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(2500) * rng.uniform(0.1, 10)
    if rng.uniform() < 0.5:
        x = np.cumsum(x)
    cfg = preset(name)
    p = pan_tompkins(x, cfg, fs=FS)
    assert np.all(np.diff(p.indices) >= refractory(cfg))
    assert np.all((p.indices >= 0) & (p.indices < 2500))


def test_short_signal_warns():
    x, _ = spike_train(n=400)
    with pytest.warns(UserWarning, match="2 s"):
        pan_tompkins(x, fs=FS)


def test_bare_array_needs_fs():
    with pytest.raises(ContractError):
        pan_tompkins(np.zeros(10))


def test_band_above_nyquist_rejected():
    with pytest.raises(ConfigError):
        pan_tompkins(np.zeros(2500), FETAL, fs=50.0)
    with pytest.raises(ConfigError):
        preset("fetal", low_hz=40.0).validate(FS)
    with pytest.raises(ConfigError):
        preset("paediatric")


def test_biquads_are_butterworth():
    from scipy import signal as sps
    b, a = biquad_lowpass(15.0, FS)
    _, h = sps.freqz(b, a, worN=[0.0, 15.0, FS / 2 - 1e-9], fs=FS)
    assert abs(h[0]) == pytest.approx(1.0, abs=1e-12)
    assert abs(h[1]) == pytest.approx(2 ** -0.5, abs=1e-9)
    b, a = biquad_highpass(5.0, FS)
    _, h = sps.freqz(b, a, worN=[0.0, 5.0, FS / 2 - 1e-9], fs=FS)
    assert abs(h[0]) < 1e-12
    assert abs(h[1]) == pytest.approx(2 ** -0.5, abs=1e-9)
    assert abs(h[2]) == pytest.approx(1.0, abs=1e-9)


def test_heart_rate_examples():
    assert heart_rate(PeakList([0, 250], FS)) == 60.0
    assert heart_rate(PeakList(np.arange(0, 2500, 150), FS)) == pytest.approx(100.0)
    p = PeakList(np.round(np.linspace(0, 2499, 22)).astype(int), FS)
    assert heart_rate(p) == pytest.approx(126.05, abs=0.01)
    q = PeakList(np.round(np.linspace(0, 2499, 23)).astype(int), FS)
    assert 110 <= heart_rate(q) <= 160
    with pytest.raises(InsufficientDataError):
        heart_rate(PeakList([5], FS))


def test_peaklist_contract():
    with pytest.raises(ContractError):
        PeakList([3, 3], FS)
    with pytest.raises(ContractError):
        PeakList([-1, 4], FS)
    assert PeakList([1, 2], FS) != PeakList([1, 2], 500.0)


def test_peak_file_format():
    text = format_peaks(PeakList([150, 300], FS), header="fetal\nsource: test")
    assert text == "# fetal\n# source: test\n150\t0.600000\n300\t1.200000\n"


@given(st.lists(st.integers(0, 10 ** 7), unique=True, max_size=60), st.sampled_from([250.0, 1000.0]))
def test_peak_file_round_trip(idx, fs):
    p = PeakList(np.array(sorted(idx), dtype=np.int64), fs)
    back, header = parse_peaks(format_peaks(p, header="h"), fs)
    assert back == p and header == "h"


def test_parse_peaks_errors():
    with pytest.raises(ParseError) as info:
        parse_peaks("10\t0.04\nx\t0.1\n", FS)
    assert info.value.line == 2
    with pytest.raises(ParseError):
        parse_peaks("10\n5\n", FS)
