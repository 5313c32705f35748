"""
Synthetic signals with known ground truth
=========================================

``spike_train`` feeds detector tests. ``maternal_fetal_recording`` builds a
DaISy-shaped 8-channel record (five abdominal, three thoracic leads at
250 Hz) from two cardiac dipoles:

* each beat is a sum of Gaussian P, Q, R, S, T waves whose 3-D directions
  differ, so no single lead is a scaled copy of another;
* respiration rotates the maternal heart axis and modulates its amplitude,
  which makes the thoracic-to-abdominal maternal transfer time-varying;
* abdominal leads add the fetal dipole, baseline wander and white noise.

The fetal R-wave centres are returned as exact annotations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .recording import DAISY_ROLES
from .signals import MultichannelRecording


def spike_train(n: int = 2500, period: int = 150, first: int | None = None,
                width: float = 3.0, amplitude: float = 1.0):
    """Gaussian spikes every ``period`` samples; returns ``(x, positions)``."""
    first = period if first is None else first
    pos = np.arange(first, n - width * 4, period).astype(np.int64)
    t = np.arange(n)
    x = np.zeros(n)
    for p in pos:
        x += amplitude * np.exp(-0.5 * ((t - p) / width) ** 2)
    return x, pos


# (offset s, width s, direction xyz); R peak at offset 0
MATERNAL_WAVES = (
    (-0.200, 0.025, (0.10, 0.05, 0.02)),
    (-0.030, 0.010, (-0.12, 0.06, -0.05)),
    (0.000, 0.012, (1.00, 0.40, -0.30)),
    (0.035, 0.012, (-0.25, -0.35, 0.20)),
    (0.280, 0.060, (0.25, 0.15, 0.10)),
)
FETAL_WAVES = (
    (-0.100, 0.012, (0.05, 0.02, 0.01)),
    (-0.015, 0.005, (-0.10, 0.05, 0.00)),
    (0.000, 0.006, (1.00, 0.30, 0.20)),
    (0.018, 0.006, (-0.30, -0.20, 0.10)),
    (0.150, 0.030, (0.15, 0.10, 0.05)),
)

# lead directions (rows: channels 1-8)
MATERNAL_LEADS = np.array([
    [0.30, -0.45, 0.40],
    [0.60, 0.50, 0.55],
    [0.45, -0.10, 0.50],
    [-0.35, 0.20, 0.10],
    [0.20, 0.15, -0.35],
    [1.10, 0.20, -0.30],
    [0.40, 1.00, 0.30],
    [0.90, -0.50, 0.60],
])
ABDOMINAL_GAIN = (0.45, 0.8, 0.5, -0.4, 0.35)

FETAL_LEADS = np.array([
    [0.22, 0.05, -0.10],
    [0.06, -0.03, 0.02],
    [0.10, 0.08, 0.00],
    [-0.08, 0.02, 0.05],
    [0.12, -0.06, 0.04],
    [0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0],
    [0.005, 0.0, 0.0],
])


@dataclass(frozen=True)
class SyntheticRecording:
    recording: MultichannelRecording
    fetal_peaks: np.ndarray
    maternal_peaks: np.ndarray


def _beat_times(rng, duration, rr, jitter, start):
    times, t = [], start
    while t < duration:
        times.append(t)
        t += rr + jitter * rng.standard_normal()
    return np.array(times)


def _dipole(t, beats, waves):
    v = np.zeros((t.shape[0], 3))
    for tb in beats:
        for off, wid, direction in waves:
            g = np.exp(-0.5 * ((t - tb - off) / wid) ** 2)
            v += g[:, None] * np.asarray(direction)
    return v


def _rotation_z(theta):
    c, s = np.cos(theta), np.sin(theta)
    R = np.zeros(theta.shape + (3, 3))
    R[:, 0, 0], R[:, 0, 1], R[:, 1, 0], R[:, 1, 1] = c, -s, s, c
    R[:, 2, 2] = 1.0
    return R


def maternal_fetal_recording(seed: int = 2500, n: int = 2500, fs: float = 250.0,
                             maternal_rr: float = 0.77, fetal_rr: float = 0.445,
                             resp_hz: float = 0.25, tilt: float = 0.1,
                             resp_gain: float = 0.2, mismatch: float = 0.05,
                             noise: float = 0.01, wander: float = 0.01,
                             fetal_scale: float = 1.0) -> SyntheticRecording:
    """Simulate an 8-lead abdominal/thoracic recording in millivolts.

    Thoracic leads project the (respiration-tilted) maternal dipole.
    Abdominal maternal activity is a short FIR-smoothed, delayed copy of
    thoracic lead 8 whose gain breathes by ``resp_gain``, plus a
    ``mismatch`` share of a different dipole projection that no filter on
    lead 8 can reproduce exactly.
    """
    rng = np.random.default_rng(seed)
    t = np.arange(n) / fs
    duration = n / fs
    m_beats = _beat_times(rng, duration + 1, maternal_rr, 0.015, 0.31)
    f_beats = _beat_times(rng, duration + 1, fetal_rr, 0.008, 0.12)

    resp_phase = 2 * np.pi * resp_hz * t + rng.uniform(0, 2 * np.pi)
    m = _dipole(t, m_beats, MATERNAL_WAVES)
    m = np.einsum("nij,nj->ni", _rotation_z(tilt * np.sin(resp_phase)), m)
    f = _dipole(t, f_beats, FETAL_WAVES)

    data = np.zeros((n, 8))
    data[:, 5:] = m @ MATERNAL_LEADS[5:].T
    ref = data[:, 7].copy()
    for k in range(5):
        taps = rng.dirichlet(np.ones(3))
        lag = int(rng.integers(0, 4))
        path = np.convolve(ref, np.r_[np.zeros(lag), taps])[:n]
        gain = ABDOMINAL_GAIN[k] * (1 + resp_gain * np.sin(resp_phase + rng.uniform(0, 2 * np.pi)))
        data[:, k] = gain * path + mismatch * (m @ MATERNAL_LEADS[k])
    data += fetal_scale * (f @ FETAL_LEADS.T)
    data[:, :5] += wander * np.sin(resp_phase)[:, None] * rng.uniform(0.5, 1.0, 5)
    data += noise * rng.standard_normal(data.shape)
    data = np.round(data, 6)

    def idx(beats):
        k = np.round(beats * fs).astype(np.int64)
        return k[(k >= 0) & (k < n)]

    rec = MultichannelRecording(data, fs, DAISY_ROLES)
    return SyntheticRecording(rec, idx(f_beats), idx(m_beats))
