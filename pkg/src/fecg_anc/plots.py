"""Static SVG figures: AECG/FECG waveform panels and MSE comparison."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

plt.rcParams["svg.hashsalt"] = "fecg-anc"
_META = {"Date": None}


def waveform_svg(path, results, start: int = 1600, end: int = 2400) -> None:
    """Input AECG on top, one extracted-FECG panel per result below."""
    first = results[0]
    n = len(first.d)
    start, end = min(start, n - 1), min(end, n)
    idx = np.arange(start, end)
    fig, axes = plt.subplots(len(results) + 1, 1, figsize=(8, 1.8 * (len(results) + 1)),
                             sharex=True)
    axes[0].plot(idx, first.d[start:end], lw=0.8, color="k")
    axes[0].set_ylabel("AECG")
    for ax, r in zip(axes[1:], results):
        ax.plot(idx, r.e[start:end], lw=0.8)
        pk = r.peaks.indices[(r.peaks.indices >= start) & (r.peaks.indices < end)]
        ax.plot(pk, r.e[pk], "o", ms=3)
        ax.set_ylabel(r.algorithm.upper())
    axes[-1].set_xlabel("sample")
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)


def mse_svg(path, results) -> None:
    fig, ax = plt.subplots(figsize=(6, 4))
    for r in results:
        ax.semilogy(np.arange(1, len(r.mse) + 1), r.mse, label=r.algorithm.upper(), lw=1)
    ax.set_xlabel("sample n")
    ax.set_ylabel("MSE(n)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata=_META)
    plt.close(fig)
