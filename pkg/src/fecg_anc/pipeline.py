"""
Extraction pipeline
===================

``PipelineConfig`` is a flat key=value configuration; ``run_pipeline`` loads
a recording, cancels the reference channel from the desired one with the
chosen adaptive filter, detects fetal R peaks in the residual and writes
CSV traces, a peak file, a key=value report and SVG plots.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .combination import Combination, make_combination, run_combination
from .errors import AncError, ConfigError, InputError, ParseError
from .filters import LMS, NLMS, RLS, run_filter
from .metrics import (DetectionReport, detection_report, match_peaks, mse_curve,
                      snr_db)
from .qrs import PeakList, format_peaks, heart_rate, pan_tompkins, parse_peaks, preset
from .recording import read_recording
from .signals import MultichannelRecording, Signal, remove_mean

OUTPUT_DIR_ENV = "FECG_ANC_OUTPUT_DIR"
SINGLE = ("lms", "nlms", "rls")
COMBINED = ("clms", "crls", "rls-lms")
ALGORITHMS = SINGLE + COMBINED
BATCH_ALGORITHMS = ("nlms", "rls", "clms", "rls-lms", "crls")
NORMALIZE = ("none", "peak", "rms")


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


@dataclass
class PipelineConfig:
    input: str = ""
    fs: float = 250.0
    desired_channel: int = 2
    reference_channel: int = 8
    algorithm: str = "crls"
    order: int = 10
    lms_mu: float = 0.01
    nlms_mu: float = 1.0
    nlms_eps: float = 1e-6
    rls_lambda: float = 0.999
    rls_delta: float = 100.0
    clms_mu1: float = 0.05
    clms_mu2: float = 0.005
    crls_lambda1: float = 0.98
    crls_lambda2: float = 0.9995
    rlslms_lambda: float = 0.999
    rlslms_mu: float = 0.01
    mu_a: float = 100.0
    a_plus: float = 4.0
    a0: float = 0.0
    remove_mean: bool = True
    normalize: str = "peak"
    burn_in: int = 25
    detector_preset: str = "fetal"
    match_tol_ms: float = 50.0
    annotation: str = ""
    output_dir: str = ""
    plot_start: int = 1600
    plot_end: int = 2400

    def __post_init__(self):
        if not self.output_dir:
            self.output_dir = os.environ.get(OUTPUT_DIR_ENV, "fecg_out")
        self.algorithm = self.algorithm.lower().replace("+", "-").replace("_", "-")

    # -- text form --------------------------------------------------------
    @classmethod
    def keys(cls) -> list[str]:
        return [f.name for f in fields(cls)]

    def update(self, pairs: dict) -> "PipelineConfig":
        """Return a copy with ``pairs`` (strings or typed values) applied."""
        types = {f.name: f.type for f in fields(self)}
        values = dataclasses.asdict(self)
        for key, raw in pairs.items():
            key = key.strip().replace("-", "_")
            if key not in types:
                raise ConfigError(f"unknown config key {key!r}")
            kind = types[key]
            try:
                if not isinstance(raw, str):
                    values[key] = raw
                elif kind == "bool":
                    values[key] = _bool(raw)
                elif kind == "int":
                    values[key] = int(raw)
                elif kind == "float":
                    values[key] = float(raw)
                else:
                    values[key] = raw.strip()
            except ValueError:
                raise ConfigError(f"bad value for {key}: {raw!r}") from None
        return PipelineConfig(**values)

    @classmethod
    def from_text(cls, text: str, base: "PipelineConfig | None" = None) -> "PipelineConfig":
        pairs = {}
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key=value", lineno)
            key, value = line.split("=", 1)
            pairs[key.strip()] = value.strip()
        return (base or cls()).update(pairs)

    def to_text(self) -> str:
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            out.append(f"{f.name}={str(v).lower() if isinstance(v, bool) else v}")
        return "\n".join(out) + "\n"

    def validate(self, n_channels: int | None = None) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ConfigError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.desired_channel == self.reference_channel:
            raise ConfigError("desired and reference channels must differ")
        for name in ("desired_channel", "reference_channel"):
            ch = getattr(self, name)
            if ch < 1 or (n_channels is not None and ch > n_channels):
                raise ConfigError(f"{name}={ch} outside 1..{n_channels or '?'}")
        if self.order < 1:
            raise ConfigError("order must be >= 1")
        if self.burn_in < 0:
            raise ConfigError("burn_in must be >= 0")
        if self.normalize not in NORMALIZE:
            raise ConfigError(f"normalize must be one of {NORMALIZE}")
        if not self.fs > 0:
            raise ConfigError("fs must be positive")
        if not self.match_tol_ms > 0:
            raise ConfigError("match_tol_ms must be positive")
        if not 0 <= self.plot_start < self.plot_end:
            raise ConfigError("need 0 <= plot_start < plot_end")
        preset(self.detector_preset).validate(self.fs)
        self.make_filter()

    def make_filter(self):
        """Instantiate the configured filter or combination."""
        M, alg = self.order, self.algorithm
        try:
            if alg == "lms":
                return LMS(M, self.lms_mu)
            if alg == "nlms":
                return NLMS(M, self.nlms_mu, self.nlms_eps)
            if alg == "rls":
                return RLS(M, self.rls_lambda, self.rls_delta)
            mix = dict(mu_a=self.mu_a, a_plus=self.a_plus, a0=self.a0, delta=self.rls_delta)
            if alg == "clms":
                return make_combination("clms", M, mu1=self.clms_mu1, mu2=self.clms_mu2, **mix)
            if alg == "crls":
                return make_combination("crls", M, lam1=self.crls_lambda1,
                                        lam2=self.crls_lambda2, **mix)
            if alg == "rls-lms":
                return make_combination("rls-lms", M, lam=self.rlslms_lambda,
                                        mu=self.rlslms_mu, **mix)
        except AncError as exc:
            raise ConfigError(str(exc)) from None
        raise ConfigError(f"unknown algorithm {alg!r}")


def load_config(path, overrides: dict | None = None) -> PipelineConfig:
    cfg = PipelineConfig.from_text(Path(path).read_text())
    return cfg.update(overrides) if overrides else cfg


# -- preprocessing --------------------------------------------------------

def normalize(s: Signal, mode: str = "peak") -> Signal:
    """Scale to unit peak magnitude or unit RMS; all-zero input is returned as is."""
    if mode not in NORMALIZE:
        raise ConfigError(f"unknown normalisation {mode!r}")
    if mode == "none":
        return s
    x = s.samples
    scale = np.abs(x).max() if mode == "peak" else np.sqrt(np.mean(x * x))
    return s if scale == 0 else s.with_samples(x / scale)


def preprocess(s: Signal, cfg: PipelineConfig) -> Signal:
    if cfg.remove_mean:
        s = remove_mean(s)
    return normalize(s, cfg.normalize)


# -- single run -----------------------------------------------------------

@dataclass
class RunResult:
    algorithm: str
    fs: float
    d: np.ndarray
    y: np.ndarray
    e: np.ndarray
    eta: np.ndarray | None
    snr_db: float
    mse: np.ndarray
    peaks: PeakList
    report: DetectionReport | None = None


@dataclass
class RunArtifacts:
    result: RunResult
    paths: dict[str, Path] = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)


def extract(rec: MultichannelRecording, cfg: PipelineConfig,
            annotation: PeakList | None = None) -> RunResult:
    """Run one configuration on an in-memory recording (no file output)."""
    cfg.validate(rec.n_channels)
    d = preprocess(rec.channel(cfg.desired_channel - 1), cfg)
    x = preprocess(rec.channel(cfg.reference_channel - 1), cfg)
    filt = cfg.make_filter()
    try:
        if isinstance(filt, Combination):
            run = run_combination(d, x, filt)
            eta = run.eta
        else:
            run = run_filter(d, x, filt)
            eta = None
    except AncError as exc:
        raise type(exc)(f"[filter:{cfg.algorithm}] {exc}") from exc
    b = min(cfg.burn_in, len(d) - 1)
    snr = snr_db(run.e[b:], run.y[b:])
    peaks = pan_tompkins(Signal(run.e, rec.fs), preset(cfg.detector_preset))
    report = None
    if annotation is not None:
        report = detection_report(match_peaks(annotation, peaks, cfg.match_tol_ms))
    return RunResult(cfg.algorithm, rec.fs, d.samples, run.y, run.e, eta, snr,
                     mse_curve(run.e), peaks, report)


def _safe_path(out_dir: Path, name: str) -> Path:
    path = (out_dir / name).resolve()
    if out_dir.resolve() not in path.parents:
        raise ConfigError(f"refusing to write outside {out_dir}: {name}")
    return path


def write_trace(path, values, fs: float) -> None:
    """CSV trace: header then ``n,time_s,value`` with 9 significant digits."""
    lines = ["n,time_s,value"]
    lines += [f"{n},{n / fs:.6f},{v:.9g}" for n, v in enumerate(np.asarray(values).tolist())]
    Path(path).write_text("\n".join(lines) + "\n")


def read_trace(path) -> np.ndarray:
    """Read a trace written by :func:`write_trace` (or a bare value column)."""
    vals = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("n,"):
            continue
        parts = line.split(",")
        try:
            vals.append(float(parts[-1]))
        except ValueError:
            raise ParseError(f"bad trace value {parts[-1]!r}", lineno) from None
    if not vals:
        raise InputError(f"{path} holds no samples")
    return np.array(vals)


def _fmt(v) -> str:
    if v is None:
        return "absent"
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def report_lines(res: RunResult, cfg: PipelineConfig, notices=()) -> list[str]:
    b = min(cfg.burn_in, len(res.e) - 1)
    lines = [
        f"algorithm={res.algorithm}",
        f"desired_channel={cfg.desired_channel}",
        f"reference_channel={cfg.reference_channel}",
        f"n_samples={len(res.e)}",
        f"fs={res.fs:g}",
        f"burn_in={cfg.burn_in}",
        f"snr_db={_fmt(res.snr_db)}",
        f"final_mse={res.mse[-1]:.9g}",
        f"steady_mse={float(np.mean(res.e[b:] ** 2)):.9g}",
        f"n_peaks={len(res.peaks)}",
    ]
    if len(res.peaks) >= 2:
        lines.append(f"heart_rate_bpm={heart_rate(res.peaks):.2f}")
    if res.report is not None:
        lines += [f"{k}={_fmt(v)}" for k, v in res.report.as_dict().items()]
    else:
        lines.append("detection=absent")
    lines += [f"notice={n}" for n in notices]
    return lines


def load_annotation(cfg: PipelineConfig, fs: float, notices: list) -> PeakList | None:
    if not cfg.annotation:
        notices.append("no annotation configured; detection report omitted")
        return None
    path = Path(cfg.annotation)
    if not path.exists():
        notices.append(f"annotation {path} not found; detection report omitted")
        return None
    peaks, _ = parse_peaks(path.read_text(), fs)
    return peaks


def _load(cfg: PipelineConfig) -> MultichannelRecording:
    if not cfg.input:
        raise ConfigError("no input recording configured")
    try:
        return read_recording(cfg.input, cfg.fs)
    except OSError as exc:
        raise InputError(f"[ingest] cannot read {cfg.input}: {exc}") from exc
    except AncError as exc:
        raise type(exc)(f"[ingest] {exc}") from exc


def write_run(res: RunResult, cfg: PipelineConfig, out_dir: Path, notices=(),
              plots: bool = True) -> dict[str, Path]:
    alg = res.algorithm
    paths = {
        "fecg": _safe_path(out_dir, f"fecg_{alg}.csv"),
        "output": _safe_path(out_dir, f"output_{alg}.csv"),
        "peaks": _safe_path(out_dir, f"peaks_{alg}.txt"),
        "report": _safe_path(out_dir, f"report_{alg}.txt"),
        "config": _safe_path(out_dir, f"config_{alg}.txt"),
    }
    write_trace(paths["fecg"], res.e, res.fs)
    write_trace(paths["output"], res.y, res.fs)
    if res.eta is not None:
        paths["eta"] = _safe_path(out_dir, f"eta_{alg}.csv")
        write_trace(paths["eta"], res.eta, res.fs)
    header = (f"fetal R peaks detected in the {alg} residual\n"
              f"preset={cfg.detector_preset} channel={cfg.desired_channel} fs={res.fs:g}")
    paths["peaks"].write_text(format_peaks(res.peaks, header))
    paths["report"].write_text("\n".join(report_lines(res, cfg, notices)) + "\n")
    paths["config"].write_text(cfg.update({"algorithm": alg}).to_text())
    if plots:
        from . import plots as _plots
        paths["waveform"] = _safe_path(out_dir, f"waveform_{alg}.svg")
        _plots.waveform_svg(paths["waveform"], [res], cfg.plot_start, cfg.plot_end)
        paths["mse_plot"] = _safe_path(out_dir, f"mse_{alg}.svg")
        _plots.mse_svg(paths["mse_plot"], [res])
    return paths


def run_pipeline(cfg: PipelineConfig, plots: bool = True) -> RunArtifacts:
    """Load, extract, detect and write every artifact of one run."""
    rec = _load(cfg)
    cfg.validate(rec.n_channels)
    notices: list[str] = []
    ann = load_annotation(cfg, rec.fs, notices)
    res = extract(rec, cfg, ann)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    return RunArtifacts(res, write_run(res, cfg, out_dir, notices, plots), notices)


# -- batch ----------------------------------------------------------------

@dataclass
class BatchArtifacts:
    results: dict[str, RunResult]
    ranking: list[tuple[str, float]]
    paths: dict[str, Path] = field(default_factory=dict)
    notices: list[str] = field(default_factory=list)


def run_batch(cfg: PipelineConfig, algorithms=BATCH_ALGORITHMS,
              plots: bool = True) -> BatchArtifacts:
    """Run several algorithms on the same pair and rank them by SNR (lowest first)."""
    rec = _load(cfg)
    notices: list[str] = []
    ann = load_annotation(cfg, rec.fs, notices)
    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    results, paths = {}, {}
    for alg in algorithms:
        c = cfg.update({"algorithm": alg})
        c.validate(rec.n_channels)
        res = extract(rec, c, ann)
        results[res.algorithm] = res
        for k, p in write_run(res, c, out_dir, notices, plots=False).items():
            paths[f"{res.algorithm}:{k}"] = p
    ranking = sorted(((a, r.snr_db) for a, r in results.items()), key=lambda t: (t[1], t[0]))
    rows = ["rank,algorithm,snr_db,final_mse,n_peaks,sensitivity,ppv,accuracy,f1"]
    for i, (alg, snr) in enumerate(ranking, 1):
        r = results[alg]
        det = r.report.as_dict() if r.report else {}
        cells = [det.get(k) for k in ("sensitivity", "ppv", "accuracy", "f1")]
        rows.append(",".join([str(i), alg, f"{snr:.6f}", f"{r.mse[-1]:.9g}", str(len(r.peaks))]
                             + ["" if c is None else f"{c:.2f}" for c in cells]))
    paths["ranking"] = _safe_path(out_dir, "ranking.csv")
    paths["ranking"].write_text("\n".join(rows) + "\n")
    summary = [f"rank_{i}={alg} snr_db={snr:.6f}" for i, (alg, snr) in enumerate(ranking, 1)]
    summary += [f"notice={n}" for n in notices]
    paths["summary"] = _safe_path(out_dir, "batch_report.txt")
    paths["summary"].write_text("\n".join(summary) + "\n")
    if plots:
        from . import plots as _plots
        ordered = [results[a] for a in results]
        paths["mse_plot"] = _safe_path(out_dir, "mse_comparison.svg")
        _plots.mse_svg(paths["mse_plot"], ordered)
        paths["waveform"] = _safe_path(out_dir, "waveforms.svg")
        _plots.waveform_svg(paths["waveform"], ordered, cfg.plot_start, cfg.plot_end)
    return BatchArtifacts(results, ranking, paths, notices)
