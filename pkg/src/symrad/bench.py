"""Benchmark harness: reconstruction error and inversion wall-clock per
method, written as CSV, a plain-text table, and rendered figures.

Forward projection is excluded from the timings: the comparison concerns
inversion cost only.
"""
from __future__ import annotations

import csv
import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import TomographyError
from .forward import QuadratureSpec, Sinogram, SinogramSpec, radon_forward
from .grids import Field, GridSpec
from .inversion import (CircleMeanParams, SpectralParams,
                        invert_helgason, invert_m2_fourier,
                        invert_radon_circle_mean, reconstruction_error)
from .phantoms import Phantom

METHODS = ("m2", "circle-mean", "helgason")

CSV_COLUMNS = ("method", "max_abs", "l2", "median_seconds",
               "A", "M", "N", "L", "X_max")


@dataclass(frozen=True)
class ExperimentConfig:
    phantom: Phantom
    sinogram_spec: SinogramSpec
    grid_spec: GridSpec
    quadrature: QuadratureSpec = QuadratureSpec()
    methods: tuple = METHODS
    circle_mean: CircleMeanParams = CircleMeanParams()
    spectral: SpectralParams = SpectralParams()
    repetitions: int = 3

    def __post_init__(self):
        if not self.methods:
            raise ValueError("method list must be non-empty")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if self.repetitions < 3:
            raise ValueError("need at least 3 timing repetitions")


@dataclass
class MethodResult:
    method: str
    max_abs: float = math.nan
    l2: float = math.nan
    median_seconds: float = math.nan
    field: Field | None = None
    failure: str | None = None


@dataclass
class BenchmarkReport:
    format_version: str = "symrad-bench-1"
    results: list = field(default_factory=list)
    config: dict = field(default_factory=dict)


def _invoke(method: str, sg: Sinogram, cfg: ExperimentConfig) -> Field:
    if method == "m2":
        return invert_m2_fourier(sg, cfg.grid_spec, cfg.spectral)
    if method == "circle-mean":
        return invert_radon_circle_mean(sg, cfg.grid_spec, cfg.circle_mean,
                                        extend="zero")
    if method == "helgason":
        return invert_helgason(sg, cfg.grid_spec, cfg.spectral)
    raise ValueError(f"unknown method {method!r}")


def run_benchmark(cfg: ExperimentConfig,
                  sinogram: Sinogram | None = None) -> BenchmarkReport:
    """Time every requested inversion and score it against the phantom.

    Per-method failures are recorded without aborting the other methods.
    """
    sg = sinogram if sinogram is not None else radon_forward(
        cfg.phantom, cfg.sinogram_spec, cfg.quadrature)
    sp = cfg.sinogram_spec
    report = BenchmarkReport(config={
        "A": sp.n_angles, "M": sp.n_offsets, "N": cfg.grid_spec.samples,
        "L": cfg.grid_spec.extent, "X_max": sp.offset_halfwidth,
        "repetitions": cfg.repetitions,
    })
    for method in cfg.methods:
        res = MethodResult(method=method)
        try:
            times = []
            out = None
            for _ in range(cfg.repetitions):
                t0 = time.perf_counter()
                out = _invoke(method, sg, cfg)
                times.append(time.perf_counter() - t0)
            res.field = out
            res.max_abs = reconstruction_error(out, cfg.phantom, "max_abs")
            res.l2 = reconstruction_error(out, cfg.phantom, "l2_cellweighted")
            res.median_seconds = float(np.median(times))
        except TomographyError as exc:
            res.failure = f"{type(exc).__name__}: {exc}"
        report.results.append(res)
    return report


def write_csv(report: BenchmarkReport, path) -> None:
    cfg = report.config
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in report.results:
            writer.writerow([r.method, r.max_abs, r.l2, r.median_seconds,
                             cfg["A"], cfg["M"], cfg["N"], cfg["L"],
                             cfg["X_max"]])


def format_table(report: BenchmarkReport) -> str:
    cfg = report.config
    lines = [
        f"{report.format_version}  "
        f"A={cfg['A']} M={cfg['M']} N={cfg['N']} L={cfg['L']} "
        f"X_max={cfg['X_max']} reps={cfg['repetitions']}",
        f"{'method':<14}{'max_abs':>12}{'l2':>12}{'median_s':>12}",
    ]
    for r in report.results:
        if r.failure:
            lines.append(f"{r.method:<14}FAILED: {r.failure}")
        else:
            lines.append(f"{r.method:<14}{r.max_abs:>12.4e}{r.l2:>12.4e}"
                         f"{r.median_seconds:>12.4f}")
    return "\n".join(lines) + "\n"


def render_figures(report: BenchmarkReport, cfg: ExperimentConfig,
                   out_dir) -> list:
    """Render reconstruction images and an error/timing summary as PNGs."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    from .phantoms import phantom_to_field

    out_dir = Path(out_dir)
    written = []
    ok = [r for r in report.results if r.failure is None and r.field is not None]

    if ok:
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            truth = phantom_to_field(cfg.phantom, cfg.grid_spec).values
        L = cfg.grid_spec.extent
        ext = (-L, L, -L, L)
        fig, axes = plt.subplots(2, len(ok) + 1,
                                 figsize=(3.2 * (len(ok) + 1), 6.0),
                                 squeeze=False)
        axes[0, 0].imshow(truth.T, origin="lower", extent=ext)
        axes[0, 0].set_title("phantom")
        axes[1, 0].axis("off")
        for j, r in enumerate(ok, start=1):
            axes[0, j].imshow(r.field.values.T, origin="lower", extent=ext)
            axes[0, j].set_title(r.method)
            im = axes[1, j].imshow((r.field.values - truth).T,
                                   origin="lower", extent=ext, cmap="RdBu")
            axes[1, j].set_title(f"error (max {r.max_abs:.1e})")
            fig.colorbar(im, ax=axes[1, j], fraction=0.046)
        fig.tight_layout()
        p = out_dir / "reconstructions.png"
        fig.savefig(p, dpi=120)
        plt.close(fig)
        written.append(p)

        fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(8, 3.5))
        names = [r.method for r in ok]
        ax1.bar(names, [r.max_abs for r in ok])
        ax1.set_ylabel("max-abs error")
        ax1.set_yscale("log")
        ax2.bar(names, [r.median_seconds for r in ok], color="tab:orange")
        ax2.set_ylabel("median inversion seconds")
        ax2.set_yscale("log")
        fig.tight_layout()
        p = out_dir / "benchmark_summary.png"
        fig.savefig(p, dpi=120)
        plt.close(fig)
        written.append(p)
    return written


def write_report(report: BenchmarkReport, cfg: ExperimentConfig, out_dir,
                 figures: bool = True) -> dict:
    """Write CSV + text table (+ figures) into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "benchmark.csv"
    write_csv(report, csv_path)
    table_path = out_dir / "benchmark.txt"
    table_path.write_text(format_table(report))
    artifacts = {"csv": csv_path, "table": table_path}
    if figures:
        artifacts["figures"] = render_figures(report, cfg, out_dir)
    return artifacts
