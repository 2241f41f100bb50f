"""Analysis reports: both estimators side by side, z-scores, CSV and SVG.

The report always carries both estimation methods because they answer subtly
different questions: the per-job average (method i) is sensitive to per-job
fluctuation scale, the pooled determinant (method ii) to the aggregate
behaviour; on clean simulations they nearly coincide.  Two z-scores are
emitted and labeled, one per method — the per-job z uses the empirical scatter
of per-job witnesses, the pooled z uses the leading-order variance formula —
since either normalization is defensible and they differ in small samples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .sampling import (
    EstimatorOutput,
    ExperimentRecord,
    estimate_per_job,
    estimate_pooled,
)

__all__ = [
    "AnalysisReport",
    "analyze_record",
    "render_text",
    "write_scatter_csv",
    "write_scatter_svg",
]

#: Conventional failure criterion: the witness is "detected" beyond 5 sigma.
Z_FLAG = 5.0


@dataclass(frozen=True)
class AnalysisReport:
    """Everything cmd-analyze prints, in structured form.

    ``sigma_formula`` is the leading-order (adjugate-weighted) standard error
    of the pooled witness; ``z_scores`` holds (per-job z, pooled z), either
    None when its denominator is undefined.
    """

    config_id: str
    method_i: EstimatorOutput
    method_ii: EstimatorOutput
    sigma_formula: float
    z_scores: tuple[float | None, float | None]
    per_job_scatter: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        if len(self.per_job_scatter) != len(self.method_i.per_job_W):
            raise ValueError("scatter must cover exactly the included jobs")


def analyze_record(record: ExperimentRecord) -> AnalysisReport:
    """Run both estimators over a record and package the comparison."""
    mi = estimate_per_job(record)
    mii = estimate_pooled(record)
    z_i = mi.W_mean / mi.W_stderr if mi.W_stderr else None
    z_ii = mii.W_mean / mii.W_stderr if mii.W_stderr else None
    included = [j for j, job in enumerate(record.jobs) if job.job_id not in mi.excluded]
    scatter = tuple(zip(included, mi.per_job_W))
    return AnalysisReport(
        config_id=record.config_id,
        method_i=mi,
        method_ii=mii,
        sigma_formula=mii.W_stderr,
        z_scores=(z_i, z_ii),
        per_job_scatter=scatter,
    )


def _fmt_z(z: float | None) -> str:
    return f"{z:+8.3f}" if z is not None else "   undef"


def render_text(report: AnalysisReport) -> str:
    """Human-readable summary table with the 5-sigma verdict."""
    mi, mii = report.method_i, report.method_ii
    stderr_i = f"{mi.W_stderr:.3e}" if mi.W_stderr is not None else "undef"
    lines = [
        f"config:           {report.config_id}",
        f"jobs included:    {len(mi.per_job_W)}"
        + (f"  (excluded: {len(mi.excluded)})" if mi.excluded else ""),
        f"method i  (per-job W, averaged):  W = {mi.W_mean:+.6e}  stderr = {stderr_i}",
        f"method ii (pooled p, one W):      W = {mii.W_mean:+.6e}  sigma  = {report.sigma_formula:.3e}",
        f"z (per-job / pooled):             {_fmt_z(report.z_scores[0])} / {_fmt_z(report.z_scores[1])}",
    ]
    z = report.z_scores[1]
    if z is None:
        verdict = "UNDEFINED (zero variance)"
    elif abs(z) > Z_FLAG:
        verdict = f"FAIL (|z| > {Z_FLAG:g}: inconsistent with a qubit model)"
    else:
        verdict = f"PASS (|z| <= {Z_FLAG:g}: consistent with a qubit model)"
    lines.append(f"verdict:          {verdict}")
    return "\n".join(lines)


def write_scatter_csv(report: AnalysisReport, path: str | Path) -> None:
    """Per-job witness scatter (job index vs W), byte-deterministic."""
    rows = ["job_index,W"]
    rows += [f"{idx},{w!r}" for idx, w in report.per_job_scatter]
    Path(path).write_text("\n".join(rows) + "\n")


# ---------------------------------------------------------------------------
# Minimal deterministic SVG scatter


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = np.linspace(lo, hi, n)
    return [float(t) for t in raw]


def write_scatter_svg(report: AnalysisReport, path: str | Path) -> None:
    """Per-job scatter with error bars and both method lines.

    Per-point error bars use the formula sigma scaled to one job's counts
    (sqrt(n_jobs) times the pooled sigma, exact for equal-size jobs).
    """
    width, height = 640, 400
    ml, mr, mt, mb = 70, 20, 20, 45
    pw, ph = width - ml - mr, height - mt - mb
    pts = report.per_job_scatter
    n = len(pts)
    bar = (
        report.sigma_formula * math.sqrt(n)
        if report.sigma_formula is not None
        else 0.0
    )
    ys = [w for _, w in pts]
    lo = min(min(y - bar for y in ys), 0.0)
    hi = max(max(y + bar for y in ys), 0.0)
    pad = 0.08 * (hi - lo or 1.0)
    lo, hi = lo - pad, hi + pad
    xs = [idx for idx, _ in pts]
    x0, x1 = min(xs), max(xs)
    if x1 == x0:
        x1 = x0 + 1

    def px(x: float) -> float:
        return ml + pw * (x - x0) / (x1 - x0)

    def py(y: float) -> float:
        return mt + ph * (hi - y) / (hi - lo)

    e = []
    e.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">'
    )
    e.append(f'<rect width="{width}" height="{height}" fill="white"/>')
    # axes and ticks
    e.append(
        f'<line x1="{ml}" y1="{mt}" x2="{ml}" y2="{mt + ph}" stroke="black"/>'
        f'<line x1="{ml}" y1="{mt + ph}" x2="{ml + pw}" y2="{mt + ph}" stroke="black"/>'
    )
    for t in _ticks(lo, hi):
        y = py(t)
        e.append(
            f'<line x1="{ml - 4}" y1="{y:.2f}" x2="{ml}" y2="{y:.2f}" stroke="black"/>'
            f'<text x="{ml - 8}" y="{y + 4:.2f}" text-anchor="end">{t:.2e}</text>'
        )
    step = max(1, n // 8)
    for idx in xs[::step]:
        x = px(idx)
        e.append(
            f'<line x1="{x:.2f}" y1="{mt + ph}" x2="{x:.2f}" y2="{mt + ph + 4}" stroke="black"/>'
            f'<text x="{x:.2f}" y="{mt + ph + 16}" text-anchor="middle">{idx}</text>'
        )
    e.append(
        f'<text x="{ml + pw / 2:.2f}" y="{height - 8}" text-anchor="middle">job index</text>'
    )
    # zero line and method lines
    e.append(
        f'<line x1="{ml}" y1="{py(0.0):.2f}" x2="{ml + pw}" y2="{py(0.0):.2f}" '
        'stroke="gray" stroke-dasharray="4 3"/>'
    )
    yi = py(report.method_i.W_mean)
    e.append(
        f'<line x1="{ml}" y1="{yi:.2f}" x2="{ml + pw}" y2="{yi:.2f}" stroke="firebrick"/>'
    )
    yii = py(report.method_ii.W_mean)
    e.append(
        f'<line x1="{ml}" y1="{yii:.2f}" x2="{ml + pw}" y2="{yii:.2f}" '
        'stroke="steelblue" stroke-dasharray="7 3"/>'
    )
    # scatter with error bars
    for idx, w in pts:
        x = px(idx)
        if bar > 0.0:
            e.append(
                f'<line x1="{x:.2f}" y1="{py(w - bar):.2f}" x2="{x:.2f}" '
                f'y2="{py(w + bar):.2f}" stroke="firebrick" stroke-width="0.8"/>'
            )
        e.append(f'<circle cx="{x:.2f}" cy="{py(w):.2f}" r="2.6" fill="firebrick"/>')
    e.append(
        f'<text x="{ml + 8}" y="{mt + 14}" fill="firebrick">per-job W (mean {report.method_i.W_mean:+.3e})</text>'
    )
    e.append(
        f'<text x="{ml + 8}" y="{mt + 28}" fill="steelblue">pooled W {report.method_ii.W_mean:+.3e}</text>'
    )
    e.append("</svg>")
    Path(path).write_text("\n".join(e) + "\n")
