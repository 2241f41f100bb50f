"""Monte Carlo simulation of the experiment's counting structure and the two
witness estimators.

An experiment consists of ``n_jobs`` jobs; each job runs the 20 circuits
(4 measurements x 5 preparations) for ``repetitions`` repetitions of ``shots``
single-shot executions, so every probability cell is backed by
``T = n_jobs * shots * repetitions`` counts.  Records store raw ones-counts
per (job, repetition, circuit) so both estimators can be formed after the
fact:

* per-job ("method i"): estimate p within each job, take the determinant per
  job, average the per-job witnesses;
* pooled ("method ii"): pool counts across all jobs into one matrix, take a
  single determinant.

Because every term of the determinant's Leibniz expansion touches five
distinct cells and cells are sampled independently, ``det p_hat`` is an
exactly unbiased estimator of ``det p`` at any shot count — for both methods.
What shrinks with the per-job shot count is the fluctuation scale of the
per-job determinants (standard error ~ 1/shots per job), which is what the
bias study below quantifies.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .configs import ConfigSet
from .noise import DriftModel, generate_drift_ensemble
from .witness import ProbMatrix, witness, witness_variance

__all__ = [
    "ExperimentPlan",
    "JobRecord",
    "ExperimentRecord",
    "EstimatorOutput",
    "RecordSchemaError",
    "simulate_record",
    "estimate_per_job",
    "estimate_pooled",
    "estimator_bias_study",
    "BiasStudyRow",
    "record_to_dict",
    "record_from_dict",
    "save_record",
    "load_record",
]


class RecordSchemaError(ValueError):
    """A record file violates the schema; ``field`` names the first offender."""

    def __init__(self, field_path: str, message: str):
        super().__init__(f"{field_path}: {message}")
        self.field = field_path


@dataclass(frozen=True)
class ExperimentPlan:
    """Job/shot/repetition structure of one run; T = n_jobs*shots*repetitions."""

    n_jobs: int
    shots: int
    repetitions: int
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("n_jobs", "shots", "repetitions"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1, got {getattr(self, name)}")

    @property
    def total_counts(self) -> int:
        return self.n_jobs * self.shots * self.repetitions


@dataclass(frozen=True)
class JobRecord:
    """Counts of one job: array of shape (repetitions, 20, 2) holding
    (ones_count, shots) per circuit, circuits in row-major (k, j) order."""

    job_id: str
    shots: int
    repetitions: int
    counts: np.ndarray

    def __post_init__(self) -> None:
        c = np.asarray(self.counts, dtype=np.int64)
        if c.shape != (self.repetitions, 20, 2):
            raise ValueError(
                f"counts must have shape ({self.repetitions}, 20, 2), got {c.shape}"
            )
        if np.any(c[..., 0] < 0) or np.any(c[..., 0] > c[..., 1]):
            raise ValueError("need 0 <= ones_count <= shots in every cell")
        c.flags.writeable = False
        object.__setattr__(self, "counts", c)

    def cell_totals(self) -> tuple[np.ndarray, np.ndarray]:
        """(ones, shots) summed over repetitions, each shape (20,)."""
        s = self.counts.sum(axis=0)
        return s[:, 0], s[:, 1]


@dataclass(frozen=True)
class ExperimentRecord:
    """All counts of one experiment plus identifying metadata."""

    config_id: str
    device: str
    jobs: tuple[JobRecord, ...]
    timestamp: str | None = None

    def __post_init__(self) -> None:
        if len(self.jobs) == 0:
            raise ValueError("record must contain at least one job")
        object.__setattr__(self, "jobs", tuple(self.jobs))


@dataclass(frozen=True)
class EstimatorOutput:
    """Result of one estimation method.

    ``W_stderr`` is None when undefined (single included job).  ``excluded``
    lists jobs dropped for having an empty cell.
    """

    W_mean: float
    W_stderr: float | None
    per_job_W: tuple[float, ...]
    method: str
    excluded: tuple[str, ...] = field(default=())


def simulate_record(
    true_p: ProbMatrix,
    plan: ExperimentPlan,
    per_job_noise: DriftModel | None = None,
    *,
    config: ConfigSet | None = None,
    config_id: str | None = None,
    device: str = "simulator",
) -> ExperimentRecord:
    """Draw binomial counts for every (job, repetition, circuit).

    With ``per_job_noise`` set, each job samples from its own drifted matrix
    (generated from ``config``, which is then required, since drifted matrices
    are re-derived from the gate angles).  Each job's counts come from an
    independent generator spawned from ``(plan.seed, job index)``, so records
    are reproducible and independent of execution order.
    """
    if per_job_noise is not None:
        if config is None:
            raise ValueError("per_job_noise requires the generating config")
        job_ps = generate_drift_ensemble(config, per_job_noise, plan.seed)
    else:
        job_ps = [true_p] * plan.n_jobs
    if config_id is None:
        config_id = config.id if config is not None else "custom"

    jobs = []
    for n in range(plan.n_jobs):
        rng = np.random.default_rng(
            np.random.SeedSequence(plan.seed, spawn_key=(n,))
        )
        cells = job_ps[n].p[:4].reshape(20)
        ones = rng.binomial(plan.shots, cells, size=(plan.repetitions, 20))
        counts = np.stack(
            [ones, np.full_like(ones, plan.shots)], axis=-1
        )
        jobs.append(JobRecord(f"job-{n:04d}", plan.shots, plan.repetitions, counts))
    return ExperimentRecord(config_id, device, tuple(jobs))


def _job_matrix(job: JobRecord) -> ProbMatrix | None:
    ones, shots = job.cell_totals()
    if np.any(shots == 0):
        return None
    return ProbMatrix.from_rows((ones / shots).reshape(4, 5))


def estimate_per_job(record: ExperimentRecord) -> EstimatorOutput:
    """Method (i): witness per job, then average.

    ``W_stderr`` is the sample standard deviation of the per-job witnesses
    over sqrt(n_jobs); jobs with an empty cell are excluded with a warning.
    """
    ws, excluded = [], []
    for job in record.jobs:
        mat = _job_matrix(job)
        if mat is None:
            excluded.append(job.job_id)
            continue
        ws.append(witness(mat))
    if excluded:
        warnings.warn(
            f"excluded {len(excluded)} job(s) with an empty cell: {excluded}",
            stacklevel=2,
        )
    if not ws:
        raise ValueError("no job with complete counts")
    stderr = (
        float(np.std(ws, ddof=1) / np.sqrt(len(ws))) if len(ws) > 1 else None
    )
    return EstimatorOutput(
        W_mean=float(np.mean(ws)),
        W_stderr=stderr,
        per_job_W=tuple(ws),
        method="per-job",
        excluded=tuple(excluded),
    )


def estimate_pooled(record: ExperimentRecord) -> EstimatorOutput:
    """Method (ii): pool all counts cellwise, then one witness.

    The standard error comes from the leading-order variance formula; when
    cell totals are unequal (ragged records) the per-cell totals are used.
    """
    ones = np.zeros(20, dtype=np.int64)
    shots = np.zeros(20, dtype=np.int64)
    excluded = []
    for job in record.jobs:
        if np.any(job.cell_totals()[1] == 0):
            excluded.append(job.job_id)
            continue
        o, s = job.cell_totals()
        ones += o
        shots += s
    if excluded:
        warnings.warn(
            f"excluded {len(excluded)} job(s) with an empty cell: {excluded}",
            stacklevel=2,
        )
    if np.any(shots == 0):
        raise ValueError("no job with complete counts")
    p = ProbMatrix.from_rows((ones / shots).reshape(4, 5))
    w = witness(p)
    if np.all(shots == shots[0]):
        var = witness_variance(p, int(shots[0]))
    else:
        from .witness import adjugate

        adj = adjugate(p)
        cells = p.p[:4]
        var = float(
            np.sum(cells * (1.0 - cells) * adj.T[:4] ** 2 / shots.reshape(4, 5))
        )
    return EstimatorOutput(
        W_mean=w,
        W_stderr=float(np.sqrt(var)),
        per_job_W=(),
        method="pooled",
        excluded=tuple(excluded),
    )


@dataclass(frozen=True)
class BiasStudyRow:
    """Replication-averaged witness of both methods for one plan."""

    plan: ExperimentPlan
    per_job_mean: float
    per_job_se: float
    pooled_mean: float
    pooled_se: float


def estimator_bias_study(
    true_p: ProbMatrix,
    plan_grid: list[ExperimentPlan],
    replications: int = 1000,
) -> list[BiasStudyRow]:
    """Replication study of both estimators on a witness-zero truth.

    For each plan, draws ``replications`` complete experiments and reports the
    mean per-job-method and pooled-method witness with standard errors.  Since
    the determinant estimator is exactly unbiased for independently sampled
    cells, the observed means are statistical fluctuations around zero whose
    scale shrinks with the per-job shot count (~1/(shots*repetitions) per
    job) — the point of the study is to quantify that scale, not a true bias.
    """
    if abs(witness(true_p)) > 1e-10:
        raise ValueError("bias study requires a witness-zero truth matrix")
    cells = true_p.p[:4]
    rows = []
    for plan in plan_grid:
        rng = np.random.default_rng(
            np.random.SeedSequence(plan.seed, spawn_key=(0xB1A5,))
        )
        t_job = plan.shots * plan.repetitions
        # Counts per replication and job, pooled over that job's repetitions
        # (binomial additivity makes drawing the pooled count directly exact).
        ones = rng.binomial(
            t_job, cells[None, None], size=(replications, plan.n_jobs, 4, 5)
        )
        phat = ones / t_job
        full = np.broadcast_to(
            np.ones((1, 1, 1, 5)), (replications, plan.n_jobs, 1, 5)
        )
        mats = np.concatenate([phat, full], axis=2)
        per_job_w = np.linalg.det(mats)  # (replications, n_jobs)
        w_i = per_job_w.mean(axis=1)
        pooled = mats.mean(axis=1)  # equal per-job totals -> plain mean
        w_ii = np.linalg.det(pooled)
        rows.append(
            BiasStudyRow(
                plan=plan,
                per_job_mean=float(w_i.mean()),
                per_job_se=float(w_i.std(ddof=1) / np.sqrt(replications)),
                pooled_mean=float(w_ii.mean()),
                pooled_se=float(w_ii.std(ddof=1) / np.sqrt(replications)),
            )
        )
    return rows


# ---------------------------------------------------------------------------
# Record file format (JSON):
# {"config_id": str, "device": str, "timestamp": optional str,
#  "jobs": [{"job_id": str, "shots": int, "repetitions": int,
#            "counts": [[[ones, shots] x 20] x repetitions]}]}


def record_to_dict(record: ExperimentRecord) -> dict:
    out = {
        "config_id": record.config_id,
        "device": record.device,
        "jobs": [
            {
                "job_id": job.job_id,
                "shots": job.shots,
                "repetitions": job.repetitions,
                "counts": job.counts.tolist(),
            }
            for job in record.jobs
        ],
    }
    if record.timestamp is not None:
        out["timestamp"] = record.timestamp
    return out


def _require(data: dict, key: str, kind, path: str):
    if key not in data:
        raise RecordSchemaError(f"{path}{key}", "missing required field")
    value = data[key]
    if kind is int:
        if not isinstance(value, int) or isinstance(value, bool):
            raise RecordSchemaError(f"{path}{key}", f"must be an integer, got {value!r}")
    elif not isinstance(value, kind):
        raise RecordSchemaError(
            f"{path}{key}", f"must be {kind.__name__}, got {type(value).__name__}"
        )
    return value


def record_from_dict(data: dict) -> ExperimentRecord:
    """Parse and validate a record document, naming the first offending field."""
    if not isinstance(data, dict):
        raise RecordSchemaError("$", "record must be a JSON object")
    config_id = _require(data, "config_id", str, "")
    device = _require(data, "device", str, "")
    raw_jobs = _require(data, "jobs", list, "")
    if len(raw_jobs) == 0:
        raise RecordSchemaError("jobs", "must contain at least one job")
    timestamp = data.get("timestamp")
    if timestamp is not None and not isinstance(timestamp, str):
        raise RecordSchemaError("timestamp", "must be a string when present")
    jobs = []
    for idx, raw in enumerate(raw_jobs):
        path = f"jobs[{idx}]."
        if not isinstance(raw, dict):
            raise RecordSchemaError(f"jobs[{idx}]", "must be an object")
        job_id = _require(raw, "job_id", str, path)
        shots = _require(raw, "shots", int, path)
        reps = _require(raw, "repetitions", int, path)
        if shots < 1:
            raise RecordSchemaError(f"{path}shots", "must be >= 1")
        if reps < 1:
            raise RecordSchemaError(f"{path}repetitions", "must be >= 1")
        counts = _require(raw, "counts", list, path)
        try:
            arr = np.asarray(counts)
        except ValueError:
            raise RecordSchemaError(
                f"{path}counts", "must be a rectangular array of integers"
            ) from None
        if arr.dtype == object or not np.issubdtype(arr.dtype, np.integer):
            raise RecordSchemaError(
                f"{path}counts", f"must be an integer array, got dtype {arr.dtype}"
            )
        arr = arr.astype(np.int64)
        if arr.shape != (reps, 20, 2):
            raise RecordSchemaError(
                f"{path}counts",
                f"must have shape [repetitions={reps}][20][2], got {list(arr.shape)}",
            )
        bad = np.argwhere((arr[..., 0] < 0) | (arr[..., 0] > arr[..., 1]))
        if bad.size:
            r, c = bad[0]
            raise RecordSchemaError(
                f"{path}counts[{r}][{c}]",
                f"needs 0 <= ones <= shots, got {arr[r, c].tolist()}",
            )
        jobs.append(JobRecord(job_id, shots, reps, arr))
    return ExperimentRecord(config_id, device, tuple(jobs), timestamp)


def save_record(record: ExperimentRecord, path: str | Path) -> None:
    Path(path).write_text(json.dumps(record_to_dict(record)) + "\n")


def load_record(path: str | Path) -> ExperimentRecord:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise RecordSchemaError("$", f"not valid JSON: {exc}") from None
    return record_from_dict(data)
