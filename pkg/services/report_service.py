import io
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from errors import UnsupportedFormatError

logger = logging.getLogger(__name__)

ARTIFACT_VERSION = "0.1.0"
REPORT_FORMATS = ("json", "csv")

CSV_COLUMNS = [
    "row_type", "algorithm", "seed", "best_fitness", "best_permutation", "evaluations",
    "wall_time_s", "success", "runs", "mean", "std", "min", "max", "success_rate",
]


@dataclass
class RunRecord:
    algorithm: str
    seed: int
    best_fitness: float
    best_permutation: Tuple[int, ...]
    evaluations: int
    wall_time_s: float
    trace: List[Tuple[int, float]] = field(default_factory=list)
    success: Optional[bool] = None
    extra: Dict[str, Any] = field(default_factory=dict)


@dataclass
class AlgorithmSummary:
    algorithm: str
    runs: int
    mean: float
    std: float
    min: float
    max: float
    success_rate: Optional[float] = None


@dataclass
class RunReport:
    version: str
    config: Dict[str, Any]
    optimum: Optional[float]
    optimum_permutation: Optional[Tuple[int, ...]]
    records: List[RunRecord] = field(default_factory=list)
    summaries: List[AlgorithmSummary] = field(default_factory=list)


def records_frame(records: Sequence[RunRecord]) -> pd.DataFrame:
    return pd.DataFrame(
        [{"algorithm": r.algorithm, "seed": r.seed, "best_fitness": r.best_fitness, "success": r.success}
         for r in records],
        columns=["algorithm", "seed", "best_fitness", "success"],
    )


def summarize(records: Sequence[RunRecord], algorithms: Sequence[str]) -> List[AlgorithmSummary]:
    """
    Per-algorithm mean, population std (ddof=0), min and max of the best
    fitness; success rate only when every record carries a success flag.
    """
    frame = records_frame(records)
    summaries = []
    for algorithm in algorithms:
        rows = frame[frame["algorithm"] == algorithm]
        if rows.empty:
            continue
        fitness = rows["best_fitness"].astype(float)
        success_rate = None
        if rows["success"].notna().all():
            success_rate = float(rows["success"].astype(bool).mean())
        summaries.append(AlgorithmSummary(
            algorithm=algorithm,
            runs=int(len(rows)),
            mean=float(fitness.mean()),
            std=float(fitness.std(ddof=0)),
            min=float(fitness.min()),
            max=float(fitness.max()),
            success_rate=success_rate,
        ))
    return summaries


def _report_to_dict(report: RunReport) -> Dict[str, Any]:
    data = asdict(report)
    for record in data["records"]:
        record["best_permutation"] = list(record["best_permutation"])
        record["trace"] = [list(point) for point in record["trace"]]
    if data["optimum_permutation"] is not None:
        data["optimum_permutation"] = list(data["optimum_permutation"])
    return data


def report_from_json(text: str) -> RunReport:
    data = json.loads(text)
    records = [
        RunRecord(**{**r, "best_permutation": tuple(r["best_permutation"]),
                     "trace": [(int(e), float(f)) for e, f in r["trace"]]})
        for r in data["records"]
    ]
    summaries = [AlgorithmSummary(**s) for s in data["summaries"]]
    optimum_permutation = data.get("optimum_permutation")
    return RunReport(
        version=data["version"],
        config=data["config"],
        optimum=data.get("optimum"),
        optimum_permutation=tuple(optimum_permutation) if optimum_permutation is not None else None,
        records=records,
        summaries=summaries,
    )


def _csv_frame(report: RunReport) -> pd.DataFrame:
    rows = []
    for r in report.records:
        rows.append({
            "row_type": "record", "algorithm": r.algorithm, "seed": r.seed, "best_fitness": r.best_fitness,
            "best_permutation": " ".join(str(g) for g in r.best_permutation), "evaluations": r.evaluations,
            "wall_time_s": r.wall_time_s, "success": r.success,
        })
    for s in report.summaries:
        rows.append({
            "row_type": "summary", "algorithm": s.algorithm, "runs": s.runs, "mean": s.mean, "std": s.std,
            "min": s.min, "max": s.max, "success_rate": s.success_rate,
        })
    frame = pd.DataFrame(rows, columns=CSV_COLUMNS)
    # nullable ints keep seeds and counts free of a trailing ".0" on mixed rows
    for column in ("seed", "evaluations", "runs"):
        frame[column] = frame[column].astype("Int64")
    return frame


def emit_report(report: RunReport, fmt: str = "json") -> str:
    """JSON: the full nested report. CSV: one row per record plus one summary row per algorithm."""
    if fmt == "json":
        return json.dumps(_report_to_dict(report), indent=2) + "\n"
    if fmt == "csv":
        buffer = io.StringIO()
        _csv_frame(report).to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue()
    raise UnsupportedFormatError(f"Unsupported report format '{fmt}'. Expected one of {', '.join(REPORT_FORMATS)}")


def emit_trace_csv(report: RunReport) -> str:
    """Plot-ready best-so-far traces: algorithm, seed, evaluation, best_fitness."""
    rows = [
        {"algorithm": r.algorithm, "seed": r.seed, "evaluation": evaluation, "best_fitness": fitness}
        for r in report.records
        for evaluation, fitness in r.trace
    ]
    buffer = io.StringIO()
    pd.DataFrame(rows, columns=["algorithm", "seed", "evaluation", "best_fitness"]).to_csv(
        buffer, index=False, lineterminator="\n")
    return buffer.getvalue()


def write_report(report: RunReport, fmt: str, out_path: str) -> List[str]:
    """Writes the report; CSV output also writes `<stem>_trace.csv` next to it."""
    text = emit_report(report, fmt)
    with open(out_path, "w", encoding="utf-8") as handle:
        handle.write(text)
    written = [out_path]
    if fmt == "csv":
        stem, _ = os.path.splitext(out_path)
        trace_path = f"{stem}_trace.csv"
        with open(trace_path, "w", encoding="utf-8") as handle:
            handle.write(emit_trace_csv(report))
        written.append(trace_path)
    logger.info(f"Report written: {', '.join(written)}")
    return written
