"""Scoring pipelines against corpora with known wire positions.

A detection counts as a hit when the truth says a wire is present and
the averaged x lands within the tolerance; no detection is a miss. The
CSV report is sorted and formatted deterministically so identical runs
produce identical bytes.
"""

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .pipeline import PipelineConfig, run_pipeline

CSV_COLUMNS = ("config", "corpus", "n", "hits", "rate_pct",
               "mean_abs_err_px", "mean_time_s")


@dataclass
class EvalRow:
    """Aggregate result of one config over one corpus."""

    config: str
    corpus: str
    n: int
    hits: int
    mean_abs_err_px: float | None
    mean_time_s: float | None

    @property
    def rate_pct(self) -> float:
        return 100.0 * self.hits / self.n


@dataclass
class EvalReport:
    """A pile of EvalRows, written out as CSV."""

    rows: list = field(default_factory=list)

    def extend(self, other: "EvalReport") -> None:
        self.rows.extend(other.rows)


def evaluate(configs, corpus, tol: float = 5.0, corpus_name: str = "corpus",
             jobs: int = 1) -> EvalReport:
    """Run each config over the corpus and aggregate hits.

    Args:
        configs: iterable of PipelineConfig.
        corpus: list of (image, GroundTruth) pairs.
        tol: hit tolerance in pixels (> 0).
        corpus_name: label for the report's corpus column.
        jobs: worker processes; 1 runs inline. Results are identical
            either way, because per-image outcomes are aggregated in
            corpus order.

    Returns:
        EvalReport with one row per config.
    """
    configs = list(configs)
    corpus = list(corpus)
    if not corpus:
        raise ValueError("corpus is empty")
    if tol <= 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    if jobs < 1:
        raise ValueError(f"jobs must be >= 1, got {jobs}")
    for cfg in configs:
        if not isinstance(cfg, PipelineConfig):
            raise ValueError(f"not a PipelineConfig: {cfg!r}")

    report = EvalReport()
    for cfg in configs:
        tasks = [(cfg, img, truth, tol) for img, truth in corpus]
        if jobs == 1:
            outcomes = [_score_one(t) for t in tasks]
        else:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(_score_one, tasks, chunksize=4))
        hits = sum(1 for hit, _, _ in outcomes if hit)
        errs = [err for hit, err, _ in outcomes if hit]
        times = [secs for _, _, secs in outcomes]
        report.rows.append(EvalRow(
            config=cfg.name,
            corpus=corpus_name,
            n=len(corpus),
            hits=hits,
            mean_abs_err_px=float(np.mean(errs)) if errs else None,
            mean_time_s=float(np.mean(times)),
        ))
    return report


def _score_one(task):
    cfg, img, truth, tol = task
    result = run_pipeline(cfg, img)
    secs = result.total_seconds
    if result.reference is None or not truth.present:
        return False, None, secs
    err = abs(result.reference.x_bar - truth.wire_x)
    return err <= tol, err, secs


def write_report(report: EvalReport, path) -> None:
    """Write the report as CSV, rows sorted by (config, corpus).

    Rates print with two decimals; a None mean (no hits, or timing
    stripped) prints as an empty cell.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in sorted(report.rows, key=lambda r: (r.config, r.corpus)):
            writer.writerow([
                row.config,
                row.corpus,
                row.n,
                row.hits,
                format_rate(row.rate_pct),
                "" if row.mean_abs_err_px is None
                else f"{row.mean_abs_err_px:.4f}",
                "" if row.mean_time_s is None else f"{row.mean_time_s:.6f}",
            ])


def read_report(path) -> EvalReport:
    """Parse a CSV written by write_report back into an EvalReport."""
    report = EvalReport()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != list(CSV_COLUMNS):
            raise ValueError(f"{path}: not a report file (header {header})")
        for rec in reader:
            if len(rec) != len(CSV_COLUMNS):
                raise ValueError(f"{path}: malformed row {rec}")
            report.rows.append(EvalRow(
                config=rec[0],
                corpus=rec[1],
                n=int(rec[2]),
                hits=int(rec[3]),
                mean_abs_err_px=float(rec[5]) if rec[5] else None,
                mean_time_s=float(rec[6]) if rec[6] else None,
            ))
    return report


def format_rate(rate: float) -> str:
    """Render a percentage with exactly two decimals."""
    return f"{rate:.2f}"


def strip_times(report: EvalReport) -> EvalReport:
    """Copy of the report with mean_time_s cleared on every row.

    Wall-clock means change run to run; dropping them keeps rerun CSVs
    byte-identical.
    """
    out = EvalReport()
    for r in report.rows:
        out.rows.append(EvalRow(r.config, r.corpus, r.n, r.hits,
                                r.mean_abs_err_px, None))
    return out
