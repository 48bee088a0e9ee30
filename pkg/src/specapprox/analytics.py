"""Comparison of two approximations and member-level distribution summaries.

Produces the venue-overlap and attained-level views as tables and plot
data: exact set arithmetic between member sets, shared publication
venues, and order statistics of co-author and citation counts per set.
Rendering is left to external tooling; the CSV files carry the data.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .approx import SpecialtyApproximation
from .corpus import Corpus
from .errors import ConfigError, CorpusMismatchError

VARIABLES = ("coauthor_count", "citation_count")


@dataclass(frozen=True)
class DistributionSummary:
    """Order statistics of one variable over a member set."""

    variable: str
    n: int
    minimum: int | None
    median: float | None
    mean: float | None
    maximum: int | None
    deciles: tuple[int, ...] | None

    def to_dict(self) -> dict[str, Any]:
        return {
            "variable": self.variable,
            "n": self.n,
            "min": self.minimum,
            "median": self.median,
            "mean": self.mean,
            "max": self.maximum,
            "deciles": list(self.deciles) if self.deciles is not None else None,
        }


@dataclass(frozen=True)
class ComparisonReport:
    size_a: int
    size_b: int
    intersection_size: int
    union_size: int
    jaccard: float
    shared_sources: tuple[str, ...]
    summaries_a: dict[str, DistributionSummary]
    summaries_b: dict[str, DistributionSummary]
    # (id, value) pairs per set and variable, sorted by id; plot data.
    distributions: dict[str, dict[str, tuple[tuple[str, int], ...]]]

    @property
    def shared_source_count(self) -> int:
        return len(self.shared_sources)

    def to_dict(self) -> dict[str, Any]:
        return {
            "size_a": self.size_a,
            "size_b": self.size_b,
            "intersection_size": self.intersection_size,
            "union_size": self.union_size,
            "jaccard": self.jaccard,
            "shared_source_count": self.shared_source_count,
            "shared_sources": list(self.shared_sources),
            "summaries_a": {v: s.to_dict() for v, s in sorted(self.summaries_a.items())},
            "summaries_b": {v: s.to_dict() for v, s in sorted(self.summaries_b.items())},
        }


def _decile(values: list[int], k: int) -> int:
    # Nearest-rank: smallest element with at least k*n/10 elements at or below it.
    n = len(values)
    rank = -(-k * n // 10)
    return values[rank - 1]


def summarize(approx: SpecialtyApproximation, corpus: Corpus, variable: str) -> DistributionSummary:
    """Exact order statistics of ``variable`` over the member records."""
    if variable not in VARIABLES:
        raise ConfigError(f"unknown variable {variable!r}; expected one of {VARIABLES}")
    values = sorted(getattr(corpus.records[rid], variable) for rid in approx.members)
    n = len(values)
    if n == 0:
        return DistributionSummary(variable, 0, None, None, None, None, None)
    if n % 2:
        median: float = float(values[n // 2])
    else:
        median = (values[n // 2 - 1] + values[n // 2]) / 2
    return DistributionSummary(
        variable=variable,
        n=n,
        minimum=values[0],
        median=median,
        mean=sum(values) / n,
        maximum=values[-1],
        deciles=tuple(_decile(values, k) for k in range(1, 10)),
    )


def compare(
    a: SpecialtyApproximation,
    b: SpecialtyApproximation,
    corpus: Corpus,
) -> ComparisonReport:
    """Exact set comparison of two approximations over one corpus."""
    for name, approx in (("A", a), ("B", b)):
        if approx.params.corpus_digest != corpus.provenance:
            raise CorpusMismatchError(f"approximation {name} was built over a different corpus")

    intersection = a.members & b.members
    union = a.members | b.members
    jaccard = len(intersection) / len(union) if union else 0.0

    sources_a = {corpus.records[rid].source_id for rid in a.members}
    sources_b = {corpus.records[rid].source_id for rid in b.members}
    shared = tuple(sorted(sources_a & sources_b))

    distributions: dict[str, dict[str, tuple[tuple[str, int], ...]]] = {}
    for set_name, approx in (("a", a), ("b", b)):
        distributions[set_name] = {
            variable: tuple(
                (rid, getattr(corpus.records[rid], variable)) for rid in sorted(approx.members)
            )
            for variable in VARIABLES
        }

    return ComparisonReport(
        size_a=len(a.members),
        size_b=len(b.members),
        intersection_size=len(intersection),
        union_size=len(union),
        jaccard=jaccard,
        shared_sources=shared,
        summaries_a={v: summarize(a, corpus, v) for v in VARIABLES},
        summaries_b={v: summarize(b, corpus, v) for v in VARIABLES},
        distributions=distributions,
    )


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def emit_report(
    report: ComparisonReport,
    out_dir: str | Path,
    formats: tuple[str, ...] = ("json", "csv"),
) -> list[Path]:
    """Write compare.json / compare.csv plus one plot-data CSV per set and variable."""
    unknown = set(formats) - {"json", "csv"}
    if unknown:
        raise ConfigError(f"unknown report formats: {sorted(unknown)}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    if "json" in formats:
        path = out_dir / "compare.json"
        path.write_text(json.dumps(report.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
        written.append(path)

    if "csv" in formats:
        path = out_dir / "compare.csv"
        columns = [
            ("size_a", report.size_a),
            ("size_b", report.size_b),
            ("intersection_size", report.intersection_size),
            ("union_size", report.union_size),
            ("jaccard", report.jaccard),
            ("shared_source_count", report.shared_source_count),
            ("median_coauthor_count_a", report.summaries_a["coauthor_count"].median),
            ("median_coauthor_count_b", report.summaries_b["coauthor_count"].median),
            ("median_citation_count_a", report.summaries_a["citation_count"].median),
            ("median_citation_count_b", report.summaries_b["citation_count"].median),
        ]
        lines = [
            ",".join(name for name, _ in columns),
            ",".join(_fmt(value) for _, value in columns),
        ]
        path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        written.append(path)

        for set_name in ("a", "b"):
            for variable in VARIABLES:
                path = out_dir / f"dist_{variable}_{set_name}.csv"
                lines = ["id,value"]
                lines.extend(f"{rid},{value}" for rid, value in report.distributions[set_name][variable])
                path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
                written.append(path)

    return written
