"""Phase 1: greedy selection of frequent key values per dimension.

For each of the four dimensions, values are ranked by document frequency
over the seed directory (ties broken by value, ascending) and selected
in that order until the configured share of directory records is covered.
A record counts as covered once it is associated with at least
``min_assoc`` selected values: one for references, authors, and cells,
two for title words. Dimensions that cannot reach the threshold keep all
their values and are flagged exhausted instead of failing, so a sparse
dimension never blocks the pipeline.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Mapping

from .corpus import Corpus, Dimension, DIMENSIONS, PublicationRecord
from .errors import ConfigError, EmptyDirectoryError
from .seed import SeedDirectory

DEFAULT_COVERAGE_THRESHOLD = 0.80
DEFAULT_MIN_WORD_LEN = 5
DEFAULT_AUTHOR_MAX_DF_SHARE = 0.005


def _default_min_assoc(dimension: Dimension) -> int:
    return 2 if dimension is Dimension.TITLE_WORDS else 1


@dataclass(frozen=True)
class DimensionConfig:
    """Selection parameters for one dimension."""

    dimension: Dimension
    coverage_threshold: float = DEFAULT_COVERAGE_THRESHOLD
    min_assoc: int | None = None
    min_word_len: int = DEFAULT_MIN_WORD_LEN
    excluded_values: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        if self.min_assoc is None:
            object.__setattr__(self, "min_assoc", _default_min_assoc(self.dimension))
        if not 0.0 < self.coverage_threshold <= 1.0:
            raise ConfigError(
                f"{self.dimension.value}: coverage_threshold must be in (0, 1], "
                f"got {self.coverage_threshold}"
            )
        if self.min_assoc not in (1, 2):
            raise ConfigError(f"{self.dimension.value}: min_assoc must be 1 or 2")
        if self.min_word_len < 1:
            raise ConfigError(f"{self.dimension.value}: min_word_len must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension.value,
            "coverage_threshold": self.coverage_threshold,
            "min_assoc": self.min_assoc,
            "min_word_len": self.min_word_len,
            "excluded_values": sorted(self.excluded_values),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DimensionConfig":
        return cls(
            dimension=Dimension(data["dimension"]),
            coverage_threshold=data["coverage_threshold"],
            min_assoc=data["min_assoc"],
            min_word_len=data.get("min_word_len", DEFAULT_MIN_WORD_LEN),
            excluded_values=frozenset(data.get("excluded_values", ())),
        )


def default_configs(
    coverage_threshold: float = DEFAULT_COVERAGE_THRESHOLD,
    excluded_authors: Iterable[str] = (),
) -> dict[Dimension, DimensionConfig]:
    configs = {}
    for dimension in DIMENSIONS:
        excluded = frozenset(excluded_authors) if dimension is Dimension.AUTHORS else frozenset()
        configs[dimension] = DimensionConfig(
            dimension=dimension,
            coverage_threshold=coverage_threshold,
            excluded_values=excluded,
        )
    return configs


@dataclass(frozen=True)
class KeyValueSet:
    """Ordered key values selected for one dimension.

    ``selected`` pairs each value with its directory frequency, sorted by
    frequency descending then value ascending. ``exhausted`` marks a
    dimension whose values all together never reach the threshold.
    """

    dimension: Dimension
    selected: tuple[tuple[str, int], ...]
    achieved_coverage: float
    exhausted: bool

    def value_set(self) -> frozenset[str]:
        return frozenset(value for value, _ in self.selected)

    def to_dict(self) -> dict[str, Any]:
        return {
            "dimension": self.dimension.value,
            "selected": [[value, count] for value, count in self.selected],
            "achieved_coverage": self.achieved_coverage,
            "exhausted": self.exhausted,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "KeyValueSet":
        return cls(
            dimension=Dimension(data["dimension"]),
            selected=tuple((value, count) for value, count in data["selected"]),
            achieved_coverage=data["achieved_coverage"],
            exhausted=data["exhausted"],
        )


@dataclass(frozen=True)
class KeyProfile:
    """Phase-1 output: one key-value set per dimension plus its inputs."""

    key_values: dict[Dimension, KeyValueSet]
    configs: dict[Dimension, DimensionConfig]
    seed_ids: tuple[str, ...]
    expansion_ids: tuple[str, ...]
    corpus_digest: str

    def __post_init__(self) -> None:
        if set(self.key_values) != set(DIMENSIONS) or set(self.configs) != set(DIMENSIONS):
            raise ValueError("profile must cover exactly the four dimensions")

    @property
    def directory_digest(self) -> str:
        payload = json.dumps(
            {
                "corpus": self.corpus_digest,
                "seeds": sorted(self.seed_ids),
                "expansion": sorted(self.expansion_ids),
            },
            sort_keys=True,
            separators=(",", ":"),
        )
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def digest(self) -> str:
        payload = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()

    def to_dict(self) -> dict[str, Any]:
        return {
            "corpus_digest": self.corpus_digest,
            "directory_digest": self.directory_digest,
            "seed_ids": sorted(self.seed_ids),
            "expansion_ids": sorted(self.expansion_ids),
            "dimensions": {
                dimension.value: {
                    "config": self.configs[dimension].to_dict(),
                    **self.key_values[dimension].to_dict(),
                }
                for dimension in DIMENSIONS
            },
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "KeyProfile":
        key_values = {}
        configs = {}
        for dimension in DIMENSIONS:
            entry = data["dimensions"][dimension.value]
            key_values[dimension] = KeyValueSet.from_dict(entry)
            configs[dimension] = DimensionConfig.from_dict(entry["config"])
        return cls(
            key_values=key_values,
            configs=configs,
            seed_ids=tuple(data["seed_ids"]),
            expansion_ids=tuple(data["expansion_ids"]),
            corpus_digest=data["corpus_digest"],
        )


def write_profile(profile: KeyProfile, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(profile.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def load_profile(path: str | Path) -> KeyProfile:
    return KeyProfile.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def _config_values(record: PublicationRecord, dimension: Dimension, config: DimensionConfig) -> frozenset[str]:
    values = record.values(dimension)
    if dimension is Dimension.TITLE_WORDS and config.min_word_len > 1:
        values = frozenset(v for v in values if len(v) >= config.min_word_len)
    if config.excluded_values:
        values = values - config.excluded_values
    return values


def _directory_postings(
    directory: SeedDirectory,
    corpus: Corpus,
    dimension: Dimension,
    config: DimensionConfig,
) -> dict[str, list[str]]:
    postings: dict[str, list[str]] = {}
    for record_id in sorted(directory.directory_ids):
        record = corpus.records[record_id]
        for value in _config_values(record, dimension, config):
            postings.setdefault(value, []).append(record_id)
    return postings


def value_frequencies(
    directory: SeedDirectory,
    corpus: Corpus,
    dimension: Dimension,
    config: DimensionConfig,
) -> dict[str, int]:
    """Document frequency of each value over the directory records.

    Values are deduplicated within a record, so a record citing the same
    DOI twice still contributes one.
    """
    postings = _directory_postings(directory, corpus, dimension, config)
    return {value: len(ids) for value, ids in postings.items()}


def is_covered(
    record: PublicationRecord,
    dimension: Dimension,
    key_values: frozenset[str],
    min_assoc: int,
) -> bool:
    """True iff the record is associated with >= min_assoc of the key values."""
    values = record.values(dimension)
    if not values:
        return False
    if min_assoc == 1:
        return not values.isdisjoint(key_values)
    return len(values & key_values) >= min_assoc


def canonical_value_order(frequencies: Mapping[str, int]) -> list[tuple[str, int]]:
    """Frequency descending, ties broken by value ascending."""
    return sorted(frequencies.items(), key=lambda item: (-item[1], item[0]))


def select_key_values(
    directory: SeedDirectory,
    corpus: Corpus,
    config: DimensionConfig,
) -> KeyValueSet:
    """Select the shortest canonical-order prefix reaching the threshold.

    Coverage is recomputed after each addition; selection stops at the
    first prefix whose coverage meets the threshold. When even the full
    value list falls short, everything is selected and the set is flagged
    exhausted.
    """
    ids = directory.directory_ids
    if not ids:
        raise EmptyDirectoryError("seed directory has no records")
    n = len(ids)

    postings = _directory_postings(directory, corpus, dimension=config.dimension, config=config)
    order = canonical_value_order({value: len(ids_) for value, ids_ in postings.items()})

    matched: dict[str, int] = {}
    covered = 0
    selected: list[tuple[str, int]] = []
    for value, frequency in order:
        selected.append((value, frequency))
        for record_id in postings[value]:
            hits = matched.get(record_id, 0) + 1
            matched[record_id] = hits
            if hits == config.min_assoc:
                covered += 1
        coverage = covered / n
        if coverage >= config.coverage_threshold:
            return KeyValueSet(
                dimension=config.dimension,
                selected=tuple(selected),
                achieved_coverage=coverage,
                exhausted=False,
            )
    return KeyValueSet(
        dimension=config.dimension,
        selected=tuple(selected),
        achieved_coverage=covered / n,
        exhausted=True,
    )


def select_all_dimensions(
    directory: SeedDirectory,
    corpus: Corpus,
    configs: Mapping[Dimension, DimensionConfig] | None = None,
    threads: int = 1,
) -> KeyProfile:
    """Run Phase 1 for all four dimensions independently."""
    if configs is None:
        configs = default_configs()
    if directory.directory_ids and any(
        rid not in corpus.records for rid in directory.directory_ids
    ):
        raise ValueError("directory references records outside the corpus")

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=min(threads, len(DIMENSIONS))) as pool:
            futures = {
                dimension: pool.submit(select_key_values, directory, corpus, configs[dimension])
                for dimension in DIMENSIONS
            }
            key_values = {dimension: future.result() for dimension, future in futures.items()}
    else:
        key_values = {
            dimension: select_key_values(directory, corpus, configs[dimension])
            for dimension in DIMENSIONS
        }

    return KeyProfile(
        key_values=key_values,
        configs=dict(configs),
        seed_ids=tuple(sorted(directory.seed_ids)),
        expansion_ids=tuple(sorted(directory.expansion_ids)),
        corpus_digest=corpus.provenance,
    )


def frequent_author_keys(corpus: Corpus, max_share: float = DEFAULT_AUTHOR_MAX_DF_SHARE) -> frozenset[str]:
    """Author keys whose corpus-wide document frequency exceeds ``max_share``.

    Feeds the authors stoplist: ubiquitous surname+initial keys would match
    records far outside any specialty.
    """
    if not corpus.records:
        return frozenset()
    counts: dict[str, int] = {}
    for record in corpus.records.values():
        for key in record.reprint_author_keys:
            counts[key] = counts.get(key, 0) + 1
    cutoff = max_share * len(corpus.records)
    return frozenset(key for key, count in counts.items() if count > cutoff)
