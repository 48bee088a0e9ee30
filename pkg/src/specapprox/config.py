"""Declarative pipeline configuration with materialized defaults."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Mapping

from .corpus import CANONICAL_FIELDS, Dimension, DIMENSIONS, TabularSchema
from .errors import ConfigError
from .keyselect import (
    DEFAULT_AUTHOR_MAX_DF_SHARE,
    DEFAULT_COVERAGE_THRESHOLD,
    DEFAULT_MIN_WORD_LEN,
    DimensionConfig,
)

_DIMENSION_KEYS = {"coverage_threshold", "min_assoc", "min_word_len"}


@dataclass
class AuthorExclusion:
    stoplist_path: str | None = None
    max_df_share: float = DEFAULT_AUTHOR_MAX_DF_SHARE
    auto: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "stoplist_path": self.stoplist_path,
            "max_df_share": self.max_df_share,
            "auto": self.auto,
        }


@dataclass
class PipelineConfig:
    """All pipeline knobs; defaults are echoed into every run manifest."""

    corpus_path: str | None = None
    corpus_format: str = "jsonl"
    tabular_columns: dict[str, str] | None = None
    tabular_value_separator: str = ";"
    cell_mapping_path: str | None = None
    seed_path: str | None = None
    min_word_len: int = DEFAULT_MIN_WORD_LEN
    dimension_overrides: dict[str, dict[str, Any]] = field(default_factory=dict)
    author_exclusion: AuthorExclusion = field(default_factory=AuthorExclusion)
    m_required: int = 3
    year_range: tuple[int | None, int | None] | None = None
    output_dir: str = "out"
    synth: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.corpus_format not in ("jsonl", "tsv", "tab"):
            raise ConfigError(f"unknown corpus format {self.corpus_format!r}")
        if self.min_word_len < 1:
            raise ConfigError("min_word_len must be >= 1")
        if not 1 <= self.m_required <= 4:
            raise ConfigError("m_required must be between 1 and 4")
        if not 0.0 <= self.author_exclusion.max_df_share <= 1.0:
            raise ConfigError("author max_df_share must be in [0, 1]")
        names = {d.value for d in DIMENSIONS}
        for name, overrides in self.dimension_overrides.items():
            if name not in names:
                raise ConfigError(f"unknown dimension {name!r} in config")
            unknown = set(overrides) - _DIMENSION_KEYS
            if unknown:
                raise ConfigError(f"unknown keys for dimension {name!r}: {sorted(unknown)}")
        if self.year_range is not None:
            lo, hi = self.year_range
            if lo is not None and hi is not None and lo > hi:
                raise ConfigError("year_range must be (low, high)")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PipelineConfig":
        known = {
            "corpus",
            "cell_mapping_path",
            "seed_path",
            "min_word_len",
            "dimensions",
            "author_exclusion",
            "m_required",
            "year_range",
            "output_dir",
            "synth",
        }
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")

        corpus = data.get("corpus", {}) or {}
        if not isinstance(corpus, Mapping):
            raise ConfigError("'corpus' must be an object")
        exclusion_data = data.get("author_exclusion", {}) or {}
        unknown = set(exclusion_data) - {"stoplist_path", "max_df_share", "auto"}
        if unknown:
            raise ConfigError(f"unknown author_exclusion keys: {sorted(unknown)}")
        exclusion = AuthorExclusion(
            stoplist_path=exclusion_data.get("stoplist_path"),
            max_df_share=exclusion_data.get("max_df_share", DEFAULT_AUTHOR_MAX_DF_SHARE),
            auto=exclusion_data.get("auto", True),
        )
        year_range = data.get("year_range")
        try:
            return cls(
                corpus_path=corpus.get("path"),
                corpus_format=corpus.get("format", "jsonl"),
                tabular_columns=corpus.get("columns"),
                tabular_value_separator=corpus.get("value_separator", ";"),
                cell_mapping_path=data.get("cell_mapping_path"),
                seed_path=data.get("seed_path"),
                min_word_len=data.get("min_word_len", DEFAULT_MIN_WORD_LEN),
                dimension_overrides=dict(data.get("dimensions", {}) or {}),
                author_exclusion=exclusion,
                m_required=data.get("m_required", 3),
                year_range=tuple(year_range) if year_range else None,
                output_dir=data.get("output_dir", "out"),
                synth=dict(data.get("synth", {}) or {}),
            )
        except TypeError as exc:
            raise ConfigError(f"malformed config: {exc}") from None

    @classmethod
    def from_file(cls, path: str | Path) -> "PipelineConfig":
        try:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        return cls.from_dict(data)

    def tabular_schema(self) -> TabularSchema | None:
        if self.corpus_format == "jsonl":
            return None
        columns = self.tabular_columns or {f: f for f in CANONICAL_FIELDS}
        return TabularSchema(columns=columns, value_separator=self.tabular_value_separator)

    def dimension_configs(self, excluded_authors: frozenset[str] = frozenset()) -> dict[Dimension, DimensionConfig]:
        """Materialize the four dimension configs, applying any overrides."""
        configs: dict[Dimension, DimensionConfig] = {}
        for dimension in DIMENSIONS:
            overrides = self.dimension_overrides.get(dimension.value, {})
            excluded = excluded_authors if dimension is Dimension.AUTHORS else frozenset()
            configs[dimension] = DimensionConfig(
                dimension=dimension,
                coverage_threshold=overrides.get("coverage_threshold", DEFAULT_COVERAGE_THRESHOLD),
                min_assoc=overrides.get("min_assoc"),
                min_word_len=overrides.get("min_word_len", self.min_word_len),
                excluded_values=excluded,
            )
        return configs

    def to_dict(self) -> dict[str, Any]:
        """Fully materialized echo, including every default."""
        corpus: dict[str, Any] = {"path": self.corpus_path, "format": self.corpus_format}
        if self.corpus_format != "jsonl":
            corpus["columns"] = self.tabular_columns
            corpus["value_separator"] = self.tabular_value_separator
        dimensions = {}
        for dimension, config in self.dimension_configs().items():
            entry = config.to_dict()
            entry.pop("excluded_values")  # materialized at run time, logged separately
            dimensions[dimension.value] = entry
        return {
            "corpus": corpus,
            "cell_mapping_path": self.cell_mapping_path,
            "seed_path": self.seed_path,
            "min_word_len": self.min_word_len,
            "dimensions": dimensions,
            "author_exclusion": self.author_exclusion.to_dict(),
            "m_required": self.m_required,
            "year_range": list(self.year_range) if self.year_range else None,
            "output_dir": self.output_dir,
            "synth": self.synth,
        }
