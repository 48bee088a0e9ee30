"""Normalized publication records, corpus ingest, and inverted indices.

A corpus is an immutable id->record store with a DOI->id lookup. Records
carry the four match dimensions (cited DOIs, reprint-author keys, title
word keys, source cell) plus the co-author and citation quantities used
by the analytics layer. Ingest is tolerant: defective rows are reported
and skipped, records missing a dimension are retained.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Iterator, Mapping

from .errors import ConfigError, DuplicateIdError
from .normalize import normalize_author, normalize_doi, normalize_title


class Dimension(Enum):
    REFERENCES = "references"
    AUTHORS = "authors"
    TITLE_WORDS = "title_words"
    CELLS = "cells"


DIMENSIONS: tuple[Dimension, ...] = tuple(Dimension)

DEFAULT_MIN_WORD_LEN = 5

# Canonical JSONL field names; raw title/authors, normalization happens here.
CANONICAL_FIELDS = (
    "id",
    "doi",
    "title",
    "reprint_authors",
    "coauthor_count",
    "source",
    "cell",
    "references",
    "citation_count",
    "year",
)


@dataclass(frozen=True)
class PublicationRecord:
    """One normalized bibliographic record."""

    id: str
    doi: str | None
    title_keys: frozenset[str]
    reprint_author_keys: frozenset[str]
    coauthor_count: int
    source_id: str
    cell_id: str
    reference_dois: frozenset[str]
    citation_count: int = 0
    year: int | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("record id must be nonempty")
        if self.coauthor_count < 0 or self.citation_count < 0:
            raise ValueError(f"{self.id}: counts must be nonnegative")
        if 0 < self.coauthor_count < len(self.reprint_author_keys):
            raise ValueError(f"{self.id}: coauthor_count below reprint author count")
        if self.doi is not None and self.doi in self.reference_dois:
            raise ValueError(f"{self.id}: record cites its own DOI")

    def values(self, dimension: Dimension) -> frozenset[str]:
        """Match values of this record in one dimension (empty when missing)."""
        if dimension is Dimension.REFERENCES:
            return self.reference_dois
        if dimension is Dimension.AUTHORS:
            return self.reprint_author_keys
        if dimension is Dimension.TITLE_WORDS:
            return self.title_keys
        return frozenset((self.cell_id,)) if self.cell_id else frozenset()


@dataclass
class IngestDiagnostics:
    """Counts of repaired or dropped input while parsing a record file."""

    rows_total: int = 0
    records_ingested: int = 0
    malformed_rows: list[tuple[int, str]] = field(default_factory=list)
    empty_title_rows: int = 0
    authors_unparsed: int = 0
    references_dropped: int = 0
    self_references_dropped: int = 0
    invalid_dois: int = 0
    duplicate_dois: int = 0
    coauthor_count_raised: int = 0

    def note_malformed(self, line_no: int, reason: str) -> None:
        self.malformed_rows.append((line_no, reason))

    def to_dict(self) -> dict[str, Any]:
        return {
            "rows_total": self.rows_total,
            "records_ingested": self.records_ingested,
            "malformed_row_count": len(self.malformed_rows),
            "malformed_rows": [
                {"line": line, "reason": reason} for line, reason in self.malformed_rows[:100]
            ],
            "empty_title_rows": self.empty_title_rows,
            "authors_unparsed": self.authors_unparsed,
            "references_dropped": self.references_dropped,
            "self_references_dropped": self.self_references_dropped,
            "invalid_dois": self.invalid_dois,
            "duplicate_dois": self.duplicate_dois,
            "coauthor_count_raised": self.coauthor_count_raised,
        }


@dataclass(frozen=True)
class Corpus:
    """Immutable record store; provenance is excluded from equality."""

    records: dict[str, PublicationRecord]
    doi_index: dict[str, str]
    provenance: str = field(default="", compare=False)

    @classmethod
    def build(cls, records: Iterable[PublicationRecord], provenance: str | None = None) -> "Corpus":
        by_id: dict[str, PublicationRecord] = {}
        doi_index: dict[str, str] = {}
        for record in records:
            if record.id in by_id:
                raise DuplicateIdError(f"duplicate record id {record.id!r}")
            by_id[record.id] = record
        for record_id in sorted(by_id):
            doi = by_id[record_id].doi
            if doi is None:
                continue
            if doi in doi_index:
                raise ValueError(f"records {doi_index[doi]!r} and {record_id!r} share DOI {doi!r}")
            doi_index[doi] = record_id
        corpus = cls(records=by_id, doi_index=doi_index, provenance=provenance or "")
        if not provenance:
            object.__setattr__(corpus, "provenance", content_digest(corpus))
        return corpus

    def __len__(self) -> int:
        return len(self.records)


@dataclass(frozen=True)
class InvertedIndices:
    """Per-dimension value -> sorted, duplicate-free id postings."""

    postings: dict[Dimension, dict[str, tuple[str, ...]]]

    def postings_for(self, dimension: Dimension, value: str) -> tuple[str, ...]:
        return self.postings[dimension].get(value, ())


def build_indices(corpus: Corpus) -> InvertedIndices:
    accum: dict[Dimension, dict[str, list[str]]] = {d: {} for d in DIMENSIONS}
    for record_id in sorted(corpus.records):
        record = corpus.records[record_id]
        for dimension in DIMENSIONS:
            table = accum[dimension]
            for value in record.values(dimension):
                table.setdefault(value, []).append(record_id)
    return InvertedIndices(
        postings={
            dimension: {value: tuple(ids) for value, ids in table.items()}
            for dimension, table in accum.items()
        }
    )


@dataclass(frozen=True)
class TabularSchema:
    """Column mapping for the tab-delimited adapter.

    ``columns`` maps canonical field names to column headers in the input
    file; multi-valued cells (reprint_authors, references) are split on
    ``value_separator``.
    """

    columns: Mapping[str, str]
    value_separator: str = ";"

    def __post_init__(self) -> None:
        unknown = set(self.columns) - set(CANONICAL_FIELDS)
        if unknown:
            raise ConfigError(f"unknown fields in column mapping: {sorted(unknown)}")
        if "id" not in self.columns:
            raise ConfigError("column mapping must map the 'id' field")


def _require_int(value: Any, name: str) -> int:
    if type(value) is not int:
        raise ValueError(f"{name} must be an integer")
    if value < 0:
        raise ValueError(f"{name} must be nonnegative")
    return value


def _string_list(value: Any, name: str) -> list[str]:
    if value is None:
        return []
    if not isinstance(value, list) or any(not isinstance(item, str) for item in value):
        raise ValueError(f"{name} must be a list of strings")
    return value


def _record_from_raw(
    raw: Mapping[str, Any],
    mapping: Mapping[str, str] | None,
    min_word_len: int,
    diagnostics: IngestDiagnostics,
) -> PublicationRecord:
    record_id = raw.get("id")
    if not isinstance(record_id, str) or not record_id:
        raise ValueError("missing or empty id")

    raw_doi = raw.get("doi")
    doi = None
    if raw_doi not in (None, ""):
        if not isinstance(raw_doi, str):
            raise ValueError("doi must be a string")
        doi = normalize_doi(raw_doi)
        if doi is None:
            diagnostics.invalid_dois += 1

    raw_title = raw.get("title") or ""
    if not isinstance(raw_title, str):
        raise ValueError("title must be a string")
    title_keys = normalize_title(raw_title, min_word_len)
    if not title_keys:
        diagnostics.empty_title_rows += 1

    author_keys: set[str] = set()
    for raw_author in _string_list(raw.get("reprint_authors"), "reprint_authors"):
        key = normalize_author(raw_author)
        if key is None:
            diagnostics.authors_unparsed += 1
        else:
            author_keys.add(key)

    coauthor_count = _require_int(raw.get("coauthor_count") or 0, "coauthor_count")
    if 0 < coauthor_count < len(author_keys):
        coauthor_count = len(author_keys)
        diagnostics.coauthor_count_raised += 1

    source_id = raw.get("source") or ""
    if not isinstance(source_id, str):
        raise ValueError("source must be a string")
    explicit_cell = raw.get("cell")
    if explicit_cell is not None and not isinstance(explicit_cell, str):
        raise ValueError("cell must be a string")
    if explicit_cell:
        cell_id = explicit_cell
    elif mapping is not None and source_id in mapping:
        cell_id = mapping[source_id]
    else:
        cell_id = source_id

    reference_dois: set[str] = set()
    for raw_ref in _string_list(raw.get("references"), "references"):
        ref = normalize_doi(raw_ref)
        if ref is None:
            diagnostics.references_dropped += 1
        elif ref == doi:
            diagnostics.self_references_dropped += 1
        else:
            reference_dois.add(ref)

    citation_count = _require_int(raw.get("citation_count") or 0, "citation_count")
    year = raw.get("year")
    if year is not None and type(year) is not int:
        raise ValueError("year must be an integer")

    return PublicationRecord(
        id=record_id,
        doi=doi,
        title_keys=title_keys,
        reprint_author_keys=frozenset(author_keys),
        coauthor_count=coauthor_count,
        source_id=source_id,
        cell_id=cell_id,
        reference_dois=frozenset(reference_dois),
        citation_count=citation_count,
        year=year,
    )


def _iter_jsonl_rows(text: str) -> Iterator[tuple[int, Any]]:
    for line_no, line in enumerate(text.splitlines(), start=1):
        if line.strip():
            yield line_no, line


def _iter_tabular_rows(text: str, schema: TabularSchema) -> Iterator[tuple[int, dict[str, Any]]]:
    reader = csv.reader(text.splitlines(), delimiter="\t")
    try:
        header = next(reader)
    except StopIteration:
        return
    positions: dict[str, int] = {}
    for fname, column in schema.columns.items():
        if column not in header:
            raise ConfigError(f"column {column!r} (field {fname!r}) not in header")
        positions[fname] = header.index(column)

    multi = {"reprint_authors", "references"}
    numeric = {"coauthor_count", "citation_count", "year"}
    for line_no, row in enumerate(reader, start=2):
        raw: dict[str, Any] = {}
        for fname, pos in positions.items():
            cell = row[pos].strip() if pos < len(row) else ""
            if not cell:
                continue
            if fname in multi:
                raw[fname] = [part.strip() for part in cell.split(schema.value_separator) if part.strip()]
            elif fname in numeric:
                try:
                    raw[fname] = int(cell)
                except ValueError:
                    raw[fname] = cell  # surfaces as a malformed row downstream
            else:
                raw[fname] = cell
        yield line_no, raw


def parse_records(
    path: str | Path,
    format: str = "jsonl",
    mapping: Mapping[str, str] | None = None,
    min_word_len: int = DEFAULT_MIN_WORD_LEN,
    tabular: TabularSchema | None = None,
) -> tuple[Corpus, IngestDiagnostics]:
    """Parse a record file into a corpus plus ingest diagnostics.

    Defective rows are skipped and reported; duplicate record ids abort
    the ingest. When two records share a DOI the later one keeps the
    record but loses the DOI.
    """
    data = Path(path).read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    text = data.decode("utf-8")

    diagnostics = IngestDiagnostics()
    if format == "jsonl":
        rows: Iterable[tuple[int, Any]] = _iter_jsonl_rows(text)
    elif format in ("tsv", "tab"):
        rows = _iter_tabular_rows(text, tabular or TabularSchema(columns={f: f for f in CANONICAL_FIELDS}))
    else:
        raise ConfigError(f"unknown corpus format {format!r}")

    by_id: dict[str, PublicationRecord] = {}
    seen_dois: dict[str, str] = {}
    for line_no, raw in rows:
        diagnostics.rows_total += 1
        try:
            if isinstance(raw, str):
                parsed = json.loads(raw)
                if not isinstance(parsed, dict):
                    raise ValueError("row is not a JSON object")
                raw = parsed
            record = _record_from_raw(raw, mapping, min_word_len, diagnostics)
        except (ValueError, json.JSONDecodeError) as exc:
            diagnostics.note_malformed(line_no, str(exc))
            continue
        if record.id in by_id:
            raise DuplicateIdError(f"duplicate record id {record.id!r} at line {line_no}")
        if record.doi is not None:
            if record.doi in seen_dois:
                diagnostics.duplicate_dois += 1
                record = replace(record, doi=None)
            else:
                seen_dois[record.doi] = record.id
        by_id[record.id] = record
        diagnostics.records_ingested += 1

    return Corpus.build(by_id.values(), provenance=digest), diagnostics


def record_to_raw(record: PublicationRecord) -> dict[str, Any]:
    """Canonical JSONL representation; re-parsing reproduces the record."""
    raw: dict[str, Any] = {"id": record.id}
    if record.doi is not None:
        raw["doi"] = record.doi
    raw["title"] = " ".join(sorted(record.title_keys))
    raw["reprint_authors"] = [
        "{}, {}".format(*key.rsplit("_", 1)) for key in sorted(record.reprint_author_keys)
    ]
    raw["coauthor_count"] = record.coauthor_count
    raw["source"] = record.source_id
    raw["cell"] = record.cell_id
    raw["references"] = sorted(record.reference_dois)
    raw["citation_count"] = record.citation_count
    if record.year is not None:
        raw["year"] = record.year
    return raw


def corpus_to_jsonl(corpus: Corpus) -> str:
    lines = [
        json.dumps(record_to_raw(corpus.records[record_id]), sort_keys=True)
        for record_id in sorted(corpus.records)
    ]
    return "".join(line + "\n" for line in lines)


def write_corpus(corpus: Corpus, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(corpus_to_jsonl(corpus), encoding="utf-8")
    return path


def content_digest(corpus: Corpus) -> str:
    """Digest of the canonical serialization; stable across record order."""
    return hashlib.sha256(corpus_to_jsonl(corpus).encode("utf-8")).hexdigest()


def load_cell_mapping(path: str | Path) -> dict[str, str]:
    """Two-column ``source_id<TAB>cell_id`` file into a mapping."""
    mapping: dict[str, str] = {}
    for line_no, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
            raise ConfigError(f"{path}: line {line_no} is not 'source<TAB>cell'")
        mapping[parts[0].strip()] = parts[1].strip()
    return mapping
