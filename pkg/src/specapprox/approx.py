"""Phase 2: the specialty approximation under the 3-of-4 rule.

Every corpus publication covered by key values in at least ``m_required``
of the four dimensions is a member. Tolerating one uncovered dimension
keeps records that merely lack a metadata field (false negatives);
requiring three keeps out records matching on one or two dimensions
only (false positives). Candidates come from the inverted indices - a
record matching no key value anywhere can never be a member - and the
result is identical to a full-corpus scan.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .corpus import Corpus, Dimension, DIMENSIONS, InvertedIndices, PublicationRecord
from .errors import ConfigError, ProfileCorpusMismatchError
from .keyselect import KeyProfile, is_covered

DIMENSION_BITS: dict[Dimension, int] = {
    Dimension.REFERENCES: 1,
    Dimension.AUTHORS: 2,
    Dimension.TITLE_WORDS: 4,
    Dimension.CELLS: 8,
}

DEFAULT_M_REQUIRED = 3


def mask_to_flags(mask: int) -> dict[str, bool]:
    return {d.value: bool(mask & DIMENSION_BITS[d]) for d in DIMENSIONS}


def flags_to_mask(flags: Mapping[str, bool]) -> int:
    mask = 0
    for dimension in DIMENSIONS:
        if flags.get(dimension.value, False):
            mask |= DIMENSION_BITS[dimension]
    return mask


@dataclass(frozen=True)
class ApproximationParams:
    profile_digest: str
    corpus_digest: str
    m_required: int = DEFAULT_M_REQUIRED
    year_range: tuple[int | None, int | None] | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "profile_digest": self.profile_digest,
            "corpus_digest": self.corpus_digest,
            "m_required": self.m_required,
            "year_range": list(self.year_range) if self.year_range else None,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ApproximationParams":
        year_range = data.get("year_range")
        return cls(
            profile_digest=data["profile_digest"],
            corpus_digest=data["corpus_digest"],
            m_required=data["m_required"],
            year_range=tuple(year_range) if year_range else None,
        )


@dataclass(frozen=True)
class SpecialtyApproximation:
    """Member ids plus per-record dimension-coverage masks.

    ``mask`` keeps the bitmask for every member and for near-misses
    covered in exactly two dimensions; ``seed_inclusion`` records which
    seed publications qualified under the same rule they induced.
    """

    members: frozenset[str]
    mask: dict[str, int]
    params: ApproximationParams
    seed_inclusion: dict[str, bool]

    def near_misses(self) -> frozenset[str]:
        return frozenset(rid for rid in self.mask if rid not in self.members)

    def member_count_by_dimension(self) -> dict[str, int]:
        counts = {d.value: 0 for d in DIMENSIONS}
        for rid in self.members:
            mask = self.mask[rid]
            for dimension in DIMENSIONS:
                if mask & DIMENSION_BITS[dimension]:
                    counts[dimension.value] += 1
        return counts


def dimension_mask(record: PublicationRecord, profile: KeyProfile) -> int:
    """4-bit mask: bit d set iff the record is covered in dimension d."""
    mask = 0
    for dimension in DIMENSIONS:
        key_values = profile.key_values[dimension].value_set()
        min_assoc = profile.configs[dimension].min_assoc
        if is_covered(record, dimension, key_values, min_assoc):
            mask |= DIMENSION_BITS[dimension]
    return mask


def _in_year_range(record: PublicationRecord, year_range: tuple[int | None, int | None]) -> bool:
    if record.year is None:
        return False
    lo, hi = year_range
    if lo is not None and record.year < lo:
        return False
    if hi is not None and record.year > hi:
        return False
    return True


def approximate_specialty(
    corpus: Corpus,
    indices: InvertedIndices,
    profile: KeyProfile,
    m_required: int = DEFAULT_M_REQUIRED,
    year_range: tuple[int | None, int | None] | None = None,
) -> SpecialtyApproximation:
    """Extract the approximation from the corpus via the inverted indices.

    Candidates are the union of postings of all selected key values; the
    optional ``year_range`` drops candidates published outside it (records
    without a year are dropped too when a range is set).
    """
    if not 1 <= m_required <= 4:
        raise ConfigError(f"m_required must be between 1 and 4, got {m_required}")
    if profile.corpus_digest != corpus.provenance:
        raise ProfileCorpusMismatchError(
            "key profile was built against a different corpus "
            f"({profile.corpus_digest[:12]}... vs {corpus.provenance[:12]}...)"
        )

    candidates: set[str] = set()
    for dimension in DIMENSIONS:
        for value, _ in profile.key_values[dimension].selected:
            candidates.update(indices.postings_for(dimension, value))

    members: set[str] = set()
    masks: dict[str, int] = {}
    for record_id in sorted(candidates):
        record = corpus.records[record_id]
        if year_range is not None and not _in_year_range(record, year_range):
            continue
        mask = dimension_mask(record, profile)
        popcount = bin(mask).count("1")
        if popcount >= m_required:
            members.add(record_id)
            masks[record_id] = mask
        elif popcount == 2:
            masks[record_id] = mask

    seed_inclusion = {sid: sid in members for sid in profile.seed_ids}
    return SpecialtyApproximation(
        members=frozenset(members),
        mask=masks,
        params=ApproximationParams(
            profile_digest=profile.digest(),
            corpus_digest=corpus.provenance,
            m_required=m_required,
            year_range=year_range,
        ),
        seed_inclusion=seed_inclusion,
    )


def approximation_rows(approx: SpecialtyApproximation) -> list[dict[str, Any]]:
    """JSONL rows (id, per-dimension bits, member flag), sorted by id."""
    return [
        {
            "id": record_id,
            "dimensions": mask_to_flags(approx.mask[record_id]),
            "member": record_id in approx.members,
        }
        for record_id in sorted(approx.mask)
    ]


def approximation_summary(approx: SpecialtyApproximation) -> dict[str, Any]:
    return {
        "member_count": len(approx.members),
        "near_miss_count": len(approx.near_misses()),
        "members_by_dimension": approx.member_count_by_dimension(),
        "seed_inclusion": {sid: approx.seed_inclusion[sid] for sid in sorted(approx.seed_inclusion)},
        "params": approx.params.to_dict(),
    }


def write_approximation(approx: SpecialtyApproximation, out_dir: str | Path, stem: str = "approximation") -> list[Path]:
    """Write the JSONL rows, the JSON summary, and a reloadable state file."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    jsonl_path = out_dir / f"{stem}.jsonl"
    with jsonl_path.open("w", encoding="utf-8") as handle:
        for row in approximation_rows(approx):
            handle.write(json.dumps(row, sort_keys=True) + "\n")

    summary_path = out_dir / f"{stem}_summary.json"
    summary_path.write_text(
        json.dumps(approximation_summary(approx), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    state = {
        "params": approx.params.to_dict(),
        "members": sorted(approx.members),
        "mask": {rid: approx.mask[rid] for rid in sorted(approx.mask)},
        "seed_inclusion": {sid: approx.seed_inclusion[sid] for sid in sorted(approx.seed_inclusion)},
    }
    state_path = out_dir / f"{stem}.json"
    state_path.write_text(json.dumps(state, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return [jsonl_path, summary_path, state_path]


def load_approximation(path: str | Path) -> SpecialtyApproximation:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return SpecialtyApproximation(
        members=frozenset(data["members"]),
        mask={rid: int(mask) for rid, mask in data["mask"].items()},
        params=ApproximationParams.from_dict(data["params"]),
        seed_inclusion={sid: bool(flag) for sid, flag in data["seed_inclusion"].items()},
    )
