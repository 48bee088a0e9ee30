"""Seed directory assembly and one-hop reference expansion.

The directory starts from caller-supplied seed records and is enlarged
with the publications they cite, resolved by DOI inside the corpus.
Cited DOIs that resolve to nothing are reported, never fabricated.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable

from .corpus import Corpus
from .errors import EmptySeedError, UnknownSeedIdError
from .normalize import normalize_doi


@dataclass(frozen=True)
class SeedDirectory:
    seed_ids: frozenset[str]
    expansion_ids: frozenset[str]
    unresolved_refs: frozenset[str]
    # Share of expansion records whose source differs from every seed source;
    # a high value hints at an interdisciplinary seed. Diagnostic only.
    foreign_source_share: float = 0.0

    @property
    def directory_ids(self) -> frozenset[str]:
        return self.seed_ids | self.expansion_ids

    def __len__(self) -> int:
        return len(self.seed_ids) + len(self.expansion_ids)

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed_ids": sorted(self.seed_ids),
            "expansion_ids": sorted(self.expansion_ids),
            "unresolved_refs": sorted(self.unresolved_refs),
            "foreign_source_share": self.foreign_source_share,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "SeedDirectory":
        return cls(
            seed_ids=frozenset(data["seed_ids"]),
            expansion_ids=frozenset(data["expansion_ids"]),
            unresolved_refs=frozenset(data["unresolved_refs"]),
            foreign_source_share=float(data.get("foreign_source_share", 0.0)),
        )


def expand_seed(corpus: Corpus, seed_ids: Iterable[str]) -> SeedDirectory:
    """Enlarge the seed set with the corpus records it cites (depth 1)."""
    seeds = frozenset(seed_ids)
    if not seeds:
        raise EmptySeedError("seed set is empty")
    missing = sorted(sid for sid in seeds if sid not in corpus.records)
    if missing:
        raise UnknownSeedIdError(f"seed ids not in corpus: {missing}")

    cited: set[str] = set()
    for sid in seeds:
        cited.update(corpus.records[sid].reference_dois)

    expansion: set[str] = set()
    unresolved: set[str] = set()
    for doi in cited:
        target = corpus.doi_index.get(doi)
        if target is None:
            unresolved.add(doi)
        elif target not in seeds:
            expansion.add(target)

    seed_sources = {corpus.records[sid].source_id for sid in seeds}
    foreign = sum(
        1 for rid in expansion if corpus.records[rid].source_id not in seed_sources
    )
    share = foreign / len(expansion) if expansion else 0.0

    return SeedDirectory(
        seed_ids=seeds,
        expansion_ids=frozenset(expansion),
        unresolved_refs=frozenset(unresolved),
        foreign_source_share=share,
    )


def load_seed_list(path: str | Path, corpus: Corpus) -> frozenset[str]:
    """Seed list file: one record id or DOI per line; DOIs resolve via the corpus."""
    seeds: set[str] = set()
    unknown: list[str] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        entry = line.strip()
        if not entry or entry.startswith("#"):
            continue
        if entry in corpus.records:
            seeds.add(entry)
            continue
        doi = normalize_doi(entry)
        if doi is not None and doi in corpus.doi_index:
            seeds.add(corpus.doi_index[doi])
        else:
            unknown.append(entry)
    if unknown:
        raise UnknownSeedIdError(f"seed entries not in corpus: {sorted(unknown)}")
    return frozenset(seeds)
