import random
import sys
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

import pytest

from specapprox import Corpus, PublicationRecord, SeedDirectory
from specapprox.corpus import Dimension
from specapprox.keyselect import DimensionConfig, KeyValueSet


def make_record(
    record_id,
    doi=None,
    title=(),
    authors=(),
    coauthors=None,
    source="venue-1",
    cell=None,
    refs=(),
    citations=0,
    year=None,
):
    authors = frozenset(authors)
    return PublicationRecord(
        id=record_id,
        doi=doi,
        title_keys=frozenset(title),
        reprint_author_keys=authors,
        coauthor_count=len(authors) if coauthors is None else coauthors,
        source_id=source,
        cell_id=cell if cell is not None else source,
        reference_dois=frozenset(refs),
        citation_count=citations,
        year=year,
    )


def directory_of(corpus, seed_ids, expansion_ids=()):
    return SeedDirectory(
        seed_ids=frozenset(seed_ids),
        expansion_ids=frozenset(expansion_ids),
        unresolved_refs=frozenset(),
    )


@pytest.fixture
def authors_fixture():
    """Five records: four share reprint key smith_j, the fifth has lee_k."""
    records = [
        make_record(f"P{i}", authors=["smith_j"], title=["paper%d" % i + "x"]) for i in range(1, 5)
    ]
    records.append(make_record("P5", authors=["lee_k"], title=["paper5x"]))
    corpus = Corpus.build(records)
    return corpus, directory_of(corpus, [r.id for r in records])


@pytest.fixture
def title_fixture():
    """Five records with overlapping title keys; boson/decays/higgs all occur thrice."""
    keysets = {
        "P1": {"higgs", "boson", "decays"},
        "P2": {"higgs", "boson"},
        "P3": {"higgs", "decays"},
        "P4": {"boson", "decays"},
        "P5": {"quark", "model"},
    }
    records = [make_record(rid, title=keys) for rid, keys in keysets.items()]
    corpus = Corpus.build(records)
    return corpus, directory_of(corpus, keysets)


def config_values(record, config):
    """Dimension values as the selection sees them; mirrors the config contract."""
    values = record.values(config.dimension)
    if config.dimension is Dimension.TITLE_WORDS:
        values = frozenset(v for v in values if len(v) >= config.min_word_len)
    return values - config.excluded_values


def oracle_select(directory, corpus, config):
    """Brute-force reference: evaluate every canonical-order prefix from scratch."""
    ids = sorted(directory.directory_ids)
    n = len(ids)
    freq = {}
    for rid in ids:
        for value in config_values(corpus.records[rid], config):
            freq[value] = freq.get(value, 0) + 1
    order = sorted(freq.items(), key=lambda item: (-item[1], item[0]))

    def prefix_coverage(k):
        chosen = {value for value, _ in order[:k]}
        covered = sum(
            1
            for rid in ids
            if len(config_values(corpus.records[rid], config) & chosen) >= config.min_assoc
        )
        return covered / n

    for k in range(1, len(order) + 1):
        coverage = prefix_coverage(k)
        if coverage >= config.coverage_threshold:
            return KeyValueSet(config.dimension, tuple(order[:k]), coverage, False)
    return KeyValueSet(config.dimension, tuple(order), prefix_coverage(len(order)), True)


def oracle_members(corpus, profile, m_required):
    """Brute-force reference: evaluate every corpus record, no index shortcuts."""
    members = set()
    for rid, record in corpus.records.items():
        hits = 0
        for dimension in Dimension:
            keys = {value for value, _ in profile.key_values[dimension].selected}
            min_assoc = profile.configs[dimension].min_assoc
            values = record.values(dimension)
            if values and len(values & keys) >= min_assoc:
                hits += 1
        if hits >= m_required:
            members.add(rid)
    return members


_TITLE_POOL = [f"alpha{i:02d}" for i in range(15)]
_AUTHOR_POOL = [f"auth{i:02d}_z" for i in range(15)]
_REF_POOL = [f"10.1/r{i:02d}" for i in range(15)]
_CELL_POOL = [f"cell{i:02d}" for i in range(15)]


def random_directory(rng: random.Random):
    """Small random corpus + all-seeds directory + per-dimension configs."""
    n = rng.randint(1, 20)
    pools = {
        Dimension.TITLE_WORDS: rng.sample(_TITLE_POOL, rng.randint(1, 15)),
        Dimension.AUTHORS: rng.sample(_AUTHOR_POOL, rng.randint(1, 15)),
        Dimension.REFERENCES: rng.sample(_REF_POOL, rng.randint(1, 15)),
        Dimension.CELLS: rng.sample(_CELL_POOL, rng.randint(1, 15)),
    }
    records = []
    for i in range(n):
        title_pool = pools[Dimension.TITLE_WORDS]
        author_pool = pools[Dimension.AUTHORS]
        ref_pool = pools[Dimension.REFERENCES]
        cells = pools[Dimension.CELLS]
        records.append(
            make_record(
                f"R{i:03d}",
                title=rng.sample(title_pool, min(rng.randint(0, 5), len(title_pool))),
                authors=rng.sample(author_pool, min(rng.randint(0, 2), len(author_pool))),
                refs=rng.sample(ref_pool, min(rng.randint(0, 4), len(ref_pool))),
                source=rng.choice(cells + [""]),
            )
        )
    corpus = Corpus.build(records)
    directory = directory_of(corpus, [r.id for r in records])
    configs = {
        dimension: DimensionConfig(
            dimension=dimension,
            coverage_threshold=rng.choice([0.3, 0.5, 0.8, 0.9, 1.0]),
        )
        for dimension in Dimension
    }
    return corpus, directory, configs
