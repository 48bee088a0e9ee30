import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specapprox import Corpus, EmptyDirectoryError
from specapprox.corpus import Dimension
from specapprox.errors import ConfigError
from specapprox.keyselect import (
    DimensionConfig,
    KeyProfile,
    frequent_author_keys,
    is_covered,
    select_all_dimensions,
    select_key_values,
    value_frequencies,
)

from conftest import directory_of, make_record, oracle_select, random_directory


def authors_config(threshold=0.8, excluded=()):
    return DimensionConfig(
        dimension=Dimension.AUTHORS, coverage_threshold=threshold, excluded_values=frozenset(excluded)
    )


def title_config(threshold=0.8):
    return DimensionConfig(dimension=Dimension.TITLE_WORDS, coverage_threshold=threshold)


class TestValueFrequencies:
    def test_document_frequency(self, authors_fixture):
        corpus, directory = authors_fixture
        freq = value_frequencies(directory, corpus, Dimension.AUTHORS, authors_config())
        assert freq == {"smith_j": 4, "lee_k": 1}

    def test_value_counted_once_per_record(self):
        # Reference sets are deduplicated at the record level, so one record
        # contributes at most one to any value's frequency.
        corpus = Corpus.build(
            [make_record("P1", refs=["10.1/a"]), make_record("P2", refs=["10.1/a", "10.1/b"])]
        )
        directory = directory_of(corpus, ["P1", "P2"])
        config = DimensionConfig(dimension=Dimension.REFERENCES)
        freq = value_frequencies(directory, corpus, Dimension.REFERENCES, config)
        assert freq == {"10.1/a": 2, "10.1/b": 1}

    def test_empty_dimension_gives_empty_table(self, authors_fixture):
        corpus, directory = authors_fixture
        config = DimensionConfig(dimension=Dimension.REFERENCES)
        assert value_frequencies(directory, corpus, Dimension.REFERENCES, config) == {}

    def test_excluded_values_removed(self, authors_fixture):
        corpus, directory = authors_fixture
        freq = value_frequencies(
            directory, corpus, Dimension.AUTHORS, authors_config(excluded=["smith_j"])
        )
        assert freq == {"lee_k": 1}


class TestIsCovered:
    def test_two_title_matches_cover(self):
        record = make_record("P1", title=["higgs", "boson"])
        assert is_covered(record, Dimension.TITLE_WORDS, frozenset({"higgs", "boson", "decays"}), 2)

    def test_one_title_match_does_not_cover(self):
        record = make_record("P1", title=["higgs"])
        assert not is_covered(record, Dimension.TITLE_WORDS, frozenset({"higgs", "boson", "decays"}), 2)

    def test_empty_dimension_never_covered(self):
        record = make_record("P1")
        assert not is_covered(record, Dimension.REFERENCES, frozenset({"10.1/a"}), 1)


class TestSelectKeyValues:
    def test_authors_fixture_stops_at_threshold(self, authors_fixture):
        corpus, directory = authors_fixture
        result = select_key_values(directory, corpus, authors_config())
        assert result.selected == (("smith_j", 4),)
        assert result.achieved_coverage == pytest.approx(0.8)
        assert not result.exhausted

    def test_authors_fixture_full_coverage(self, authors_fixture):
        corpus, directory = authors_fixture
        result = select_key_values(directory, corpus, authors_config(threshold=1.0))
        assert result.selected == (("smith_j", 4), ("lee_k", 1))
        assert result.achieved_coverage == 1.0

    def test_title_fixture_canonical_order_and_stop(self, title_fixture):
        corpus, directory = title_fixture
        result = select_key_values(directory, corpus, title_config())
        assert [value for value, _ in result.selected] == ["boson", "decays", "higgs"]
        assert result.achieved_coverage == pytest.approx(4 / 5)
        assert not result.exhausted

    def test_empty_directory_rejected(self, authors_fixture):
        corpus, _ = authors_fixture
        empty = directory_of(corpus, [])
        with pytest.raises(EmptyDirectoryError):
            select_key_values(empty, corpus, authors_config())

    def test_sparse_dimension_exhausts(self, authors_fixture):
        corpus, directory = authors_fixture
        config = DimensionConfig(dimension=Dimension.REFERENCES)
        result = select_key_values(directory, corpus, config)
        assert result.selected == ()
        assert result.achieved_coverage == 0.0
        assert result.exhausted

    def test_single_record_directory(self):
        corpus = Corpus.build([make_record("P1", title=["higgs", "boson"], authors=["a_b"])])
        directory = directory_of(corpus, ["P1"])
        titles = select_key_values(directory, corpus, title_config())
        assert titles.achieved_coverage == 1.0
        assert len(titles.selected) == 2
        authors = select_key_values(directory, corpus, authors_config())
        assert authors.selected == (("a_b", 1),)

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            DimensionConfig(dimension=Dimension.AUTHORS, coverage_threshold=0.0)
        with pytest.raises(ConfigError):
            DimensionConfig(dimension=Dimension.AUTHORS, coverage_threshold=1.5)
        with pytest.raises(ConfigError):
            DimensionConfig(dimension=Dimension.AUTHORS, min_assoc=3)
        with pytest.raises(ConfigError):
            DimensionConfig(dimension=Dimension.TITLE_WORDS, min_word_len=0)

    def test_title_defaults_to_two_assoc_others_one(self):
        assert DimensionConfig(dimension=Dimension.TITLE_WORDS).min_assoc == 2
        for dimension in (Dimension.AUTHORS, Dimension.REFERENCES, Dimension.CELLS):
            assert DimensionConfig(dimension=dimension).min_assoc == 1


class TestGreedyProperties:
    def test_matches_oracle_on_random_directories(self):
        rng = random.Random(1234)
        for _ in range(60):
            corpus, directory, configs = random_directory(rng)
            for dimension, config in configs.items():
                assert select_key_values(directory, corpus, config) == oracle_select(
                    directory, corpus, config
                )

    def test_prefix_coverage_monotone_and_minimal(self):
        rng = random.Random(99)
        for _ in range(40):
            corpus, directory, configs = random_directory(rng)
            for dimension, config in configs.items():
                result = select_key_values(directory, corpus, config)
                coverages = []
                for k in range(len(result.selected) + 1):
                    chosen = frozenset(v for v, _ in result.selected[:k])
                    covered = sum(
                        1
                        for rid in directory.directory_ids
                        if is_covered(corpus.records[rid], dimension, chosen, config.min_assoc)
                    )
                    coverages.append(covered / len(directory.directory_ids))
                assert coverages == sorted(coverages)
                if not result.exhausted and result.selected:
                    assert coverages[-1] >= config.coverage_threshold
                    assert coverages[-2] < config.coverage_threshold

    def test_selected_frequencies_dominate_unselected(self):
        rng = random.Random(4321)
        for _ in range(40):
            corpus, directory, configs = random_directory(rng)
            for dimension, config in configs.items():
                freq = value_frequencies(directory, corpus, dimension, config)
                result = select_key_values(directory, corpus, config)
                chosen = result.value_set()
                for value, count in freq.items():
                    if value in chosen:
                        continue
                    for selected_value, selected_count in result.selected:
                        assert (selected_count, value) > (count, selected_value)

    def test_deterministic_across_runs_and_threads(self):
        rng = random.Random(7)
        corpus, directory, configs = random_directory(rng)
        serial = select_all_dimensions(directory, corpus, configs)
        threaded = select_all_dimensions(directory, corpus, configs, threads=4)
        again = select_all_dimensions(directory, corpus, configs)
        assert serial == threaded == again
        assert serial.digest() == threaded.digest()


class TestSelectAllDimensions:
    def test_profile_covers_four_dimensions(self, authors_fixture):
        corpus, directory = authors_fixture
        profile = select_all_dimensions(directory, corpus)
        assert set(profile.key_values) == set(Dimension)
        assert profile.corpus_digest == corpus.provenance
        assert profile.seed_ids == tuple(sorted(directory.seed_ids))

    def test_missing_dimension_exhausts_without_blocking(self, authors_fixture):
        corpus, directory = authors_fixture
        profile = select_all_dimensions(directory, corpus)
        assert profile.key_values[Dimension.REFERENCES].exhausted
        assert not profile.key_values[Dimension.AUTHORS].exhausted
        assert not profile.key_values[Dimension.CELLS].exhausted

    def test_profile_serialization_roundtrip(self, authors_fixture):
        corpus, directory = authors_fixture
        profile = select_all_dimensions(directory, corpus)
        clone = KeyProfile.from_dict(profile.to_dict())
        assert clone == profile
        assert clone.digest() == profile.digest()


class TestFrequentAuthorKeys:
    def test_over_share_excluded(self):
        records = [make_record(f"P{i}", authors=["busy_b"]) for i in range(6)]
        records += [make_record(f"Q{i}", authors=[f"rare{i}_r"]) for i in range(4)]
        corpus = Corpus.build(records)
        assert frequent_author_keys(corpus, max_share=0.5) == {"busy_b"}
        assert frequent_author_keys(corpus, max_share=0.6) == frozenset()

    def test_empty_corpus(self):
        assert frequent_author_keys(Corpus.build([])) == frozenset()


@settings(max_examples=60)
@given(
    title=st.frozensets(st.sampled_from([f"word{i:02d}" for i in range(12)]), min_size=2, max_size=6),
    extra=st.frozensets(st.sampled_from([f"other{i:02d}" for i in range(12)]), max_size=5),
    data=st.data(),
)
def test_title_rule_one_never_two_always(title, extra, data):
    record = make_record("P1", title=title)
    one = frozenset(data.draw(st.sets(st.sampled_from(sorted(title)), min_size=1, max_size=1)))
    two = frozenset(data.draw(st.sets(st.sampled_from(sorted(title)), min_size=2, max_size=2)))
    assert not is_covered(record, Dimension.TITLE_WORDS, one | (extra - title), 2)
    assert is_covered(record, Dimension.TITLE_WORDS, two | (extra - title), 2)
