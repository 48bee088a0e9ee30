import random
from dataclasses import replace

import pytest

from specapprox import Corpus, build_indices
from specapprox.approx import (
    DIMENSION_BITS,
    approximate_specialty,
    dimension_mask,
    load_approximation,
    write_approximation,
)
from specapprox.corpus import Dimension
from specapprox.errors import ConfigError, ProfileCorpusMismatchError
from specapprox.keyselect import DimensionConfig, KeyProfile, KeyValueSet, select_all_dimensions
from specapprox.seed import expand_seed
from specapprox.synth import SynthParams, generate, sample_seed_ids

from conftest import make_record, oracle_members


def profile_for(corpus, selections, min_assocs=None):
    """Hand-built profile: selections maps dimension -> iterable of values."""
    min_assocs = min_assocs or {}
    key_values = {}
    configs = {}
    for dimension in Dimension:
        values = tuple(selections.get(dimension, ()))
        key_values[dimension] = KeyValueSet(
            dimension=dimension,
            selected=tuple((value, 1) for value in values),
            achieved_coverage=1.0 if values else 0.0,
            exhausted=not values,
        )
        configs[dimension] = DimensionConfig(
            dimension=dimension, min_assoc=min_assocs.get(dimension)
        )
    return KeyProfile(
        key_values=key_values,
        configs=configs,
        seed_ids=(),
        expansion_ids=(),
        corpus_digest=corpus.provenance,
    )


SELECTIONS = {
    Dimension.REFERENCES: ["10.1/key"],
    Dimension.AUTHORS: ["star_s"],
    Dimension.TITLE_WORDS: ["higgs", "boson"],
    Dimension.CELLS: ["cell-a"],
}


@pytest.fixture
def mini_corpus():
    return Corpus.build(
        [
            # Covered in authors + references + title, wrong cell.
            make_record("THREE", authors=["star_s"], refs=["10.1/key"], title=["higgs", "boson"], source="cell-z"),
            # Covered in title only (two matching words).
            make_record("ONE", title=["higgs", "boson"], source="cell-z"),
            # Missing references entirely, covered in the other three.
            make_record("NOREFS", authors=["star_s"], title=["higgs", "boson"], source="cell-a"),
            # Two dimensions only: near miss.
            make_record("TWO", authors=["star_s"], source="cell-a"),
            # Nothing matches.
            make_record("ZERO", title=["plasma", "welding"], source="cell-z"),
            # All four dimensions empty.
            make_record("EMPTY", source=""),
        ]
    )


class TestDimensionMask:
    def test_three_dimension_mask(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        mask = dimension_mask(mini_corpus.records["THREE"], profile)
        assert mask == (
            DIMENSION_BITS[Dimension.REFERENCES]
            | DIMENSION_BITS[Dimension.AUTHORS]
            | DIMENSION_BITS[Dimension.TITLE_WORDS]
        )

    def test_two_title_words_are_one_dimension(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        mask = dimension_mask(mini_corpus.records["ONE"], profile)
        assert mask == DIMENSION_BITS[Dimension.TITLE_WORDS]
        assert bin(mask).count("1") == 1

    def test_empty_record_mask_zero(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        assert dimension_mask(mini_corpus.records["EMPTY"], profile) == 0


class TestApproximateSpecialty:
    def test_three_of_four_membership(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        indices = build_indices(mini_corpus)
        approx = approximate_specialty(mini_corpus, indices, profile)
        assert approx.members == {"THREE", "NOREFS"}

    def test_missing_dimension_does_not_exclude(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        approx = approximate_specialty(mini_corpus, build_indices(mini_corpus), profile)
        assert "NOREFS" in approx.members

    def test_two_dimension_near_miss_reported_not_member(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        approx = approximate_specialty(mini_corpus, build_indices(mini_corpus), profile)
        assert "TWO" not in approx.members
        assert "TWO" in approx.near_misses()
        assert bin(approx.mask["TWO"]).count("1") == 2

    def test_anti_monotone_in_m_required(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        indices = build_indices(mini_corpus)
        members = {
            m: approximate_specialty(mini_corpus, indices, profile, m_required=m).members
            for m in (2, 3, 4)
        }
        assert members[4] <= members[3] <= members[2]

    def test_monotone_in_selected_keys(self, mini_corpus):
        indices = build_indices(mini_corpus)
        small = profile_for(mini_corpus, SELECTIONS)
        enlarged = dict(SELECTIONS)
        enlarged[Dimension.CELLS] = ["cell-a", "cell-z"]
        big = profile_for(mini_corpus, enlarged)
        members_small = approximate_specialty(mini_corpus, indices, small).members
        members_big = approximate_specialty(mini_corpus, indices, big).members
        assert members_small <= members_big

    def test_profile_corpus_mismatch_rejected(self, mini_corpus):
        other = Corpus.build([make_record("X1")])
        profile = profile_for(other, SELECTIONS)
        with pytest.raises(ProfileCorpusMismatchError):
            approximate_specialty(mini_corpus, build_indices(mini_corpus), profile)

    def test_m_required_validated(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        indices = build_indices(mini_corpus)
        for bad in (0, 5):
            with pytest.raises(ConfigError):
                approximate_specialty(mini_corpus, indices, profile, m_required=bad)

    def test_seed_inclusion_flags(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        profile = replace(profile, seed_ids=("THREE", "TWO"))
        approx = approximate_specialty(mini_corpus, build_indices(mini_corpus), profile)
        assert approx.seed_inclusion == {"THREE": True, "TWO": False}

    def test_year_filter(self, mini_corpus):
        records = [
            make_record("Y1", authors=["star_s"], refs=["10.1/key"], title=["higgs", "boson"], year=2010),
            make_record("Y2", authors=["star_s"], refs=["10.1/key"], title=["higgs", "boson"], year=2020),
            make_record("Y3", authors=["star_s"], refs=["10.1/key"], title=["higgs", "boson"]),
        ]
        corpus = Corpus.build(records)
        profile = profile_for(corpus, {**SELECTIONS, Dimension.CELLS: ["venue-1"]})
        indices = build_indices(corpus)
        assert approximate_specialty(corpus, indices, profile).members == {"Y1", "Y2", "Y3"}
        bounded = approximate_specialty(corpus, indices, profile, year_range=(2012, None))
        assert bounded.members == {"Y2"}


class TestScanEquivalence:
    def test_matches_brute_force_on_random_corpora(self):
        rng = random.Random(2024)
        titles = [f"topic{i:02d}" for i in range(10)]
        authors = [f"auth{i}_a" for i in range(8)]
        refs = [f"10.7/r{i}" for i in range(8)]
        cells = [f"cell{i}" for i in range(5)]
        for trial in range(10):
            records = []
            for i in range(rng.randint(20, 120)):
                records.append(
                    make_record(
                        f"P{i:03d}",
                        title=rng.sample(titles, rng.randint(0, 4)),
                        authors=rng.sample(authors, rng.randint(0, 2)),
                        refs=rng.sample(refs, rng.randint(0, 3)),
                        source=rng.choice(cells + [""]),
                    )
                )
            corpus = Corpus.build(records)
            selections = {
                Dimension.TITLE_WORDS: rng.sample(titles, 3),
                Dimension.AUTHORS: rng.sample(authors, 2),
                Dimension.REFERENCES: rng.sample(refs, 2),
                Dimension.CELLS: rng.sample(cells, 2),
            }
            profile = profile_for(corpus, selections)
            indices = build_indices(corpus)
            for m in (1, 2, 3, 4):
                approx = approximate_specialty(corpus, indices, profile, m_required=m)
                assert approx.members == oracle_members(corpus, profile, m)

    def test_matches_brute_force_on_synthetic_pipeline(self):
        params = SynthParams(rng_seed=11, background_size=400)
        params = replace(
            params,
            specialty_a=replace(params.specialty_a, n_pubs=80),
            specialty_b=replace(params.specialty_b, n_pubs=80),
        )
        corpus, labels = generate(params)
        seeds = sample_seed_ids(labels, "A", 15, 5)
        profile = select_all_dimensions(expand_seed(corpus, seeds), corpus)
        approx = approximate_specialty(corpus, build_indices(corpus), profile)
        assert approx.members == oracle_members(corpus, profile, 3)


class TestArtifacts:
    def test_write_load_roundtrip(self, mini_corpus, tmp_path):
        profile = profile_for(mini_corpus, SELECTIONS)
        approx = approximate_specialty(mini_corpus, build_indices(mini_corpus), profile)
        paths = write_approximation(approx, tmp_path)
        assert sorted(p.name for p in paths) == [
            "approximation.json",
            "approximation.jsonl",
            "approximation_summary.json",
        ]
        assert load_approximation(tmp_path / "approximation.json") == approx

    def test_member_counts_by_dimension(self, mini_corpus):
        profile = profile_for(mini_corpus, SELECTIONS)
        approx = approximate_specialty(mini_corpus, build_indices(mini_corpus), profile)
        # THREE covers refs/authors/title, NOREFS covers authors/title/cells.
        assert approx.member_count_by_dimension() == {
            "references": 1,
            "authors": 2,
            "title_words": 2,
            "cells": 1,
        }

    def test_jsonl_rows_sorted_with_flags(self, mini_corpus, tmp_path):
        import json

        profile = profile_for(mini_corpus, SELECTIONS)
        approx = approximate_specialty(mini_corpus, build_indices(mini_corpus), profile)
        write_approximation(approx, tmp_path)
        rows = [
            json.loads(line)
            for line in (tmp_path / "approximation.jsonl").read_text().splitlines()
        ]
        assert [row["id"] for row in rows] == sorted(row["id"] for row in rows)
        by_id = {row["id"]: row for row in rows}
        assert by_id["THREE"]["member"] is True
        assert by_id["THREE"]["dimensions"]["references"] is True
        assert by_id["THREE"]["dimensions"]["cells"] is False
        assert by_id["TWO"]["member"] is False
