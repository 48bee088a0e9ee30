"""Deterministic synthetic corpora with two planted specialties.

The two specialties share their publication venues but differ in
vocabulary, author pools, canonical references, and in co-author and
citation levels (one small-team / low-citation, one large-collaboration
/ high-citation). A generic background population surrounds them. The
parameters are fixtures tuned so the planted structure is recoverable,
not claims about real bibliometric distributions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .corpus import Corpus, PublicationRecord
from .errors import InvalidParamsError

LABEL_A = "A"
LABEL_B = "B"
LABEL_BACKGROUND = "background"

# First two words of each topical pool are signature terms carried by
# almost every record of the specialty.
THEORY_WORDS = (
    "instanton",
    "supersymmetry",
    "lattice",
    "spinor",
    "tensor",
    "vacuum",
    "renormalization",
    "perturbative",
    "amplitude",
    "duality",
    "holographic",
    "gaugino",
    "moduli",
    "brane",
    "twistor",
    "anomaly",
    "condensate",
    "soliton",
    "monopole",
    "worldsheet",
    "superspace",
    "chiral",
    "effective",
    "coupling",
    "propagator",
)

EXPERIMENT_WORDS = (
    "calorimeter",
    "luminosity",
    "detector",
    "trigger",
    "collider",
    "tracker",
    "scintillator",
    "spectrometer",
    "alignment",
    "efficiency",
    "resolution",
    "pileup",
    "beamline",
    "readout",
    "silicon",
    "muonic",
    "hadronic",
    "transverse",
    "momentum",
    "calibration",
    "reconstruction",
    "acceptance",
    "background",
    "systematic",
    "dataset",
)

GENERIC_WORDS = (
    "analysis",
    "measurement",
    "approach",
    "results",
    "search",
    "study",
    "observation",
    "evidence",
    "constraints",
    "properties",
    "production",
    "interactions",
    "particle",
    "physics",
    "energy",
    "collisions",
    "states",
    "decays",
    "processes",
    "review",
)

SHARED_SOURCES = ("phys-rev-d", "j-high-energy-phys", "phys-lett-b", "eur-phys-j-c", "nucl-phys-b")
SHARED_SOURCE_WEIGHTS = (48, 48, 2, 1, 1)

BACKGROUND_SOURCES = (
    "j-appl-chem",
    "geoscience-lett",
    "cell-biology-rep",
    "neuro-imaging-j",
    "materials-today",
    "climate-dynamics",
    "j-econometrics",
    "linguistics-q",
    "optics-express",
    "robotics-auton",
    "marine-ecology",
    "soil-science-j",
)


@dataclass(frozen=True)
class SpecialtyParams:
    """One planted specialty."""

    n_pubs: int
    topical_vocab: tuple[str, ...]
    author_pool_size: int
    author_prefix: str
    doi_prefix: str
    coauthor_range: tuple[int, int]
    citation_range: tuple[int, int]
    reference_pool_size: int = 12


@dataclass(frozen=True)
class SynthParams:
    rng_seed: int = 20240817
    specialty_a: SpecialtyParams = field(
        default_factory=lambda: SpecialtyParams(
            n_pubs=500,
            topical_vocab=THEORY_WORDS,
            author_pool_size=120,
            author_prefix="theor",
            doi_prefix="10.1001",
            coauthor_range=(1, 5),
            citation_range=(100, 900),
        )
    )
    specialty_b: SpecialtyParams = field(
        default_factory=lambda: SpecialtyParams(
            n_pubs=500,
            topical_vocab=EXPERIMENT_WORDS,
            author_pool_size=120,
            author_prefix="exper",
            doi_prefix="10.1002",
            coauthor_range=(100, 3000),
            citation_range=(5000, 20000),
        )
    )
    shared_sources: tuple[str, ...] = SHARED_SOURCES
    shared_source_weights: tuple[int, ...] = SHARED_SOURCE_WEIGHTS
    generic_vocab: tuple[str, ...] = GENERIC_WORDS
    background_size: int = 3000
    background_author_pool: int = 800
    background_coauthor_range: tuple[int, int] = (1, 20)
    background_citation_range: tuple[int, int] = (0, 300)
    background_reference_pool_size: int = 150
    background_sources: tuple[str, ...] = BACKGROUND_SOURCES

    def validate(self) -> None:
        pools = {
            "specialty A topical": set(self.specialty_a.topical_vocab),
            "specialty B topical": set(self.specialty_b.topical_vocab),
            "generic": set(self.generic_vocab),
        }
        names = list(pools)
        for i, left in enumerate(names):
            for right in names[i + 1:]:
                if pools[left] & pools[right]:
                    raise InvalidParamsError(f"{left} and {right} word pools overlap")
        for name, pool in pools.items():
            short = [w for w in pool if len(w) < 5 or w.isdigit()]
            if short:
                raise InvalidParamsError(f"{name} pool has unusable words: {sorted(short)}")
        for label, sp in ((LABEL_A, self.specialty_a), (LABEL_B, self.specialty_b)):
            if sp.n_pubs < 0:
                raise InvalidParamsError(f"specialty {label}: n_pubs must be >= 0")
            if sp.n_pubs > 0:
                if len(sp.topical_vocab) < 6:
                    raise InvalidParamsError(f"specialty {label}: need >= 6 topical words")
                if sp.author_pool_size < 2:
                    raise InvalidParamsError(f"specialty {label}: author pool too small")
                for lo, hi in (sp.coauthor_range, sp.citation_range):
                    if lo < 0 or hi < lo:
                        raise InvalidParamsError(f"specialty {label}: bad range ({lo}, {hi})")
        if self.background_size < 0:
            raise InvalidParamsError("background_size must be >= 0")
        if self.background_size > 0:
            if len(self.generic_vocab) < 6:
                raise InvalidParamsError("need >= 6 generic words")
            if self.background_author_pool < 2:
                raise InvalidParamsError("background author pool too small")
        if self.specialty_a.n_pubs > 0 or self.specialty_b.n_pubs > 0:
            if not self.shared_sources:
                raise InvalidParamsError("shared source list must not be empty")
            if len(self.shared_source_weights) != len(self.shared_sources):
                raise InvalidParamsError("one weight per shared source required")


def _author_key(prefix: str, index: int) -> str:
    return f"{prefix}{index:03d}_{chr(97 + index % 26)}"


def _specialty_records(
    rng: random.Random,
    label: str,
    sp: SpecialtyParams,
    params: SynthParams,
) -> Iterable[PublicationRecord]:
    signature = list(sp.topical_vocab[:2])
    rest = list(sp.topical_vocab[2:])
    pool = min(sp.reference_pool_size, sp.n_pubs)
    classic_dois = [f"{sp.doi_prefix}/{label.lower()}{i:04d}" for i in range(pool)]

    for i in range(sp.n_pubs):
        doi = f"{sp.doi_prefix}/{label.lower()}{i:04d}"

        words = set()
        for word in signature:
            if rng.random() < 0.99:
                words.add(word)
        words.update(rng.sample(rest, rng.randint(2, 4)))
        generic_n = rng.randint(0, 2)
        if generic_n:
            words.update(rng.sample(params.generic_vocab, generic_n))

        author_idxs = rng.sample(range(sp.author_pool_size), 2)
        author_keys = frozenset(_author_key(sp.author_prefix, idx) for idx in author_idxs)

        refs: set[str] = set()
        anchors = [d for d in classic_dois[:2] if d != doi]
        if anchors and rng.random() < 0.99:
            refs.add(anchors[0])
        others = [d for d in classic_dois if d != doi and d not in refs]
        extra = min(rng.randint(2, 4), len(others))
        if extra:
            refs.update(rng.sample(others, extra))
        if rng.random() < 0.05:
            refs.add(f"10.9000/{label.lower()}ext{rng.randint(0, 4)}")

        source = rng.choices(params.shared_sources, weights=params.shared_source_weights)[0]

        yield PublicationRecord(
            id=f"{label}{i:04d}",
            doi=doi,
            title_keys=frozenset(words),
            reprint_author_keys=author_keys,
            coauthor_count=max(rng.randint(*sp.coauthor_range), len(author_keys)),
            source_id=source,
            cell_id=source,
            reference_dois=frozenset(refs),
            citation_count=rng.randint(*sp.citation_range),
            year=rng.randint(2008, 2020),
        )


def _background_records(rng: random.Random, params: SynthParams) -> Iterable[PublicationRecord]:
    pool = min(params.background_reference_pool_size, params.background_size)
    classic_dois = [f"10.1003/x{i:05d}" for i in range(pool)]
    all_sources = params.background_sources + params.shared_sources

    for i in range(params.background_size):
        doi = f"10.1003/x{i:05d}"
        words = frozenset(rng.sample(params.generic_vocab, rng.randint(2, 4)))
        n_authors = rng.randint(1, 2)
        author_idxs = rng.sample(range(params.background_author_pool), n_authors)
        author_keys = frozenset(_author_key("bg", idx) for idx in author_idxs)

        others = [d for d in classic_dois if d != doi]
        extra = min(rng.randint(1, 4), len(others))
        refs = frozenset(rng.sample(others, extra)) if extra else frozenset()
        source = rng.choice(all_sources)

        yield PublicationRecord(
            id=f"X{i:05d}",
            doi=doi,
            title_keys=words,
            reprint_author_keys=author_keys,
            coauthor_count=max(rng.randint(*params.background_coauthor_range), n_authors),
            source_id=source,
            cell_id=source,
            reference_dois=refs,
            citation_count=rng.randint(*params.background_citation_range),
            year=rng.randint(2000, 2022),
        )


def generate(params: SynthParams | None = None) -> tuple[Corpus, dict[str, str]]:
    """Generate a corpus and its ground-truth labels, fully determined by the seed."""
    params = params or SynthParams()
    params.validate()
    rng = random.Random(params.rng_seed)

    records: list[PublicationRecord] = []
    labels: dict[str, str] = {}
    for label, sp in ((LABEL_A, params.specialty_a), (LABEL_B, params.specialty_b)):
        for record in _specialty_records(rng, label, sp, params):
            records.append(record)
            labels[record.id] = label
    for record in _background_records(rng, params):
        records.append(record)
        labels[record.id] = LABEL_BACKGROUND

    return Corpus.build(records), labels


def sample_seed_ids(labels: dict[str, str], label: str, n: int, rng_seed: int) -> frozenset[str]:
    """Deterministic sample of n record ids carrying the given label."""
    candidates = sorted(rid for rid, lab in labels.items() if lab == label)
    if n > len(candidates):
        raise InvalidParamsError(f"cannot sample {n} of {len(candidates)} {label!r} records")
    return frozenset(random.Random(rng_seed).sample(candidates, n))


def write_labels(labels: dict[str, str], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{rid}\t{labels[rid]}" for rid in sorted(labels)]
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    return path


def load_labels(path: str | Path) -> dict[str, str]:
    labels: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            rid, label = line.split("\t")
            labels[rid] = label
    return labels
