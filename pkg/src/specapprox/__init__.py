"""Specialty approximation from seed publications via four metadata dimensions.

Pipeline: ingest publication records into an immutable corpus with
inverted indices, enlarge a seed set with the records it cites, select
frequent key values per dimension to a coverage threshold, then extract
every corpus publication covered in at least three of the four
dimensions. Analytics compare two approximations; a synthetic generator
provides planted two-specialty corpora for desk-scale experiments.
"""

from .analytics import ComparisonReport, DistributionSummary, compare, emit_report, summarize
from .approx import (
    ApproximationParams,
    SpecialtyApproximation,
    approximate_specialty,
    dimension_mask,
)
from .config import PipelineConfig
from .corpus import (
    Corpus,
    Dimension,
    DIMENSIONS,
    IngestDiagnostics,
    InvertedIndices,
    PublicationRecord,
    build_indices,
    parse_records,
    write_corpus,
)
from .errors import (
    ConfigError,
    CorpusMismatchError,
    DataError,
    DuplicateIdError,
    EmptyDirectoryError,
    EmptySeedError,
    InvalidParamsError,
    ProfileCorpusMismatchError,
    SpecApproxError,
    UnknownSeedIdError,
)
from .keyselect import (
    DimensionConfig,
    KeyProfile,
    KeyValueSet,
    default_configs,
    frequent_author_keys,
    is_covered,
    select_all_dimensions,
    select_key_values,
    value_frequencies,
)
from .normalize import normalize_author, normalize_doi, normalize_title
from .seed import SeedDirectory, expand_seed, load_seed_list
from .synth import SpecialtyParams, SynthParams, generate, sample_seed_ids

__version__ = "0.1.0"
