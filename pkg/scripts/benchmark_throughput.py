#!/usr/bin/env python3
"""Time ingest, index construction, and extraction on a large synthetic corpus.

Usage:
    python scripts/benchmark_throughput.py [--records N] [--workdir DIR]
"""

import argparse
import sys
import tempfile
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from specapprox import build_indices, expand_seed, parse_records, select_all_dimensions
from specapprox.approx import approximate_specialty
from specapprox.corpus import write_corpus
from specapprox.synth import SynthParams, generate, sample_seed_ids


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--records", type=int, default=100_000, help="total corpus size")
    parser.add_argument("--workdir", type=Path, default=None, help="where to write the corpus file")
    args = parser.parse_args()

    background = max(args.records - 1000, 0)
    params = SynthParams(background_size=background)
    print(f"generating {args.records} records...")
    corpus, labels = generate(params)

    workdir = args.workdir or Path(tempfile.mkdtemp(prefix="specapprox-bench-"))
    path = write_corpus(corpus, workdir / "corpus.jsonl")
    size_mb = path.stat().st_size / 1e6
    print(f"corpus file: {path} ({size_mb:.1f} MB)")

    t0 = time.perf_counter()
    parsed, diagnostics = parse_records(path)
    t_ingest = time.perf_counter() - t0
    print(f"ingest:      {t_ingest:6.2f}s  ({len(parsed)} records, "
          f"{len(diagnostics.malformed_rows)} malformed)")

    t0 = time.perf_counter()
    indices = build_indices(parsed)
    t_index = time.perf_counter() - t0
    print(f"index:       {t_index:6.2f}s")

    seeds = sample_seed_ids(labels, "A", 30, params.rng_seed + 1)
    profile = select_all_dimensions(expand_seed(parsed, seeds), parsed)

    t0 = time.perf_counter()
    approx = approximate_specialty(parsed, indices, profile)
    t_approx = time.perf_counter() - t0
    print(f"approximate: {t_approx:6.2f}s  ({len(approx.members)} members)")

    total = t_ingest + t_index + t_approx
    rate = len(parsed) / total if total else float("inf")
    print(f"total:       {total:6.2f}s  ({rate:,.0f} records/s)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
