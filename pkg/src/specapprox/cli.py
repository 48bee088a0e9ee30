"""Command-line driver wiring the pipeline end to end.

Subcommands: ingest, expand, select, approximate, compare, synth, and
pipeline (ingest -> expand -> select -> approximate). Every run writes
its artifacts plus a manifest echoing the materialized config and input
digests. Exit codes: 0 success, 2 config error, 3 data error, 4 internal.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

from . import __version__
from .analytics import compare, emit_report
from .approx import approximate_specialty, load_approximation, write_approximation
from .config import PipelineConfig
from .corpus import Corpus, IngestDiagnostics, build_indices, load_cell_mapping, parse_records, write_corpus
from .errors import ConfigError, SpecApproxError
from .keyselect import frequent_author_keys, load_profile, select_all_dimensions, write_profile
from .seed import SeedDirectory, expand_seed, load_seed_list
from .synth import SynthParams, generate, sample_seed_ids, write_labels


def _file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_json(path: Path, payload: Any) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _write_manifest(
    out_dir: Path,
    subcommand: str,
    config: PipelineConfig,
    inputs: dict[str, str],
    artifacts: list[Path],
    deterministic: bool,
    extra: dict[str, Any] | None = None,
) -> Path:
    manifest: dict[str, Any] = {
        "tool": {"name": "specapprox", "version": __version__},
        "subcommand": subcommand,
        "config": config.to_dict(),
        "inputs": dict(sorted(inputs.items())),
        "artifacts": sorted(p.name for p in artifacts),
    }
    if extra:
        manifest.update(extra)
    if not deterministic:
        manifest["generated_at"] = datetime.now(timezone.utc).isoformat()
    return _write_json(out_dir / f"manifest_{subcommand}.json", manifest)


def _require(config: PipelineConfig, attribute: str, flag: str) -> str:
    value = getattr(config, attribute)
    if not value:
        raise ConfigError(f"config is missing {flag!r}")
    return value


def _ingest_corpus(config: PipelineConfig, inputs: dict[str, str]) -> tuple[Corpus, IngestDiagnostics]:
    corpus_path = _require(config, "corpus_path", "corpus.path")
    if not Path(corpus_path).is_file():
        raise ConfigError(f"corpus file not found: {corpus_path}")
    mapping = None
    if config.cell_mapping_path:
        if not Path(config.cell_mapping_path).is_file():
            raise ConfigError(f"cell mapping file not found: {config.cell_mapping_path}")
        mapping = load_cell_mapping(config.cell_mapping_path)
        inputs[config.cell_mapping_path] = _file_digest(config.cell_mapping_path)
    corpus, diagnostics = parse_records(
        corpus_path,
        format=config.corpus_format,
        mapping=mapping,
        min_word_len=config.min_word_len,
        tabular=config.tabular_schema(),
    )
    inputs[corpus_path] = corpus.provenance
    return corpus, diagnostics


def _expand_directory(config: PipelineConfig, corpus: Corpus, inputs: dict[str, str]) -> SeedDirectory:
    seed_path = _require(config, "seed_path", "seed_path")
    if not Path(seed_path).is_file():
        raise ConfigError(f"seed list file not found: {seed_path}")
    inputs[seed_path] = _file_digest(seed_path)
    seeds = load_seed_list(seed_path, corpus)
    return expand_seed(corpus, seeds)


def _author_exclusions(config: PipelineConfig, corpus: Corpus, inputs: dict[str, str]) -> tuple[frozenset[str], dict[str, Any]]:
    stoplist: frozenset[str] = frozenset()
    if config.author_exclusion.stoplist_path:
        path = Path(config.author_exclusion.stoplist_path)
        if not path.is_file():
            raise ConfigError(f"author stoplist file not found: {path}")
        inputs[str(path)] = _file_digest(path)
        stoplist = frozenset(
            line.strip() for line in path.read_text(encoding="utf-8").splitlines()
            if line.strip() and not line.startswith("#")
        )
    auto: frozenset[str] = frozenset()
    if config.author_exclusion.auto:
        auto = frequent_author_keys(corpus, config.author_exclusion.max_df_share)
    log = {"stoplist": sorted(stoplist), "auto_excluded": sorted(auto)}
    return stoplist | auto, log


def _select_profile(config, corpus, directory, inputs, out_dir, threads):
    excluded, exclusion_log = _author_exclusions(config, corpus, inputs)
    configs = config.dimension_configs(excluded_authors=excluded)
    profile = select_all_dimensions(directory, corpus, configs, threads=threads)
    artifacts = [
        write_profile(profile, out_dir / "key_profile.json"),
        _write_json(out_dir / "author_exclusion.json", exclusion_log),
    ]
    return profile, artifacts


def cmd_ingest(args, config: PipelineConfig) -> int:
    out_dir = Path(config.output_dir)
    inputs: dict[str, str] = {}
    corpus, diagnostics = _ingest_corpus(config, inputs)
    artifacts = [
        write_corpus(corpus, out_dir / "corpus.jsonl"),
        _write_json(out_dir / "ingest_diagnostics.json", diagnostics.to_dict()),
    ]
    _write_manifest(out_dir, "ingest", config, inputs, artifacts, args.deterministic_manifest)
    print(f"[ingest] {len(corpus)} records, {len(diagnostics.malformed_rows)} malformed rows")
    return 0


def cmd_expand(args, config: PipelineConfig) -> int:
    out_dir = Path(config.output_dir)
    inputs: dict[str, str] = {}
    corpus, _ = _ingest_corpus(config, inputs)
    directory = _expand_directory(config, corpus, inputs)
    artifacts = [_write_json(out_dir / "directory.json", directory.to_dict())]
    _write_manifest(out_dir, "expand", config, inputs, artifacts, args.deterministic_manifest)
    print(
        f"[expand] {len(directory.seed_ids)} seeds + {len(directory.expansion_ids)} expansion, "
        f"{len(directory.unresolved_refs)} unresolved refs"
    )
    return 0


def cmd_select(args, config: PipelineConfig) -> int:
    out_dir = Path(config.output_dir)
    inputs: dict[str, str] = {}
    corpus, _ = _ingest_corpus(config, inputs)
    directory = _expand_directory(config, corpus, inputs)
    profile, artifacts = _select_profile(config, corpus, directory, inputs, out_dir, args.threads)
    _write_manifest(out_dir, "select", config, inputs, artifacts, args.deterministic_manifest)
    for dimension, kvs in profile.key_values.items():
        flag = " (exhausted)" if kvs.exhausted else ""
        print(f"[select] {dimension.value}: {len(kvs.selected)} keys, coverage {kvs.achieved_coverage:.3f}{flag}")
    return 0


def cmd_approximate(args, config: PipelineConfig) -> int:
    out_dir = Path(config.output_dir)
    inputs: dict[str, str] = {}
    corpus, _ = _ingest_corpus(config, inputs)
    profile_path = Path(args.profile) if args.profile else out_dir / "key_profile.json"
    if not profile_path.is_file():
        raise ConfigError(f"key profile not found: {profile_path} (run 'select' first)")
    inputs[str(profile_path)] = _file_digest(profile_path)
    profile = load_profile(profile_path)
    indices = build_indices(corpus)
    approx = approximate_specialty(corpus, indices, profile, config.m_required, config.year_range)
    artifacts = write_approximation(approx, out_dir)
    _write_manifest(out_dir, "approximate", config, inputs, artifacts, args.deterministic_manifest)
    print(f"[approximate] {len(approx.members)} members, {len(approx.near_misses())} near misses")
    return 0


def cmd_compare(args, config: PipelineConfig) -> int:
    out_dir = Path(config.output_dir)
    inputs: dict[str, str] = {}
    corpus, _ = _ingest_corpus(config, inputs)
    for path in (args.a, args.b):
        if not Path(path).is_file():
            raise ConfigError(f"approximation file not found: {path}")
        inputs[str(path)] = _file_digest(path)
    report = compare(load_approximation(args.a), load_approximation(args.b), corpus)
    artifacts = emit_report(report, out_dir)
    _write_manifest(out_dir, "compare", config, inputs, artifacts, args.deterministic_manifest)
    print(f"[compare] |A|={report.size_a} |B|={report.size_b} jaccard={report.jaccard:.6f}")
    return 0


def cmd_synth(args, config: PipelineConfig) -> int:
    out_dir = Path(config.output_dir)
    params = _synth_params(config.synth)
    corpus, labels = generate(params)
    seed_count = int(config.synth.get("seed_count", 30))
    artifacts = [
        write_corpus(corpus, out_dir / "corpus.jsonl"),
        write_labels(labels, out_dir / "labels.tsv"),
    ]
    for label in ("A", "B"):
        seeds = sorted(sample_seed_ids(labels, label, seed_count, params.rng_seed + ord(label)))
        path = out_dir / f"seeds_{label.lower()}.txt"
        path.write_text("".join(s + "\n" for s in seeds), encoding="utf-8")
        artifacts.append(path)
    _write_manifest(out_dir, "synth", config, {}, artifacts, args.deterministic_manifest)
    print(f"[synth] {len(corpus)} records ({sum(1 for l in labels.values() if l == 'A')} A, "
          f"{sum(1 for l in labels.values() if l == 'B')} B)")
    return 0


def cmd_pipeline(args, config: PipelineConfig) -> int:
    out_dir = Path(config.output_dir)
    inputs: dict[str, str] = {}
    corpus, diagnostics = _ingest_corpus(config, inputs)
    artifacts = [
        write_corpus(corpus, out_dir / "corpus.jsonl"),
        _write_json(out_dir / "ingest_diagnostics.json", diagnostics.to_dict()),
    ]
    directory = _expand_directory(config, corpus, inputs)
    artifacts.append(_write_json(out_dir / "directory.json", directory.to_dict()))
    profile, profile_artifacts = _select_profile(config, corpus, directory, inputs, out_dir, args.threads)
    artifacts.extend(profile_artifacts)
    indices = build_indices(corpus)
    approx = approximate_specialty(corpus, indices, profile, config.m_required, config.year_range)
    artifacts.extend(write_approximation(approx, out_dir))
    _write_manifest(out_dir, "pipeline", config, inputs, artifacts, args.deterministic_manifest)
    print(f"[pipeline] {len(corpus)} records -> {len(approx.members)} members")
    return 0


def _synth_params(overrides: dict[str, Any]) -> SynthParams:
    from dataclasses import replace

    params = SynthParams()
    known = {"rng_seed", "n_pubs_a", "n_pubs_b", "background_size", "seed_count"}
    unknown = set(overrides) - known
    if unknown:
        raise ConfigError(f"unknown synth keys: {sorted(unknown)}")
    if "rng_seed" in overrides:
        params = replace(params, rng_seed=int(overrides["rng_seed"]))
    if "n_pubs_a" in overrides:
        params = replace(params, specialty_a=replace(params.specialty_a, n_pubs=int(overrides["n_pubs_a"])))
    if "n_pubs_b" in overrides:
        params = replace(params, specialty_b=replace(params.specialty_b, n_pubs=int(overrides["n_pubs_b"])))
    if "background_size" in overrides:
        params = replace(params, background_size=int(overrides["background_size"]))
    return params


_COMMANDS = {
    "ingest": cmd_ingest,
    "expand": cmd_expand,
    "select": cmd_select,
    "approximate": cmd_approximate,
    "compare": cmd_compare,
    "synth": cmd_synth,
    "pipeline": cmd_pipeline,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="specapprox",
        description="Approximate a research specialty from seed publications via four metadata dimensions",
    )
    parser.add_argument("--version", action="version", version=f"specapprox {__version__}")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", type=Path, help="JSON config file")
        cmd.add_argument("--out", type=Path, help="output directory (overrides config)")
        cmd.add_argument("--threads", type=int, default=1, help="worker threads for read-only phases")
        cmd.add_argument(
            "--deterministic-manifest",
            action="store_true",
            help="omit timestamps so identical inputs give byte-identical artifacts",
        )
        if name == "approximate":
            cmd.add_argument("--profile", type=Path, help="key profile JSON (default: <out>/key_profile.json)")
        if name == "compare":
            cmd.add_argument("--a", type=Path, required=True, help="approximation state JSON for set A")
            cmd.add_argument("--b", type=Path, required=True, help="approximation state JSON for set B")
    return parser


def _load_config(args) -> PipelineConfig:
    config = PipelineConfig.from_file(args.config) if args.config else PipelineConfig()
    if args.out:
        config.output_dir = str(args.out)
    if args.threads < 1:
        raise ConfigError("--threads must be >= 1")
    return config


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        return _COMMANDS[args.subcommand](args, config)
    except SpecApproxError as exc:
        report = {"error": exc.code, "message": str(exc)}
        print(json.dumps(report, sort_keys=True), file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # pragma: no cover - unexpected failure path
        report = {"error": "INTERNAL_ERROR", "message": f"{type(exc).__name__}: {exc}"}
        print(json.dumps(report, sort_keys=True), file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
