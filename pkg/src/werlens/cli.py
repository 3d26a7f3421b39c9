"""Command-line pipeline: synth -> features -> wer -> mine -> shapley -> compare.

Every stage writes UTF-8, comma-separated, LF-terminated CSV with floats at
6 decimal places, plus a run-manifest JSON echoing its configuration.  Output
files carry a header comment with the tool version, a configuration hash, and
the mining support threshold, and are written atomically, so identical inputs
and configuration always produce byte-identical results.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path

from . import __version__
from .analysis import (
    DatasetStats,
    compare_models,
    divergence,
    gain_histogram,
    make_delta_fn,
    pooled_wer,
    shapley_global,
    shapley_local,
    summarize,
)
from .charts import bar_chart_svg, histogram_svg
from .corpus import ManifestError, Record, WavError, decode_wav, load_manifest
from .features import (
    CATEGORICAL_ATTRIBUTES,
    DEFAULT_FRAME_MS,
    DEFAULT_HOP_MS,
    DEFAULT_MIN_PAUSE_MS,
    DEFAULT_OFFSET_DB,
    NUMERIC_ATTRIBUTES,
    FeatureVector,
    extract_features,
)
from .itemizer import BinningSpec, apply_bins, encode_items, fit_bins, parse_items
from .metrics import UndefinedWerError, normalize, wer
from .miner import DEFAULT_MIN_SUPPORT, Subgroup, mine
from .output import atomic_write_text, config_hash, format_float, meta_lines, read_csv, write_csv
from .synth import generate_corpus

logger = logging.getLogger("werlens")

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_EMPTY = 2

TOP_K = 5

FEATURE_COLUMNS = ["id", "speaker", *NUMERIC_ATTRIBUTES]
WER_COLUMNS = ["id", "model", "wer_pct", "n_ref", "sub", "del", "ins"]
SUBGROUP_COLUMNS = ["items", "support", "n", "wer_mean", "wer_var"]
DIVERGENCE_COLUMNS = ["items", "support", "n", "wer_mean", "delta", "t"]
SHAPLEY_LOCAL_COLUMNS = ["items", "item", "phi"]
SHAPLEY_GLOBAL_COLUMNS = ["item", "gsv", "n_itemsets"]
COMPARISON_COLUMNS = ["items", "f_m1", "f_m2", "gap", "t"]
HISTOGRAM_COLUMNS = ["bin_lo", "bin_hi", "count", "sign"]
SUMMARY_COLUMNS = [
    "model", "n_records", "wer_mean", "wer_pooled",
    "n_subgroups", "delta_min", "delta_max", "delta_avg", "delta_std",
]

_MODEL_NAME_RE = re.compile(r"^[A-Za-z0-9._-]+$")


class CliError(Exception):
    """User-facing error; printed to stderr with exit status 1."""


def _check_model_name(model: str) -> str:
    if not _MODEL_NAME_RE.match(model):
        raise CliError(f"model name {model!r} must match [A-Za-z0-9._-]+")
    return model


def _round6(fv: FeatureVector) -> FeatureVector:
    """Round to the CSV precision so fitted cuts match what downstream reads."""
    return replace(
        fv,
        **{a: round(float(getattr(fv, a)), 6) for a in NUMERIC_ATTRIBUTES if a not in ("n_pauses", "n_words")},
    )


def _write_run_manifest(out_dir: Path, command: str, config: dict, cfg_hash: str) -> None:
    payload = {
        "command": command,
        "version": __version__,
        "config_hash": cfg_hash,
        "config": config,
    }
    atomic_write_text(out_dir / f"run_{command}.json", json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# CSV readers for pipeline hand-off files


def read_features_csv(path: Path) -> dict[str, FeatureVector]:
    header, rows = read_csv(path)
    if header != FEATURE_COLUMNS:
        raise CliError(f"{path}: unexpected feature CSV columns {header}")
    out: dict[str, FeatureVector] = {}
    for row in rows:
        values = dict(zip(header, row))
        out[values["id"]] = FeatureVector(
            snr=float(values["snr"]),
            spectral_flatness=float(values["spectral_flatness"]),
            tot_dur=float(values["tot_dur"]),
            trim_dur=float(values["trim_dur"]),
            n_pauses=int(values["n_pauses"]),
            n_words=int(values["n_words"]),
            speak_rate=float(values["speak_rate"]),
            speak_rate_trim=float(values["speak_rate_trim"]),
            speaker=values["speaker"],
        )
    return out


def read_wer_csv(path: Path, model: str) -> tuple[dict[str, float], dict[str, tuple[int, int]]]:
    """Per-record wer_pct plus (edits, n_ref) pairs for pooled WER."""
    header, rows = read_csv(path)
    if header != WER_COLUMNS:
        raise CliError(f"{path}: unexpected WER CSV columns {header}")
    wer_map: dict[str, float] = {}
    edits: dict[str, tuple[int, int]] = {}
    for row in rows:
        values = dict(zip(header, row))
        if values["model"] != model:
            continue
        rid = values["id"]
        wer_map[rid] = float(values["wer_pct"])
        total = int(values["sub"]) + int(values["del"]) + int(values["ins"])
        edits[rid] = (total, int(values["n_ref"]))
    if not wer_map:
        raise CliError(f"{path}: no rows for model {model!r}")
    return wer_map, edits


def read_subgroups_csv(path: Path) -> tuple[list[Subgroup], dict[str, str]]:
    with open(path, encoding="utf-8") as fh:
        comment_meta = dict(
            line[1:].strip().split("=", 1)
            for line in fh
            if line.startswith("#") and "=" in line
        )
    header, rows = read_csv(path)
    if header != SUBGROUP_COLUMNS:
        raise CliError(f"{path}: unexpected subgroup CSV columns {header}")
    subgroups = [
        Subgroup(
            items=parse_items(row[0]),
            support=float(row[1]),
            n=int(row[2]),
            wer_mean=float(row[3]),
            wer_var=float(row[4]),
        )
        for row in rows
    ]
    return subgroups, comment_meta


def _load_transactions(
    out_dir: Path, model: str, features_path: Path | None, wer_path: Path | None, spec_path: Path | None
):
    features_path = features_path or out_dir / "features.csv"
    wer_path = wer_path or out_dir / f"wer_{model}.csv"
    spec_path = spec_path or out_dir / "binning_spec.json"
    for p, stage in ((features_path, "features"), (wer_path, "wer"), (spec_path, "features")):
        if not Path(p).exists():
            raise CliError(f"missing input {p} (run the '{stage}' stage first)")
    features = read_features_csv(Path(features_path))
    wer_map, edits = read_wer_csv(Path(wer_path), model)
    spec = BinningSpec.from_json(Path(spec_path).read_text(encoding="utf-8"))
    transactions = apply_bins(features, spec, wer_map)
    pooled = pooled_wer([edits[tx.record_id] for tx in transactions])
    dataset = DatasetStats.from_transactions(transactions, wer_pooled=pooled)
    return transactions, dataset


# ---------------------------------------------------------------------------
# Subcommands


def cmd_features(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records = load_manifest(args.manifest)
    if not records:
        raise CliError(f"{args.manifest}: manifest has no records")

    config = {
        "command": "features",
        "manifest": str(args.manifest),
        "frame_ms": args.frame_ms,
        "hop_ms": args.hop_ms,
        "offset_db": args.offset_db,
        "pause_ms": args.pause_ms,
        "bins": args.bins,
        "flatness_weighting": args.flatness_weighting,
        "out_dir": str(args.out_dir),
    }
    cfg_hash = config_hash(config)
    manifest_dir = Path(args.manifest).parent

    def compute(record: Record) -> FeatureVector:
        if record.features is not None:
            return _round6(FeatureVector.from_mapping(record.speaker, record.features))
        audio_path = Path(record.audio_path)
        if not audio_path.is_absolute():
            audio_path = manifest_dir / audio_path
        audio = decode_wav(audio_path)
        return _round6(
            extract_features(
                record.reference,
                record.speaker,
                audio,
                frame_ms=args.frame_ms,
                hop_ms=args.hop_ms,
                offset_db=args.offset_db,
                min_pause_ms=args.pause_ms,
                flatness_weighting=args.flatness_weighting,
            )
        )

    results: dict[str, FeatureVector] = {}
    failures: list[tuple[str, str]] = []
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            futures = [(record.id, pool.submit(compute, record)) for record in records]
        for rid, future in futures:
            try:
                results[rid] = future.result()
            except Exception as exc:  # noqa: BLE001 - per-record failures are collected
                failures.append((rid, str(exc)))
    else:
        for record in records:
            try:
                results[record.id] = compute(record)
            except Exception as exc:  # noqa: BLE001
                failures.append((record.id, str(exc)))

    failures.sort()
    for rid, message in failures:
        logger.warning("record %s failed: %s", rid, message)
    if len(failures) > 0.1 * len(records):
        raise CliError(
            f"{len(failures)}/{len(records)} records failed feature extraction (over the 10% limit)"
        )

    rows = []
    for rid in sorted(results):
        fv = results[rid]
        rows.append(
            [
                rid,
                fv.speaker,
                format_float(fv.snr),
                format_float(fv.spectral_flatness),
                format_float(fv.tot_dur),
                format_float(fv.trim_dur),
                str(fv.n_pauses),
                str(fv.n_words),
                format_float(fv.speak_rate),
                format_float(fv.speak_rate_trim),
            ]
        )
    meta = meta_lines(__version__, cfg_hash, None)
    write_csv(out_dir / "features.csv", FEATURE_COLUMNS, rows, meta)

    ordered_ids = sorted(results)
    numeric_columns = {
        attr: [getattr(results[rid], attr) for rid in ordered_ids] for attr in NUMERIC_ATTRIBUTES
    }
    spec = fit_bins(numeric_columns, CATEGORICAL_ATTRIBUTES, n_bins=args.bins)
    atomic_write_text(out_dir / "binning_spec.json", spec.to_json())
    _write_run_manifest(out_dir, "features", config, cfg_hash)
    print(f"features: {len(rows)} records -> {out_dir / 'features.csv'} ({len(failures)} failed)")
    return EXIT_OK


def cmd_wer(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    models = [_check_model_name(m) for m in args.model]
    records = load_manifest(args.manifest)

    config = {
        "command": "wer",
        "manifest": str(args.manifest),
        "models": models,
        "out_dir": str(args.out_dir),
    }
    cfg_hash = config_hash(config)
    meta = meta_lines(__version__, cfg_hash, None)

    for model in models:
        with_hypothesis = [r for r in records if model in r.hypotheses]
        if not with_hypothesis:
            raise CliError(f"model {model!r} absent from manifest hypotheses")
        missing = len(records) - len(with_hypothesis)
        if missing:
            logger.warning("%d record(s) lack a %r hypothesis, excluded", missing, model)

        rows = []
        empty_refs = 0
        for record in sorted(with_hypothesis, key=lambda r: r.id):
            try:
                breakdown = wer(normalize(record.reference), normalize(record.hypotheses[model]))
            except UndefinedWerError:
                empty_refs += 1
                logger.warning("record %s: empty reference, excluded from WER", record.id)
                continue
            rows.append(
                [
                    record.id,
                    model,
                    format_float(breakdown.wer_pct),
                    str(breakdown.n_ref),
                    str(breakdown.substitutions),
                    str(breakdown.deletions),
                    str(breakdown.insertions),
                ]
            )
        if not rows:
            raise CliError(f"model {model!r}: every record was excluded")
        write_csv(out_dir / f"wer_{model}.csv", WER_COLUMNS, rows, meta)
        print(f"wer: model {model}: {len(rows)} records -> {out_dir / f'wer_{model}.csv'}")

    _write_run_manifest(out_dir, "wer", config, cfg_hash)
    return EXIT_OK


def _subgroup_row(sg: Subgroup) -> list[str]:
    return [
        encode_items(sg.items),
        format_float(sg.support),
        str(sg.n),
        format_float(sg.wer_mean),
        format_float(sg.wer_var),
    ]


def cmd_mine(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model = _check_model_name(args.model)
    transactions, dataset = _load_transactions(
        out_dir, model,
        Path(args.features) if args.features else None,
        Path(args.wer) if args.wer else None,
        Path(args.spec) if args.spec else None,
    )

    config = {
        "command": "mine",
        "model": model,
        "min_support": args.min_support,
        "max_len": args.max_len,
        "t_against": args.t_against,
        "out_dir": str(args.out_dir),
    }
    cfg_hash = config_hash(config)
    subgroups = mine(transactions, min_support=args.min_support, max_len=args.max_len)
    _write_run_manifest(out_dir, "mine", config, cfg_hash)
    if not subgroups:
        print(
            f"mine: no subgroups at min_support={args.min_support} "
            f"over {len(transactions)} records; lower the threshold"
        )
        return EXIT_EMPTY

    meta = meta_lines(__version__, cfg_hash, args.min_support)
    write_csv(
        out_dir / f"subgroups_{model}.csv",
        SUBGROUP_COLUMNS,
        [_subgroup_row(sg) for sg in subgroups],
        meta,
    )

    rows = [divergence(sg, dataset, against=args.t_against) for sg in subgroups]
    by_magnitude = sorted(rows, key=lambda r: (-abs(r.delta), r.subgroup.sort_key))
    div_meta = meta + [
        f"t_against={args.t_against}",
        f"bonferroni_m={len(rows)} (informational only; raw t reported)",
    ]
    write_csv(
        out_dir / f"divergence_{model}.csv",
        DIVERGENCE_COLUMNS,
        [
            [
                encode_items(r.subgroup.items),
                format_float(r.subgroup.support),
                str(r.subgroup.n),
                format_float(r.subgroup.wer_mean),
                format_float(r.delta),
                format_float(r.t),
            ]
            for r in by_magnitude
        ],
        div_meta,
    )

    summary = summarize(rows, dataset)
    write_csv(
        out_dir / f"summary_{model}.csv",
        SUMMARY_COLUMNS,
        [
            [
                model,
                str(dataset.n),
                format_float(summary.overall_wer_mean),
                format_float(summary.overall_wer_pooled)
                if summary.overall_wer_pooled is not None
                else "n/a",
                str(summary.n_subgroups),
                format_float(summary.delta_min),
                format_float(summary.delta_max),
                format_float(summary.delta_avg),
                format_float(summary.delta_std),
            ]
        ],
        meta,
    )

    print(
        f"mine: model {model}: {len(subgroups)} subgroups over {dataset.n} records "
        f"(min_support={args.min_support}); wer_mean={dataset.wer_mean:.3f} "
        f"pooled={dataset.wer_pooled:.3f}"
    )
    worst = sorted(rows, key=lambda r: (-r.delta, r.subgroup.sort_key))[:TOP_K]
    best = sorted(rows, key=lambda r: (r.delta, r.subgroup.sort_key))[:TOP_K]
    print(f"top S- (worst {TOP_K}):")
    for r in worst:
        print(
            f"  delta={r.delta:+8.3f} t={r.t:6.2f} n={r.subgroup.n:4d} "
            f"{{{encode_items(r.subgroup.items)}}}"
        )
    print(f"top S+ (best {TOP_K}):")
    for r in best:
        print(
            f"  delta={r.delta:+8.3f} t={r.t:6.2f} n={r.subgroup.n:4d} "
            f"{{{encode_items(r.subgroup.items)}}}"
        )
    return EXIT_OK


def cmd_shapley(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model = _check_model_name(args.model)
    subgroups_path = Path(args.subgroups) if args.subgroups else out_dir / f"subgroups_{model}.csv"
    if not subgroups_path.exists():
        raise CliError(f"missing input {subgroups_path} (run the 'mine' stage first)")
    subgroups, mine_meta = read_subgroups_csv(subgroups_path)
    if not subgroups:
        print("shapley: the subgroup table is empty; nothing to attribute")
        return EXIT_EMPTY
    transactions, dataset = _load_transactions(
        out_dir, model,
        Path(args.features) if args.features else None,
        Path(args.wer) if args.wer else None,
        Path(args.spec) if args.spec else None,
    )
    delta_fn = make_delta_fn(transactions, dataset)

    min_support = float(mine_meta["min_support"]) if "min_support" in mine_meta else None
    config = {
        "command": "shapley",
        "model": model,
        "subgroups": str(subgroups_path),
        "min_support": min_support,
        "out_dir": str(args.out_dir),
    }
    cfg_hash = config_hash(config)
    meta = meta_lines(__version__, cfg_hash, min_support)

    local_rows = []
    max_residual = 0.0
    for sg in subgroups:
        rows = shapley_local(sg.items, delta_fn)
        total = sum(r.value for r in rows)
        delta = delta_fn(sg.items)
        residual = abs(total - delta)
        max_residual = max(max_residual, residual)
        status = "ok" if residual <= 1e-9 else "FAIL"
        print(
            f"shapley: {{{encode_items(sg.items)}}} sum_phi={total:+.6f} "
            f"delta={delta:+.6f} residual={residual:.2e} {status}"
        )
        for r in rows:
            local_rows.append([encode_items(sg.items), str(r.item), format_float(r.value)])
    write_csv(out_dir / f"shapley_local_{model}.csv", SHAPLEY_LOCAL_COLUMNS, local_rows, meta)

    global_rows = shapley_global(subgroups, delta_fn)
    write_csv(
        out_dir / f"shapley_global_{model}.csv",
        SHAPLEY_GLOBAL_COLUMNS,
        [[str(r.item), format_float(r.value), str(r.n_itemsets)] for r in global_rows],
        meta + ["gsv = mean local Shapley value over the frequent itemsets containing the item"],
    )
    svg = bar_chart_svg(
        [(str(r.item), r.value) for r in global_rows],
        title=f"Per-item WER divergence attribution ({model})",
        comments=meta,
    )
    atomic_write_text(out_dir / f"shapley_global_{model}.svg", svg)
    _write_run_manifest(out_dir, "shapley", config, cfg_hash)
    print(
        f"shapley: model {model}: {len(subgroups)} itemsets, {len(global_rows)} items, "
        f"max efficiency residual {max_residual:.2e}"
    )
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_a = _check_model_name(args.model_a)
    model_b = _check_model_name(args.model_b)
    tx_a, dataset_a = _load_transactions(
        out_dir, model_a,
        Path(args.features) if args.features else None,
        Path(args.wer_a) if args.wer_a else None,
        Path(args.spec) if args.spec else None,
    )
    tx_b, dataset_b = _load_transactions(
        out_dir, model_b,
        Path(args.features) if args.features else None,
        Path(args.wer_b) if args.wer_b else None,
        Path(args.spec) if args.spec else None,
    )

    config = {
        "command": "compare",
        "model_a": model_a,
        "model_b": model_b,
        "min_support": args.min_support,
        "max_len": args.max_len,
        "n_bins": args.n_bins,
        "out_dir": str(args.out_dir),
    }
    cfg_hash = config_hash(config)
    subgroups = mine(tx_a, min_support=args.min_support, max_len=args.max_len)
    _write_run_manifest(out_dir, "compare", config, cfg_hash)
    if not subgroups:
        print(f"compare: no subgroups at min_support={args.min_support}; lower the threshold")
        return EXIT_EMPTY

    rows = compare_models(tx_a, tx_b, subgroups)
    ordered = sorted(rows, key=lambda r: (r.gap, tuple(i.sort_key for i in r.items)))
    meta = meta_lines(__version__, cfg_hash, args.min_support) + [
        f"model_1={model_a}",
        f"model_2={model_b}",
        "gap=f_m2-f_m1 (negative means model 2 is better)",
    ]
    pair = f"{model_a}_vs_{model_b}"
    write_csv(
        out_dir / f"comparison_{pair}.csv",
        COMPARISON_COLUMNS,
        [
            [
                encode_items(r.items),
                format_float(r.f_m1),
                format_float(r.f_m2),
                format_float(r.gap),
                format_float(r.t),
            ]
            for r in ordered
        ],
        meta,
    )

    bins = gain_histogram(rows, n_bins=args.n_bins)
    write_csv(
        out_dir / f"gain_histogram_{pair}.csv",
        HISTOGRAM_COLUMNS,
        [
            [format_float(lo), format_float(hi), str(count), sign]
            for lo, hi, count, sign in bins
        ],
        meta,
    )
    svg = histogram_svg(
        bins,
        title=f"Per-subgroup WER gap: {model_b} minus {model_a}",
        comments=meta,
    )
    atomic_write_text(out_dir / f"gain_histogram_{pair}.svg", svg)

    best, worst = ordered[0], ordered[-1]
    print(
        f"compare: {model_a} (mean {dataset_a.wer_mean:.3f}) vs {model_b} "
        f"(mean {dataset_b.wer_mean:.3f}) over {len(subgroups)} subgroups"
    )
    print(f"  biggest gain : gap={best.gap:+8.3f} {{{encode_items(best.items)}}}")
    print(f"  biggest loss : gap={worst.gap:+8.3f} {{{encode_items(worst.items)}}}")
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    out_dir = Path(args.out_dir)
    config = {
        "command": "synth",
        "n": args.n,
        "seed": args.seed,
        "with_audio": args.with_audio,
        "planted_speaker": args.planted_speaker,
        "gain_speaker": args.gain_speaker,
        "sample_rate": args.sample_rate,
        "out_dir": str(args.out_dir),
    }
    cfg_hash = config_hash(config)
    manifest = generate_corpus(
        out_dir,
        n_records=args.n,
        seed=args.seed,
        with_audio=args.with_audio,
        planted_speaker=args.planted_speaker,
        gain_speaker=args.gain_speaker,
        sample_rate=args.sample_rate,
    )
    _write_run_manifest(out_dir, "synth", config, cfg_hash)
    print(f"synth: {args.n} records (seed {args.seed}) -> {manifest}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="werlens",
        description="Discover and explain WER disparities across metadata subgroups.",
    )
    parser.add_argument("--version", action="version", version=f"werlens {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("features", help="extract per-record features and fit bins")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out-dir", default="out")
    p.add_argument("--frame-ms", type=float, default=DEFAULT_FRAME_MS)
    p.add_argument("--hop-ms", type=float, default=DEFAULT_HOP_MS)
    p.add_argument("--offset-db", type=float, default=DEFAULT_OFFSET_DB)
    p.add_argument("--pause-ms", type=float, default=DEFAULT_MIN_PAUSE_MS)
    p.add_argument("--bins", type=int, default=3)
    p.add_argument("--flatness-weighting", choices=("mean", "energy"), default="mean")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("wer", help="score per-record WER for one or more models")
    p.add_argument("--manifest", required=True)
    p.add_argument("--model", action="append", required=True)
    p.add_argument("--out-dir", default="out")
    p.set_defaults(func=cmd_wer)

    p = sub.add_parser("mine", help="mine frequent subgroups and their divergences")
    p.add_argument("--model", required=True)
    p.add_argument("--out-dir", default="out")
    p.add_argument("--min-support", type=float, default=DEFAULT_MIN_SUPPORT)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--t-against", choices=("population", "complement"), default="population")
    p.add_argument("--features", default=None)
    p.add_argument("--wer", default=None)
    p.add_argument("--spec", default=None)
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("shapley", help="attribute subgroup divergence to items")
    p.add_argument("--model", required=True)
    p.add_argument("--out-dir", default="out")
    p.add_argument("--subgroups", default=None)
    p.add_argument("--features", default=None)
    p.add_argument("--wer", default=None)
    p.add_argument("--spec", default=None)
    p.set_defaults(func=cmd_shapley)

    p = sub.add_parser("compare", help="per-subgroup WER gap between two models")
    p.add_argument("--model-a", required=True)
    p.add_argument("--model-b", required=True)
    p.add_argument("--out-dir", default="out")
    p.add_argument("--min-support", type=float, default=DEFAULT_MIN_SUPPORT)
    p.add_argument("--max-len", type=int, default=None)
    p.add_argument("--n-bins", type=int, default=20)
    p.add_argument("--features", default=None)
    p.add_argument("--wer-a", default=None)
    p.add_argument("--wer-b", default=None)
    p.add_argument("--spec", default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("synth", help="generate a seeded synthetic corpus")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--with-audio", action="store_true")
    p.add_argument("--planted-speaker", default=None)
    p.add_argument("--gain-speaker", default=None)
    p.add_argument("--sample-rate", type=int, default=8000)
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ManifestError, WavError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
