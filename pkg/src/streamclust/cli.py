"""Command-line front end for clustering runs, evaluation, DI sweeps,
speed benchmarks, and duplicate-question dataset construction.

Every output artifact starts with an echo of the run manifest (one
``manifest.<key>: <value>`` line per setting), so a run can be reproduced
from any of its outputs. Keys ending in ``_seconds`` or ``_ratio`` carry
wall-clock measurements and are the only lines expected to differ between
reruns of the same manifest.
"""

import time
from pathlib import Path

import click

from .datasets import (
    JSON_LINES,
    TAB_SEPARATED,
    LabeledDataset,
    build_so_dataset,
    load_dataset,
    save_dataset,
    shuffle,
)
from .engine import DEFAULT_DELETE_INTERVAL, EngineConfig, StreamEngine
from .evaluation import ARITHMETIC, GEOMETRIC, compare_speed, nmi, run_trials
from .features import FeatureKind
from .synthetic import separable_dataset

_FEATURES = click.Choice([k.value for k in FeatureKind])
_NORMS = click.Choice([GEOMETRIC, ARITHMETIC])


def _manifest(subcommand: str, **settings) -> list[str]:
    lines = [f"manifest.subcommand: {subcommand}"]
    lines.extend(f"manifest.{k}: {v}" for k, v in settings.items())
    return lines


def _write_lines(path: str | Path, lines) -> None:
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def _load(path: str) -> LabeledDataset:
    fmt = JSON_LINES if Path(path).suffix in (".jsonl", ".json") else TAB_SEPARATED
    return load_dataset(path, fmt)


def _fail(message: str) -> None:
    raise click.ClickException(message)


@click.group()
@click.version_option(package_name="streamclust")
def main() -> None:
    """Streaming short-text clustering toolkit."""


@main.command("cluster")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--feature", default=FeatureKind.BITERM.value, type=_FEATURES, show_default=True)
@click.option("--delete-interval", default=DEFAULT_DELETE_INTERVAL, type=int, show_default=True)
@click.option("--seed", default=None, type=int, help="Shuffle seed; omit to stream in file order.")
@click.option("--out-assignments", required=True, type=click.Path(dir_okay=False))
@click.option("--out-summary", required=True, type=click.Path(dir_okay=False))
def cmd_cluster(input_path, feature, delete_interval, seed, out_assignments, out_summary):
    """Cluster one dataset and write per-text assignments plus a summary."""
    try:
        ds = _load(input_path)
        cfg = EngineConfig(FeatureKind(feature), delete_interval)
    except ValueError as exc:
        _fail(str(exc))
    if seed is not None:
        ds = shuffle(ds, seed)
    engine = StreamEngine(cfg)
    t0 = time.perf_counter()
    records = engine.run_stream(ds.texts())
    elapsed = time.perf_counter() - t0

    manifest = _manifest(
        "cluster",
        input=input_path,
        feature=feature,
        delete_interval=delete_interval,
        seed=seed if seed is not None else "none",
        out_assignments=out_assignments,
        out_summary=out_summary,
    )
    rows = [
        f"{item.doc_id}\t{rec.handle}\t{'true' if rec.created_new else 'false'}"
        for item, rec in zip(ds.items, records)
    ]
    _write_lines(out_assignments, [f"# {m}" for m in manifest] + rows)
    _write_lines(
        out_summary,
        manifest
        + [
            f"texts: {len(records)}",
            f"final_clusters: {engine.store.live_count}",
            f"clusters_deleted: {engine.store.clusters_deleted}",
            f"runtime_seconds: {elapsed:.6f}",
        ],
    )
    click.echo(f"clustered {len(records)} texts into {engine.store.live_count} clusters")


@main.command("eval")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--feature", default=FeatureKind.BITERM.value, type=_FEATURES, show_default=True)
@click.option("--delete-interval", default=DEFAULT_DELETE_INTERVAL, type=int, show_default=True)
@click.option("--shuffles", default=20, type=int, show_default=True)
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--nmi-norm", default=GEOMETRIC, type=_NORMS, show_default=True)
@click.option("--out-report", required=True, type=click.Path(dir_okay=False))
def cmd_eval(input_path, feature, delete_interval, shuffles, seed, nmi_norm, out_report):
    """Run repeated shuffled trials and report average NMI and runtime."""
    try:
        ds = _load(input_path)
        cfg = EngineConfig(FeatureKind(feature), delete_interval)
        report = run_trials(ds, cfg, shuffles, seed, nmi_norm)
    except ValueError as exc:
        _fail(str(exc))
    lines = _manifest(
        "eval",
        input=input_path,
        feature=feature,
        delete_interval=delete_interval,
        shuffles=shuffles,
        seed=seed,
        nmi_norm=nmi_norm,
        out_report=out_report,
    )
    lines.append(f"nmi_mean: {report.nmi_mean:.6f}")
    lines.append(f"runtime_mean_seconds: {report.runtime_mean:.6f}")
    for i, trial in enumerate(report.per_trial):
        lines.append(f"trial.{i}.nmi: {trial.nmi:.6f}")
        lines.append(f"trial.{i}.runtime_seconds: {trial.runtime_seconds:.6f}")
        lines.append(f"trial.{i}.final_clusters: {trial.final_cluster_count}")
    _write_lines(out_report, lines)
    click.echo(f"nmi_mean: {report.nmi_mean:.6f}")
    click.echo(f"runtime_mean_seconds: {report.runtime_mean:.6f}")


@main.command("sweep-di")
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--feature", default=FeatureKind.BITERM.value, type=_FEATURES, show_default=True)
@click.option("--di-values", required=True, help="Comma-separated delete-intervals, e.g. 100,200,300.")
@click.option("--shuffles", default=20, type=int, show_default=True)
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--out-report", required=True, type=click.Path(dir_okay=False))
def cmd_sweep_di(input_path, feature, di_values, shuffles, seed, out_report):
    """Evaluate one delete-interval per value and tabulate (DI, mean NMI)."""
    try:
        values = [int(v) for v in di_values.split(",") if v.strip()]
    except ValueError:
        _fail(f"--di-values must be comma-separated integers, got {di_values!r}")
    if not values:
        _fail("--di-values must name at least one delete-interval")
    if any(v < 1 for v in values):
        _fail("delete-intervals must be positive")
    if len(set(values)) != len(values):
        _fail("duplicate delete-intervals are not allowed")
    try:
        ds = _load(input_path)
    except ValueError as exc:
        _fail(str(exc))
    manifest = _manifest(
        "sweep-di",
        input=input_path,
        feature=feature,
        di_values=",".join(str(v) for v in values),
        shuffles=shuffles,
        seed=seed,
        out_report=out_report,
    )
    rows = []
    for di in values:
        report = run_trials(ds, EngineConfig(FeatureKind(feature), di), shuffles, seed)
        rows.append(f"{di}\t{report.nmi_mean:.6f}")
        click.echo(rows[-1])
    _write_lines(out_report, [f"# {m}" for m in manifest] + ["di\tnmi_mean"] + rows)


@main.command("build-sot")
@click.option("--posts", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--links", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--pairs", default=400_000, type=int, show_default=True,
              help="Duplicate pairs to sample (all pairs if fewer exist).")
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--duplicate-link-type", default=3, type=int, show_default=True)
@click.option("--out-dataset", required=True, type=click.Path(dir_okay=False))
def cmd_build_sot(posts, links, pairs, seed, duplicate_link_type, out_dataset):
    """Build a duplicate-question dataset from StackExchange dump files."""
    try:
        ds = build_so_dataset(posts, links, pairs, seed, duplicate_link_type)
    except ValueError as exc:
        _fail(str(exc))
    save_dataset(ds, out_dataset)
    n_clusters = len(set(ds.labels()))
    words = sum(len(t.split()) for t in ds.texts())
    click.echo(f"clusters: {n_clusters}")
    click.echo(f"texts: {len(ds)}")
    click.echo(f"avg_words_per_text: {words / len(ds):.2f}")


@main.command("bench")
@click.option("--input", "input_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Labeled dataset to stream; omit to use the synthetic generator.")
@click.option("--feature", default=FeatureKind.BITERM.value, type=_FEATURES, show_default=True)
@click.option("--delete-interval", default=DEFAULT_DELETE_INTERVAL, type=int, show_default=True)
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--clusters", default=5000, type=int, show_default=True)
@click.option("--texts-per-cluster", default=20, type=int, show_default=True)
@click.option("--vocab-size", default=12, type=int, show_default=True)
@click.option("--words-per-text", default=4, type=int, show_default=True)
@click.option("--out-report", required=True, type=click.Path(dir_okay=False))
def cmd_bench(input_path, feature, delete_interval, seed, clusters,
              texts_per_cluster, vocab_size, words_per_text, out_report):
    """Time the indexed engine against the exhaustive-scan engine.

    Both engines see the identical shuffled stream and must produce
    identical assignments; a mismatch aborts with a nonzero exit.
    """
    try:
        if input_path is not None:
            ds = _load(input_path)
            source = input_path
        else:
            ds = separable_dataset(clusters, texts_per_cluster, words_per_text,
                                   vocab_size, seed)
            source = (f"synthetic:{clusters}x{texts_per_cluster}"
                      f",vocab={vocab_size},words={words_per_text}")
        cfg = EngineConfig(FeatureKind(feature), delete_interval)
        indexed_s, exhaustive_s = compare_speed(ds, cfg, seed)
    except (ValueError, RuntimeError) as exc:
        _fail(str(exc))
    ratio = exhaustive_s / indexed_s if indexed_s > 0 else float("inf")
    lines = _manifest(
        "bench",
        input=source,
        feature=feature,
        delete_interval=delete_interval,
        seed=seed,
        out_report=out_report,
    )
    lines.append(f"texts: {len(ds)}")
    lines.append(f"indexed_seconds: {indexed_s:.6f}")
    lines.append(f"exhaustive_seconds: {exhaustive_s:.6f}")
    lines.append(f"speedup_ratio: {ratio:.3f}")
    _write_lines(out_report, lines)
    click.echo(f"indexed_seconds: {indexed_s:.6f}")
    click.echo(f"exhaustive_seconds: {exhaustive_s:.6f}")
    click.echo(f"speedup: {ratio:.3f}x")


if __name__ == "__main__":
    main()
