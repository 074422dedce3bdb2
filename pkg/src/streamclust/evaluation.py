"""Clustering quality scoring and the repeated-shuffle trial harness.

NMI is computed from the contingency table of the two label sequences via
entropies (natural log; the normalization cancels the base). Trials
shuffle the dataset with per-trial child seeds, run a fresh engine per
trial, and time only the engine loop.
"""

import math
import time
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .datasets import LabeledDataset, shuffle
from .engine import EngineConfig, ExhaustiveEngine, StreamEngine

GEOMETRIC = "geometric"
ARITHMETIC = "arithmetic"


def _entropy(counts, n: int) -> float:
    # Sorted accumulation keeps the sum order-independent, so identical
    # count multisets produce bitwise-identical entropies.
    total = 0.0
    for c in sorted(counts):
        p = c / n
        total -= p * math.log(p)
    return total


def nmi(
    true_labels,
    predicted_labels,
    normalization: str = GEOMETRIC,
) -> float:
    """Normalized mutual information of two label sequences, in [0, 1].

    ``normalization`` picks the denominator: "geometric" uses
    sqrt(H_true * H_pred), "arithmetic" their mean. Returns 0.0 when the
    chosen denominator is zero (e.g. a single predicted cluster).
    """
    if len(true_labels) != len(predicted_labels):
        raise ValueError(
            f"label sequences differ in length: "
            f"{len(true_labels)} vs {len(predicted_labels)}"
        )
    n = len(true_labels)
    if n == 0:
        raise ValueError("cannot score empty label sequences")
    if normalization not in (GEOMETRIC, ARITHMETIC):
        raise ValueError(f"unknown normalization: {normalization!r}")

    h_true = _entropy(Counter(true_labels).values(), n)
    h_pred = _entropy(Counter(predicted_labels).values(), n)
    h_joint = _entropy(
        Counter(zip(true_labels, predicted_labels)).values(), n
    )
    mi = h_true + h_pred - h_joint
    if normalization == GEOMETRIC:
        denom = math.sqrt(h_true * h_pred)
    else:
        denom = (h_true + h_pred) / 2.0
    if denom <= 0.0:
        return 0.0
    return min(max(mi / denom, 0.0), 1.0)


@dataclass(frozen=True, slots=True)
class TrialResult:
    nmi: float
    runtime_seconds: float
    final_cluster_count: int


@dataclass(frozen=True, slots=True)
class TrialReport:
    """Aggregated outcome of repeated shuffled runs."""

    per_trial: list[TrialResult]
    nmi_mean: float
    runtime_mean: float
    config: EngineConfig
    n_shuffles: int
    seed: int
    nmi_normalization: str


def _child_seeds(seed: int, n: int) -> list[int]:
    # Documented derivation: the n 64-bit words drawn from a SeedSequence
    # rooted at `seed` become the per-trial shuffle seeds.
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(n, dtype=np.uint64)]


def run_trials(
    ds: LabeledDataset,
    cfg: EngineConfig,
    n_shuffles: int,
    seed: int,
    nmi_normalization: str = GEOMETRIC,
) -> TrialReport:
    """Shuffle, cluster, and score the dataset ``n_shuffles`` times.

    Assignments and NMI are bit-reproducible for a given seed; runtimes
    are wall-clock over the engine loop only.
    """
    if n_shuffles < 1:
        raise ValueError("n_shuffles must be >= 1")
    if len(ds) == 0:
        raise ValueError("empty dataset")
    results: list[TrialResult] = []
    for child in _child_seeds(seed, n_shuffles):
        stream = shuffle(ds, child)
        texts = stream.texts()
        engine = StreamEngine(cfg)
        t0 = time.perf_counter()
        records = engine.run_stream(texts)
        elapsed = time.perf_counter() - t0
        score = nmi(
            stream.labels(),
            [r.handle for r in records],
            nmi_normalization,
        )
        results.append(TrialResult(score, elapsed, engine.store.live_count))
    return TrialReport(
        per_trial=results,
        nmi_mean=sum(r.nmi for r in results) / len(results),
        runtime_mean=sum(r.runtime_seconds for r in results) / len(results),
        config=cfg,
        n_shuffles=n_shuffles,
        seed=seed,
        nmi_normalization=nmi_normalization,
    )


def compare_speed(
    ds: LabeledDataset, cfg: EngineConfig, seed: int
) -> tuple[float, float]:
    """Time the indexed and exhaustive engines on one identical stream.

    Returns (indexed_seconds, exhaustive_seconds). Raises RuntimeError if
    the two engines disagree on any assignment: that is a correctness
    bug, not a performance result.
    """
    stream = shuffle(ds, seed)
    texts = stream.texts()

    indexed = StreamEngine(cfg)
    t0 = time.perf_counter()
    indexed_records = indexed.run_stream(texts)
    indexed_seconds = time.perf_counter() - t0

    exhaustive = ExhaustiveEngine(cfg)
    t0 = time.perf_counter()
    exhaustive_records = exhaustive.run_stream(texts)
    exhaustive_seconds = time.perf_counter() - t0

    for ri, re in zip(indexed_records, exhaustive_records):
        if ri.handle != re.handle or ri.created_new != re.created_new:
            raise RuntimeError(
                f"engine assignments diverge at text {ri.text_id}: "
                f"indexed={ri.handle} exhaustive={re.handle}"
            )
    return indexed_seconds, exhaustive_seconds
