"""One-pass stream clustering with adaptive similarity thresholds.

Each arriving text is scored against a set of candidate clusters, and the
best match wins only if its score strictly exceeds the mean plus one
population standard deviation of the candidate scores; otherwise the text
opens a new cluster. The threshold therefore adapts per text, with no
user-tuned similarity cutoff.

Two engines share this logic and differ only in how candidates are found:

* ``StreamEngine`` consults a posting index, scoring only clusters that
  share a feature with the text (all others have similarity zero).
* ``ExhaustiveEngine`` scans every live cluster and drops zero scores.

Both produce identical assignments on identical streams; the exhaustive
engine exists as the correctness oracle and speed baseline.

Consequences of the strict threshold worth knowing: with exactly one
candidate, max equals mean and stddev is zero, so the text opens a new
cluster; with two candidates, max always equals mean + stddev, so again a
new cluster. Absorption into an existing cluster can only begin once a
text sees three or more candidates with a clear winner.
"""

import math
from collections.abc import Callable, Iterable
from dataclasses import dataclass

from .clusters import ClusterFeatureVector, ClusterStore, StoreStats
from .features import FeatureKind, TextVector, extract_features, tokenize
from .index import PostingIndex

TIE_BREAK_RECENCY = "stamp-then-handle"

DEFAULT_DELETE_INTERVAL = 500


@dataclass(frozen=True, slots=True)
class EngineConfig:
    """Run parameters fixed for an engine's lifetime."""

    feature_kind: FeatureKind = FeatureKind.BITERM
    delete_interval: int = DEFAULT_DELETE_INTERVAL
    tie_break: str = TIE_BREAK_RECENCY

    def __post_init__(self) -> None:
        if self.delete_interval < 1:
            raise ValueError("delete_interval must be >= 1")
        if self.tie_break != TIE_BREAK_RECENCY:
            raise ValueError(f"unsupported tie-break policy: {self.tie_break!r}")


@dataclass(frozen=True, slots=True)
class Decision:
    """Outcome of the threshold rule: join ``handle`` or open a new cluster."""

    handle: int | None
    score: float | None

    @classmethod
    def new(cls) -> "Decision":
        return cls(None, None)

    @classmethod
    def existing(cls, handle: int, score: float) -> "Decision":
        return cls(handle, score)

    @property
    def is_new(self) -> bool:
        return self.handle is None


@dataclass(frozen=True, slots=True)
class AssignmentRecord:
    """Per-text audit trail of one assignment."""

    text_id: int
    handle: int
    created_new: bool
    candidate_count: int
    max_similarity: float | None


def similarity(tv: TextVector, cf: ClusterFeatureVector) -> float:
    """Overlap score in [0, 1]: twice the common-feature mass over the
    summed feature totals of text and cluster.

    Zero iff the two share no feature; 1.0 when the cluster holds exactly
    one copy of the text.
    """
    denom = tv.total + cf.feature_total
    if denom <= 0:
        raise ValueError("similarity undefined for two empty feature vectors")
    cf_get = cf.features.get
    common = 0
    for f, c in tv.features.items():
        k = cf_get(f)
        if k is not None:
            common += k if k < c else c
    return 2.0 * common / denom


def decide(
    scored: list[tuple[int, float]],
    stamp_of: Callable[[int], int] | None = None,
) -> Decision:
    """Apply the adaptive threshold to candidate scores.

    Joins the argmax cluster only when the maximum score strictly exceeds
    mean + population stddev of the scores; an empty candidate list always
    opens a new cluster. Score ties go to the highest stamp, then the
    highest handle.
    """
    if not scored:
        return Decision.new()
    n = len(scored)
    total = 0.0
    best = scored[0][1]
    worst = best
    for _, s in scored:
        total += s
        if s > best:
            best = s
        elif s < worst:
            worst = s
    # Structural ties where max == mean + stddev exactly: one candidate,
    # two candidates, or all scores equal. The strict inequality can never
    # hold there, so decide it outright rather than trusting float
    # rounding of the threshold.
    if n <= 2 or best == worst:
        return Decision.new()
    mean = total / n
    var = 0.0
    for _, s in scored:
        d = s - mean
        var += d * d
    sigma = math.sqrt(var / n)
    if not best > mean + sigma:
        return Decision.new()
    winner = -1
    if stamp_of is None:
        for h, s in scored:
            if s == best and h > winner:
                winner = h
    else:
        winner_key = None
        for h, s in scored:
            if s == best:
                key = (stamp_of(h), h)
                if winner_key is None or key > winner_key:
                    winner_key = key
                    winner = h
    return Decision.existing(winner, best)


class _EngineBase:
    """Shared model-update loop; subclasses supply candidate scoring.

    Scored candidates must be returned in ascending-handle order so that
    both engines accumulate threshold statistics in the same float order
    and decide identically on every stream.
    """

    def __init__(self, config: EngineConfig) -> None:
        self._config = config
        self._store = ClusterStore()
        self._texts_processed = 0
        self._last_stamp = 0
        self._prev_handle: int | None = None

    def _scored_candidates(self, tv: TextVector) -> list[tuple[int, float]]:
        raise NotImplementedError

    def _on_assigned(self, tv: TextVector, handle: int) -> None:
        pass

    def _on_deleted(self, cf: ClusterFeatureVector) -> None:
        pass

    def _fresh_stamp(self) -> int:
        self._last_stamp += 1
        return self._last_stamp

    def process_text(self, raw: str) -> AssignmentRecord:
        """Cluster one arriving text and update the model.

        A new cluster is restamped on creation; an existing cluster is
        restamped only when the previous text landed elsewhere, so runs of
        same-cluster texts keep one stamp. Every ``delete_interval``-th
        text triggers an outdated-cluster deletion pass after assignment.
        """
        text_id = self._texts_processed
        tv = extract_features(
            tokenize(raw), self._config.feature_kind, text_id
        )
        scored = self._scored_candidates(tv)
        decision = decide(scored, self._store.stamp_of)
        if decision.handle is None:
            handle = self._store.create_cluster(tv, self._fresh_stamp())
            created = True
        else:
            handle = decision.handle
            new_stamp = (
                self._fresh_stamp() if handle != self._prev_handle else None
            )
            self._store.add_text(handle, tv, new_stamp)
            created = False
        self._on_assigned(tv, handle)
        self._prev_handle = handle
        self._texts_processed += 1
        if self._texts_processed % self._config.delete_interval == 0:
            self.delete_outdated()
        max_sim = max(s for _, s in scored) if scored else None
        return AssignmentRecord(text_id, handle, created, len(scored), max_sim)

    def run_stream(self, texts: Iterable[str]) -> list[AssignmentRecord]:
        """Process texts strictly in order; one record per input text."""
        return [self.process_text(t) for t in texts]

    def delete_outdated(self) -> list[int]:
        """Drop clusters both older and smaller than one stddev below the
        mean, using one statistics snapshot for the whole pass.

        Returns the deleted handles (possibly empty).
        """
        stats: StoreStats = self._store.stats()
        stamp_cut = stats.stamp_mean - stats.stamp_stddev
        size_cut = stats.size_mean - stats.size_stddev
        doomed = [
            cf.handle
            for cf in self._store.live()
            if cf.stamp < stamp_cut and cf.text_count < size_cut
        ]
        for handle in doomed:
            self._on_deleted(self._store.delete_cluster(handle))
        return doomed

    @property
    def config(self) -> EngineConfig:
        return self._config

    @property
    def store(self) -> ClusterStore:
        return self._store

    @property
    def texts_processed(self) -> int:
        return self._texts_processed


class StreamEngine(_EngineBase):
    """Indexed engine: scores only clusters sharing a feature with the text."""

    def __init__(self, config: EngineConfig) -> None:
        super().__init__(config)
        self._index = PostingIndex()

    def _scored_candidates(self, tv: TextVector) -> list[tuple[int, float]]:
        store_get = self._store.get
        return [
            (h, similarity(tv, store_get(h)))
            for h in sorted(self._index.candidates(tv))
        ]

    def _on_assigned(self, tv: TextVector, handle: int) -> None:
        self._index.index_text(tv, handle)

    def _on_deleted(self, cf: ClusterFeatureVector) -> None:
        self._index.purge_cluster(cf)

    @property
    def index(self) -> PostingIndex:
        return self._index


class ExhaustiveEngine(_EngineBase):
    """Oracle engine: scans all live clusters, keeps nonzero scores."""

    def _scored_candidates(self, tv: TextVector) -> list[tuple[int, float]]:
        if tv.total == 0:
            return []
        out = []
        for cf in self._store.live():
            s = similarity(tv, cf)
            if s > 0.0:
                out.append((cf.handle, s))
        return out
