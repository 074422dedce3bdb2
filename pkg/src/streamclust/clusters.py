"""Live-cluster bookkeeping as additive feature summaries.

Each cluster is a summary of the texts assigned to it: a feature
histogram, the histogram's total, the text count, and a recency stamp.
Handles identify clusters and are never reused; stamps order clusters by
recency and feed the outdated-cluster deletion rule.
"""

import math
from dataclasses import dataclass

from .features import TextVector


@dataclass(slots=True)
class ClusterFeatureVector:
    """Additive summary of one cluster's contents."""

    handle: int
    features: dict[str, int]
    feature_total: int
    text_count: int
    stamp: int


@dataclass(frozen=True, slots=True)
class StoreStats:
    """Population mean/stddev of stamps and sizes over live clusters."""

    stamp_mean: float
    stamp_stddev: float
    size_mean: float
    size_stddev: float


def _mean_pstdev(values: list[int]) -> tuple[float, float]:
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return mean, math.sqrt(var)


class ClusterStore:
    """Single-writer store of live clusters.

    Handles are issued from a monotone counter and retired permanently on
    deletion. Stamps are supplied by the caller and must be strictly
    increasing across the store's lifetime; the store only validates.
    Deleted clusters leave behind text counts (not features) so that
    text-conservation checks remain possible.
    """

    def __init__(self) -> None:
        self._clusters: dict[int, ClusterFeatureVector] = {}
        self._next_handle = 0
        self._max_stamp = 0
        self._texts_deleted = 0
        self._clusters_deleted = 0

    def create_cluster(self, tv: TextVector, stamp: int) -> int:
        """Open a new cluster seeded with one text; returns its handle."""
        if stamp <= self._max_stamp:
            raise ValueError(
                f"stamp {stamp} not greater than last issued {self._max_stamp}"
            )
        self._max_stamp = stamp
        handle = self._next_handle
        self._next_handle += 1
        self._clusters[handle] = ClusterFeatureVector(
            handle=handle,
            features=dict(tv.features),
            feature_total=tv.total,
            text_count=1,
            stamp=stamp,
        )
        return handle

    def add_text(
        self, handle: int, tv: TextVector, new_stamp: int | None = None
    ) -> None:
        """Fold one text into a live cluster.

        ``new_stamp`` restamps the cluster; omit it when the previous text
        landed in the same cluster, in which case recency is unchanged.
        """
        cf = self._clusters.get(handle)
        if cf is None:
            raise KeyError(f"unknown or retired cluster handle {handle}")
        feats = cf.features
        for f, c in tv.features.items():
            feats[f] = feats.get(f, 0) + c
        cf.feature_total += tv.total
        cf.text_count += 1
        if new_stamp is not None:
            if new_stamp <= self._max_stamp:
                raise ValueError(
                    f"stamp {new_stamp} not greater than last issued "
                    f"{self._max_stamp}"
                )
            self._max_stamp = new_stamp
            cf.stamp = new_stamp

    def delete_cluster(self, handle: int) -> ClusterFeatureVector:
        """Remove a cluster and return its summary so indexes can purge it."""
        cf = self._clusters.pop(handle, None)
        if cf is None:
            raise KeyError(f"unknown or retired cluster handle {handle}")
        self._texts_deleted += cf.text_count
        self._clusters_deleted += 1
        return cf

    def stats(self) -> StoreStats:
        """Stamp and size statistics over live clusters (population stddev)."""
        if not self._clusters:
            raise ValueError("no live clusters")
        cfs = self._clusters.values()
        stamp_mean, stamp_sd = _mean_pstdev([cf.stamp for cf in cfs])
        size_mean, size_sd = _mean_pstdev([cf.text_count for cf in cfs])
        return StoreStats(stamp_mean, stamp_sd, size_mean, size_sd)

    def get(self, handle: int) -> ClusterFeatureVector:
        cf = self._clusters.get(handle)
        if cf is None:
            raise KeyError(f"unknown or retired cluster handle {handle}")
        return cf

    def stamp_of(self, handle: int) -> int:
        return self.get(handle).stamp

    def live(self):
        """Live cluster summaries in ascending-handle order."""
        return self._clusters.values()

    def live_handles(self) -> list[int]:
        return list(self._clusters.keys())

    def __contains__(self, handle: int) -> bool:
        return handle in self._clusters

    def __len__(self) -> int:
        return len(self._clusters)

    @property
    def live_count(self) -> int:
        return len(self._clusters)

    @property
    def texts_deleted(self) -> int:
        """Total texts that belonged to clusters deleted so far."""
        return self._texts_deleted

    @property
    def clusters_deleted(self) -> int:
        return self._clusters_deleted

    @property
    def live_text_count(self) -> int:
        return sum(cf.text_count for cf in self._clusters.values())

    @property
    def max_stamp(self) -> int:
        return self._max_stamp
