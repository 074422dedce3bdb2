"""Feature-to-cluster posting index for candidate selection.

Maps each feature to the set of live clusters containing it, so that an
incoming text only scores against clusters it shares at least one feature
with. The index must mirror the cluster store exactly: a handle appears
under a feature iff that live cluster's histogram has the feature.
"""

from .clusters import ClusterFeatureVector
from .features import TextVector


class PostingIndex:
    def __init__(self) -> None:
        self._postings: dict[str, set[int]] = {}

    def index_text(self, tv: TextVector, handle: int) -> None:
        """Record that cluster ``handle`` now contains ``tv``'s features.

        Set semantics: re-indexing the same pair is a no-op.
        """
        postings = self._postings
        for f in tv.features:
            members = postings.get(f)
            if members is None:
                postings[f] = {handle}
            else:
                members.add(handle)

    def candidates(self, tv: TextVector) -> set[int]:
        """All live clusters sharing at least one feature with ``tv``."""
        postings = self._postings
        found: set[int] = set()
        for f in tv.features:
            members = postings.get(f)
            if members is not None:
                found |= members
        return found

    def purge_cluster(self, cf: ClusterFeatureVector) -> None:
        """Drop a just-deleted cluster from every posting set it occupies."""
        postings = self._postings
        handle = cf.handle
        for f in cf.features:
            members = postings.get(f)
            # A missing entry would mean a double purge (engine bug).
            assert members is not None and handle in members, (
                f"posting for {f!r} missing handle {handle}"
            )
            members.discard(handle)
            if not members:
                del postings[f]

    def items(self):
        """Read-only view of (feature, handle set) pairs, for checks."""
        return self._postings.items()

    def __len__(self) -> int:
        return len(self._postings)
