"""Shared test oracles and stream generators.

Everything here recomputes results from first principles, independently
of the library's own code paths, so tests can compare the two.
"""

import math
import random
from collections import Counter

from streamclust.clusters import ClusterStore
from streamclust.engine import _EngineBase
from streamclust.features import TextVector


def brute_force_similarity(tv: TextVector, features: dict, total: int) -> float:
    """Eq-by-the-book overlap score, iterating the merged key set."""
    keys = set(tv.features) | set(features)
    common = sum(min(tv.features.get(f, 0), features.get(f, 0)) for f in keys)
    return 2.0 * common / (tv.total + total)


def brute_force_candidates(store: ClusterStore, tv: TextVector) -> set[int]:
    """Clusters sharing at least one feature with the text, by full scan."""
    found = set()
    for cf in store.live():
        for f in tv.features:
            if f in cf.features:
                found.add(cf.handle)
                break
    return found


def brute_force_nmi(true_labels, pred_labels, normalization="geometric") -> float:
    """Direct mutual-information sum over the contingency table."""
    n = len(true_labels)
    joint = Counter(zip(true_labels, pred_labels))
    ct = Counter(true_labels)
    cp = Counter(pred_labels)
    mi = 0.0
    for (a, b), c in joint.items():
        mi += (c / n) * math.log((c * n) / (ct[a] * cp[b]))
    ht = -sum((c / n) * math.log(c / n) for c in ct.values())
    hp = -sum((c / n) * math.log(c / n) for c in cp.values())
    if normalization == "geometric":
        denom = math.sqrt(ht * hp)
    else:
        denom = (ht + hp) / 2.0
    return mi / denom if denom > 0 else 0.0


def mirror_violations(engine) -> list[str]:
    """Differences between the posting index and the cluster store.

    Empty list iff the index contains exactly the (feature, handle) pairs
    present in live clusters, with no empty posting sets.
    """
    expected: dict[str, set[int]] = {}
    for cf in engine.store.live():
        for f in cf.features:
            expected.setdefault(f, set()).add(cf.handle)
    actual = dict(engine.index.items())
    problems = []
    for f, handles in expected.items():
        got = actual.get(f)
        if got != handles:
            problems.append(f"feature {f!r}: expected {handles}, got {got}")
    for f, handles in actual.items():
        if f not in expected:
            problems.append(f"stale feature {f!r}: {handles}")
        if not handles:
            problems.append(f"empty posting set retained for {f!r}")
    return problems


def conservation_holds(engine: _EngineBase) -> bool:
    """Live text mass plus deleted text mass equals texts processed."""
    return (
        engine.store.live_text_count + engine.store.texts_deleted
        == engine.texts_processed
    )


def random_texts(
    rng: random.Random,
    n_texts: int,
    vocab_size: int,
    max_len: int = 6,
    empty_rate: float = 0.02,
) -> list[str]:
    """Random short texts over a shared vocabulary, duplicates allowed."""
    vocab = [f"t{i}" for i in range(vocab_size)]
    out = []
    for _ in range(n_texts):
        if rng.random() < empty_rate:
            out.append("")
            continue
        length = rng.randint(1, max_len)
        out.append(" ".join(rng.choices(vocab, k=length)))
    return out


# A hand-checkable StackExchange-style dump fixture.
#
# Duplicate links (type 3) form six undirected edges:
#   101-102   103-104   105-106           -> three components of length 2
#   107-108   108-109   109-110           -> one chain component of length 4
# Component lengths {2, 2, 2, 4}: mean 2.5, population stddev sqrt(3)/2
# ~ 0.866, so the strict window (1.634, 3.366) keeps the three pairs and
# cuts the chain. The 102->101 row repeats an edge (deduplicated), the
# 103->103 row is a self-loop (ignored), and the type-1 row is a related
# link, not a duplicate (ignored). Post 106 is an answer, so it has no
# title and is dropped from its surviving component.
FIXTURE_POSTS_XML = """<?xml version="1.0" encoding="utf-8"?>
<posts>
  <row Id="101" PostTypeId="1" Score="12" Title="Python Video Framework" />
  <row Id="102" PostTypeId="1" Score="40" Title="Best video manipulation library for Python?" />
  <row Id="103" PostTypeId="1" Score="7" Title="Trim a video using Python" />
  <row Id="104" PostTypeId="1" Score="3" Title="Video trimming in Python" />
  <row Id="105" PostTypeId="1" Score="9" Title="Parse JSON in Java" />
  <row Id="106" PostTypeId="2" Score="2" />
  <row Id="107" PostTypeId="1" Score="1" Title="Plot colors in R" />
  <row Id="108" PostTypeId="1" Score="1" Title="Change R plot color palette" />
  <row Id="109" PostTypeId="1" Score="0" Title="R plot line colors" />
  <row Id="110" PostTypeId="1" Score="2" Title="Custom colors for R plots" />
  <row Id="120" PostTypeId="1" Score="5" Title="How to read a file in Python" />
  <row Id="200" PostTypeId="1" Score="4" Title="Unlinked lonely question" />
  <row Id="201" PostTypeId="2" Score="1" />
  <row Id="202" PostTypeId="1" Score="0" Title="Another unlinked question" />
  <row Id="203" PostTypeId="2" Score="0" />
  <row Id="204" PostTypeId="1" Score="2" Title="Yet another question" />
  <row Id="205" PostTypeId="2" Score="0" />
  <row Id="206" PostTypeId="1" Score="1" Title="Question about nothing" />
  <row Id="207" PostTypeId="2" Score="3" />
  <row Id="208" PostTypeId="1" Score="0" Title="Last filler question" />
</posts>
"""

FIXTURE_LINKS_XML = """<?xml version="1.0" encoding="utf-8"?>
<postlinks>
  <row Id="1" PostId="102" RelatedPostId="101" LinkTypeId="3" />
  <row Id="2" PostId="101" RelatedPostId="102" LinkTypeId="3" />
  <row Id="3" PostId="104" RelatedPostId="103" LinkTypeId="3" />
  <row Id="4" PostId="106" RelatedPostId="105" LinkTypeId="3" />
  <row Id="5" PostId="103" RelatedPostId="103" LinkTypeId="3" />
  <row Id="6" PostId="108" RelatedPostId="107" LinkTypeId="3" />
  <row Id="7" PostId="109" RelatedPostId="108" LinkTypeId="3" />
  <row Id="8" PostId="110" RelatedPostId="109" LinkTypeId="3" />
  <row Id="9" PostId="120" RelatedPostId="101" LinkTypeId="1" />
</postlinks>
"""

# Expected build output for the fixture above with pair_sample covering
# all six edges: surviving components {101,102}, {103,104}, {105,106},
# labeled by their smallest member, members sorted, titleless members
# dropped.
FIXTURE_EXPECTED = [
    ("101", "101", "Python Video Framework"),
    ("102", "101", "Best video manipulation library for Python?"),
    ("103", "103", "Trim a video using Python"),
    ("104", "103", "Video trimming in Python"),
    ("105", "105", "Parse JSON in Java"),
]


def write_dump_fixture(tmp_path):
    """Write the fixture dump files; returns (posts_path, links_path)."""
    posts = tmp_path / "Posts.xml"
    links = tmp_path / "PostLinks.xml"
    posts.write_text(FIXTURE_POSTS_XML, encoding="utf-8")
    links.write_text(FIXTURE_LINKS_XML, encoding="utf-8")
    return posts, links
