"""Synthetic labeled streams for benchmarks and self-contained tests.

The generator builds clusters with mutually disjoint vocabularies, so
texts from different clusters never share a feature and cross-cluster
similarity is exactly zero.
"""

import numpy as np

from .datasets import LabeledDataset, LabeledItem


def separable_dataset(
    n_clusters: int,
    texts_per_cluster: int,
    words_per_text: int = 8,
    vocab_per_cluster: int = 30,
    seed: int = 0,
) -> LabeledDataset:
    """Disjoint-vocabulary dataset: cluster k draws its words only from
    its own ``vocab_per_cluster``-word vocabulary.

    Words within a text are sampled without replacement when the
    vocabulary allows it. Items arrive grouped by cluster; shuffle before
    streaming.
    """
    if words_per_text > vocab_per_cluster:
        raise ValueError("words_per_text cannot exceed vocab_per_cluster")
    rng = np.random.default_rng(seed)
    items: list[LabeledItem] = []
    doc = 0
    for k in range(n_clusters):
        vocab = [f"w{k}x{i}" for i in range(vocab_per_cluster)]
        for _ in range(texts_per_cluster):
            picks = rng.choice(vocab_per_cluster, size=words_per_text, replace=False)
            text = " ".join(vocab[i] for i in picks)
            items.append(LabeledItem(str(doc), f"c{k}", text))
            doc += 1
    return LabeledDataset(items)
