"""Tokenization and frequency-vector feature extraction for short texts.

A text is represented by exactly one kind of feature at a time: single
tokens, adjacent token pairs, or all unordered token pairs. Feature keys
are plain strings; pair keys join their tokens with a single space, which
is collision-free because tokenization removes whitespace.
"""

import re
from collections import Counter
from dataclasses import dataclass
from enum import Enum

_TOKEN_RE = re.compile(r"[^\W_]+")

# Minimal English stopword list; filtering is opt-in and off by default.
_STOPWORDS = frozenset(
    """a about after all also an and any are as at be because been but by can
    could did do does for from had has have he her his how i if in into is it
    its just me my no not of on or our out she so some than that the their
    them then there these they this to up was we were what when which who
    will with would you your""".split()
)


class FeatureKind(str, Enum):
    """Which feature representation an engine run uses (fixed per run)."""

    UNIGRAM = "unigram"
    BIGRAM = "bigram"
    BITERM = "biterm"


@dataclass(slots=True)
class TextVector:
    """Extracted features of one document.

    ``features`` maps feature key to occurrence count; ``total`` is the
    number of feature occurrences (the sum of all counts).
    """

    text_id: int
    features: dict[str, int]
    total: int


def tokenize(raw: str, remove_stopwords: bool = False) -> list[str]:
    """Lowercase and split on any non-alphanumeric character.

    Empty tokens are dropped; duplicates and order are preserved.
    """
    tokens = _TOKEN_RE.findall(raw.lower())
    if remove_stopwords:
        tokens = [t for t in tokens if t not in _STOPWORDS]
    return tokens


def _biterm_key(a: str, b: str) -> str:
    # Unordered pair: normalize so (a, b) and (b, a) share one key.
    return a + " " + b if a <= b else b + " " + a


def extract_features(
    tokens: list[str], kind: FeatureKind, text_id: int = 0
) -> TextVector:
    """Build the frequency vector for one token list.

    For n tokens: unigrams yield n occurrences, bigrams max(n-1, 0), and
    biterms n*(n-1)/2 (one per unordered position pair, so repeated tokens
    produce self-pairs).
    """
    counts: Counter[str] = Counter()
    if kind is FeatureKind.UNIGRAM:
        counts.update(tokens)
    elif kind is FeatureKind.BIGRAM:
        counts.update(a + " " + b for a, b in zip(tokens, tokens[1:]))
    elif kind is FeatureKind.BITERM:
        n = len(tokens)
        for i in range(n):
            a = tokens[i]
            for j in range(i + 1, n):
                counts[_biterm_key(a, tokens[j])] += 1
    else:
        raise ValueError(f"unknown feature kind: {kind!r}")
    return TextVector(text_id, dict(counts), sum(counts.values()))
