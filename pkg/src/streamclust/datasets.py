"""Labeled-dataset loading, shuffling, and duplicate-graph construction.

Two interchange formats are supported:

* tab-separated: one ``label<TAB>text`` record per line, no header;
  document ids are the 0-based line numbers.
* json-lines: one object per line with string fields "id", "label",
  "text".

A dataset can also be built from StackExchange data-dump files: duplicate
links between questions form an undirected graph, each connected
component becomes one cluster, components with outlying sizes are cut,
and the surviving questions' titles become the texts. Dump files are
parsed row by row and never loaded whole.
"""

import json
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

import numpy as np

TAB_SEPARATED = "tab-separated"
JSON_LINES = "json-lines"

# Link-type code marking a duplicate-question relation in the public
# StackExchange dump schema.
DUPLICATE_LINK_TYPE = 3

QUESTION_POST_TYPE = 1


class LabeledItem(NamedTuple):
    doc_id: str
    label: str
    text: str


@dataclass(slots=True)
class LabeledDataset:
    """Ordered labeled documents; doc_ids unique, labels non-empty."""

    items: list[LabeledItem]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for it in self.items:
            if it.doc_id in seen:
                raise ValueError(f"duplicate doc_id {it.doc_id!r}")
            seen.add(it.doc_id)
            if not it.label:
                raise ValueError(f"empty label for doc_id {it.doc_id!r}")

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __getitem__(self, i: int) -> LabeledItem:
        return self.items[i]

    def labels(self) -> list[str]:
        return [it.label for it in self.items]

    def texts(self) -> list[str]:
        return [it.text for it in self.items]


def load_dataset(path: str | Path, format: str = TAB_SEPARATED) -> LabeledDataset:
    """Read a labeled dataset, preserving file order.

    Raises ValueError naming the line number on any malformed record, and
    on empty files.
    """
    path = Path(path)
    items: list[LabeledItem] = []
    with path.open("r", encoding="utf-8") as fh:
        if format == TAB_SEPARATED:
            for lineno, line in enumerate(fh):
                parts = line.rstrip("\n").split("\t")
                if len(parts) != 2:
                    raise ValueError(
                        f"{path}:{lineno + 1}: expected label<TAB>text, "
                        f"got {len(parts)} field(s)"
                    )
                label, text = parts
                items.append(LabeledItem(str(lineno), label, text))
        elif format == JSON_LINES:
            for lineno, line in enumerate(fh):
                try:
                    obj = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ValueError(
                        f"{path}:{lineno + 1}: invalid JSON: {exc}"
                    ) from exc
                try:
                    doc_id, label, text = obj["id"], obj["label"], obj["text"]
                except (TypeError, KeyError) as exc:
                    raise ValueError(
                        f"{path}:{lineno + 1}: record must be an object with "
                        f'string fields "id", "label", "text"'
                    ) from exc
                if not all(isinstance(v, str) for v in (doc_id, label, text)):
                    raise ValueError(
                        f"{path}:{lineno + 1}: id, label and text must be strings"
                    )
                items.append(LabeledItem(doc_id, label, text))
        else:
            raise ValueError(f"unknown dataset format: {format!r}")
    if not items:
        raise ValueError(f"{path}: empty dataset")
    return LabeledDataset(items)


def save_dataset(ds: LabeledDataset, path: str | Path) -> None:
    """Write in tab-separated form (label and text; ids are positional)."""
    with Path(path).open("w", encoding="utf-8", newline="\n") as fh:
        for it in ds.items:
            fh.write(f"{it.label}\t{it.text}\n")


def shuffle(ds: LabeledDataset, seed: int) -> LabeledDataset:
    """Deterministic permutation of the dataset (PCG64 seeded with ``seed``)."""
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(ds.items))
    return LabeledDataset([ds.items[i] for i in order])


@dataclass(slots=True)
class DuplicateGraph:
    """Undirected duplicate-relation graph: no self-loops, edges deduplicated."""

    nodes: set[int] = field(default_factory=set)
    edges: set[tuple[int, int]] = field(default_factory=set)

    def add_edge(self, a: int, b: int) -> None:
        if a == b:
            return
        self.nodes.add(a)
        self.nodes.add(b)
        self.edges.add((a, b) if a < b else (b, a))

    @classmethod
    def from_pairs(cls, pairs) -> "DuplicateGraph":
        g = cls()
        for a, b in pairs:
            g.add_edge(a, b)
        return g


@dataclass(frozen=True, slots=True)
class Component:
    """One connected component of the duplicate graph."""

    member_ids: frozenset[int]

    @property
    def length(self) -> int:
        return len(self.member_ids)


def connected_components(g: DuplicateGraph) -> list[Component]:
    """Union-find components, ordered by smallest member id."""
    parent: dict[int, int] = {n: n for n in g.nodes}

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for a, b in g.edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    groups: dict[int, set[int]] = {}
    for n in g.nodes:
        groups.setdefault(find(n), set()).add(n)
    comps = [Component(frozenset(members)) for members in groups.values()]
    comps.sort(key=lambda c: min(c.member_ids))
    return comps


def _iter_dump_rows(path: str | Path):
    """Yield the attribute dict of each <row> in a dump file, streaming.

    The parsed tree is discarded row by row so arbitrarily large dumps
    stay out of memory.
    """
    path = Path(path)
    try:
        context = ET.iterparse(str(path), events=("start", "end"))
        _, root = next(context)
        for event, elem in context:
            if event == "end" and elem.tag == "row":
                yield dict(elem.attrib)
                root.clear()
    except ET.ParseError as exc:
        raise ValueError(f"{path}: ill-formed dump XML: {exc}") from exc


def _load_duplicate_pairs(
    links_file: str | Path, link_type: int
) -> list[tuple[int, int]]:
    pairs: set[tuple[int, int]] = set()
    for row in _iter_dump_rows(links_file):
        try:
            if int(row["LinkTypeId"]) != link_type:
                continue
            a = int(row["PostId"])
            b = int(row["RelatedPostId"])
        except (KeyError, ValueError) as exc:
            raise ValueError(
                f"{links_file}: bad link row {row!r}: {exc}"
            ) from exc
        if a != b:
            pairs.add((a, b) if a < b else (b, a))
    return sorted(pairs)


def _collect_question_titles(
    posts_file: str | Path, wanted: set[int]
) -> dict[int, str]:
    """Titles of question-type posts among ``wanted`` ids, streaming."""
    titles: dict[int, str] = {}
    for row in _iter_dump_rows(posts_file):
        try:
            post_id = int(row["Id"])
            post_type = int(row["PostTypeId"])
        except (KeyError, ValueError) as exc:
            raise ValueError(
                f"{posts_file}: bad post row {row!r}: {exc}"
            ) from exc
        if post_type != QUESTION_POST_TYPE or post_id not in wanted:
            continue
        title = row.get("Title")
        if title is not None:
            titles[post_id] = title
    return titles


def build_so_dataset(
    posts_file: str | Path,
    links_file: str | Path,
    pair_sample: int,
    seed: int,
    duplicate_link_type: int = DUPLICATE_LINK_TYPE,
) -> LabeledDataset:
    """Build a duplicate-question clustering dataset from dump files.

    Duplicate pairs are sampled uniformly without replacement (all pairs
    if fewer than ``pair_sample`` exist), connected components of the
    sampled graph become clusters, and only components whose length lies
    strictly within mean +/- population stddev of the component lengths
    are kept. Members without a retrievable question title are dropped.
    """
    pairs = _load_duplicate_pairs(links_file, duplicate_link_type)
    if not pairs:
        raise ValueError(f"{links_file}: no duplicate pairs found")
    if pair_sample < len(pairs):
        rng = np.random.default_rng(seed)
        chosen = rng.choice(len(pairs), size=pair_sample, replace=False)
        pairs = [pairs[i] for i in sorted(chosen)]

    comps = connected_components(DuplicateGraph.from_pairs(pairs))
    lengths = [c.length for c in comps]
    mean = sum(lengths) / len(lengths)
    sd = (sum((x - mean) ** 2 for x in lengths) / len(lengths)) ** 0.5
    surviving = [c for c in comps if mean - sd < c.length < mean + sd]
    if not surviving:
        raise ValueError(
            "no components survive the size filter "
            f"(mean {mean:.3f}, stddev {sd:.3f})"
        )

    wanted: set[int] = set()
    for comp in surviving:
        wanted |= comp.member_ids
    titles = _collect_question_titles(posts_file, wanted)

    items: list[LabeledItem] = []
    for comp in surviving:
        label = str(min(comp.member_ids))
        for qid in sorted(comp.member_ids):
            title = titles.get(qid)
            if title is not None:
                items.append(LabeledItem(str(qid), label, title))
    if not items:
        raise ValueError("no question titles found for surviving components")
    return LabeledDataset(items)
