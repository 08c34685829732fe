"""Chevron layout trees and variant grouping.

An interval order decomposes recursively: a maximal ordering cut becomes a
Sequence node over its blocks, a maximal parallel cut a Parallel node over
its components, a single vertex a Leaf. When neither cut applies to two or
more vertices, the suborder collapses into a Fallback listing its labels in
no particular order.

Traces whose layouts canonicalize to the same key form one variant. The
canonical form ignores the on-screen order of Parallel children and of
Fallback labels; everything else is structural.
"""

from __future__ import annotations

import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .cuts import CutKind, find_cut
from .ingest import EventLog, Trace, group_by_case
from .order import IntervalOrder, build_interval_order, induced_suborder


@dataclass(frozen=True, slots=True)
class Leaf:
    label: str


@dataclass(frozen=True, slots=True)
class Sequence:
    children: tuple


@dataclass(frozen=True, slots=True)
class Parallel:
    children: tuple


@dataclass(frozen=True, slots=True)
class Fallback:
    labels: tuple  # label multiset, stored sorted


LayoutTree = Leaf | Sequence | Parallel | Fallback


def build_layout(order: IntervalOrder) -> LayoutTree:
    """Recursively decompose an interval order into its layout tree.

    Deterministic: equal orders produce equal trees. Sequence and Parallel
    children appear in block order (time order for parallel components).
    """
    if len(order.vertices) == 1:
        return Leaf(order.vertices[0].label)
    cut = find_cut(order)
    if cut.kind is CutKind.ORDERING:
        return Sequence(
            tuple(build_layout(induced_suborder(order, g)) for g in cut.groups)
        )
    if cut.kind is CutKind.PARALLEL:
        return Parallel(
            tuple(build_layout(induced_suborder(order, g)) for g in cut.groups)
        )
    return Fallback(tuple(sorted(v.label for v in order.vertices)))


def layout_trace(trace: Trace) -> LayoutTree:
    return build_layout(build_interval_order(trace))


_STRUCTURAL = re.compile(r"[\\(){},]")


def escape_label(label: str) -> str:
    """Backslash-escape the characters the tree notations use structurally."""
    return _STRUCTURAL.sub(lambda m: "\\" + m.group(), label)


def canonical_form(tree: LayoutTree) -> str:
    """Serialize a layout tree to its variant key.

    Two trees share a key iff they are equal up to reordering of Parallel
    children and Fallback labels.
    """
    if isinstance(tree, Leaf):
        return escape_label(tree.label)
    if isinstance(tree, Fallback):
        return "u{" + ",".join(escape_label(l) for l in sorted(tree.labels)) + "}"
    if isinstance(tree, Sequence):
        return "s(" + ",".join(canonical_form(c) for c in tree.children) + ")"
    if isinstance(tree, Parallel):
        return "p(" + ",".join(sorted(canonical_form(c) for c in tree.children)) + ")"
    raise TypeError(f"not a layout tree: {tree!r}")


def has_fallback(tree: LayoutTree) -> bool:
    if isinstance(tree, Fallback):
        return True
    if isinstance(tree, (Sequence, Parallel)):
        return any(has_fallback(c) for c in tree.children)
    return False


def tree_labels(tree: LayoutTree) -> list[str]:
    """The label multiset of a tree (order unspecified)."""
    if isinstance(tree, Leaf):
        return [tree.label]
    if isinstance(tree, Fallback):
        return list(tree.labels)
    out: list[str] = []
    for c in tree.children:
        out.extend(tree_labels(c))
    return out


def layout_to_json(tree: LayoutTree) -> dict:
    """Tree as a JSON-ready dict: kind seq|par|leaf|fallback plus payload."""
    if isinstance(tree, Leaf):
        return {"kind": "leaf", "label": tree.label}
    if isinstance(tree, Fallback):
        return {"kind": "fallback", "labels": list(sorted(tree.labels))}
    kind = "seq" if isinstance(tree, Sequence) else "par"
    return {"kind": kind, "children": [layout_to_json(c) for c in tree.children]}


def layout_from_json(obj: dict) -> LayoutTree:
    kind = obj.get("kind")
    if kind == "leaf":
        return Leaf(obj["label"])
    if kind == "fallback":
        return Fallback(tuple(sorted(obj["labels"])))
    children = tuple(layout_from_json(c) for c in obj["children"])
    if kind == "seq":
        return Sequence(children)
    if kind == "par":
        return Parallel(children)
    raise ValueError(f"unknown layout node kind: {kind!r}")


@dataclass(slots=True)
class VariantEntry:
    count: int
    layout: LayoutTree
    case_ids: list[str]
    has_fallback: bool


@dataclass(slots=True)
class VariantTable:
    """Canonical layout key -> occurrence count and representative cases."""

    entries: dict[str, VariantEntry] = field(default_factory=dict)
    skipped: list[str] = field(default_factory=list)

    def add(self, key: str, tree: LayoutTree, case_id: str) -> None:
        entry = self.entries.get(key)
        if entry is None:
            self.entries[key] = VariantEntry(1, tree, [case_id], has_fallback(tree))
        else:
            entry.count += 1
            entry.case_ids.append(case_id)

    def sorted_items(self) -> list[tuple[str, VariantEntry]]:
        """Entries by descending count, then key."""
        return sorted(self.entries.items(), key=lambda kv: (-kv[1].count, kv[0]))

    def find_case(self, case_id: str) -> tuple[str, VariantEntry] | None:
        for key, entry in self.entries.items():
            if case_id in entry.case_ids:
                return key, entry
        return None

    @property
    def total_count(self) -> int:
        return sum(e.count for e in self.entries.values())

    @property
    def fallback_variant_count(self) -> int:
        return sum(1 for e in self.entries.values() if e.has_fallback)


def variant_table(log: EventLog, threads: int = 1) -> VariantTable:
    """Group the traces of a log into interval-ordered variants.

    The result is independent of ``threads``; traces that cannot be ordered
    (no instances) land in the ``skipped`` bucket.
    """
    return variants_of_traces(group_by_case(log), threads=threads)


def variants_of_traces(traces: list[Trace], threads: int = 1) -> VariantTable:
    table = VariantTable()
    usable = []
    for trace in traces:
        if trace.instances:
            usable.append(trace)
        else:
            table.skipped.append(trace.case_id)

    def work(trace: Trace) -> tuple[str, LayoutTree]:
        tree = layout_trace(trace)
        return canonical_form(tree), tree

    # map() preserves input order, so aggregation below is deterministic for
    # every thread count.
    if threads > 1 and len(usable) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(work, usable, chunksize=64))
    else:
        results = [work(t) for t in usable]
    for trace, (key, tree) in zip(usable, results):
        table.add(key, tree, trace.case_id)
    return table
