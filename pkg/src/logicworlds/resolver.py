"""Symbolic resolution of descriptors and instance graphs.

A descriptor resolves to the set of relations derivable by composing
its labels under some binary bracketing. :func:`resolve_descriptor`
computes that set with a CYK-style chart; :func:`brute_force_resolve`
recomputes it by enumerating every bracketing explicitly and exists
only to cross-check the chart.

Instance graphs are validated against the four soundness conditions a
query must satisfy (target resolvable and unambiguous, descriptor/path
agreement, no shortcut, all same-length paths consistent), and
:func:`symbolic_baseline_solve` is the perfect-accuracy reference
solver used as the in-repo baseline.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Iterator, Sequence

from .errors import ConfigError
from .rules import RelationId, RuleSet, compose

if TYPE_CHECKING:  # pragma: no cover
    from .sampler import Instance, WorldDataset

BRUTE_FORCE_MAX_LEN = 12  # Catalan(11) = 58786 bracketings; enough for an oracle


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the per-instance soundness checks.

    ``path_consistent`` covers both descriptor/path agreement and the
    requirement that every simple source-to-sink path of resolution
    length resolves to a subset of {target}.
    """

    resolved: frozenset[RelationId]
    target_hit: bool
    ambiguous: bool
    shortcut_free: bool
    path_consistent: bool

    @property
    def is_valid(self) -> bool:
        return (
            self.target_hit
            and not self.ambiguous
            and self.shortcut_free
            and self.path_consistent
        )


def resolution_chart(
    rules: RuleSet, labels: Sequence[RelationId]
) -> dict[tuple[int, int], frozenset[RelationId]]:
    """Bottom-up span chart: (i, j) -> relations derivable over labels[i:j]."""
    n = len(labels)
    if n < 1:
        raise ConfigError("descriptor must contain at least one label")
    lookup = rules._by_body
    spans: dict[tuple[int, int], set[RelationId]] = {
        (i, i + 1): {labels[i]} for i in range(n)
    }
    for width in range(2, n + 1):
        for i in range(n - width + 1):
            j = i + width
            cell: set[RelationId] = set()
            for k in range(i + 1, j):
                left = spans[(i, k)]
                right = spans[(k, j)]
                for a in left:
                    for b in right:
                        rule = lookup.get((a, b))
                        if rule is not None:
                            cell.add(rule.head)
            spans[(i, j)] = cell
    return {span: frozenset(cell) for span, cell in spans.items()}


def resolve_descriptor(
    rules: RuleSet, labels: Sequence[RelationId]
) -> frozenset[RelationId]:
    """Relations derivable for the full descriptor span."""
    return resolution_chart(rules, labels)[(0, len(labels))]


@lru_cache(maxsize=None)
def _tree_shapes(n: int) -> tuple:
    """All full binary tree shapes over n leaves; None marks a leaf."""
    if n == 1:
        return (None,)
    shapes = []
    for split in range(1, n):
        for left in _tree_shapes(split):
            for right in _tree_shapes(n - split):
                shapes.append((split, left, right))
    return tuple(shapes)


def _fold(shape, labels: Sequence[RelationId], offset: int, rules: RuleSet):
    if shape is None:
        return labels[offset]
    split, left, right = shape
    a = _fold(left, labels, offset, rules)
    if a is None:
        return None
    b = _fold(right, labels, offset + split, rules)
    if b is None:
        return None
    return compose(rules, a, b)


def brute_force_resolve(
    rules: RuleSet, labels: Sequence[RelationId]
) -> frozenset[RelationId]:
    """Union over every binary bracketing, folded one tree at a time.

    Deliberately naive; guards at length 12 where the bracketing count
    becomes unreasonable for an oracle.
    """
    n = len(labels)
    if n < 1:
        raise ConfigError("descriptor must contain at least one label")
    if n > BRUTE_FORCE_MAX_LEN:
        raise ConfigError(f"brute force refused beyond length {BRUTE_FORCE_MAX_LEN}")
    results = set()
    for shape in _tree_shapes(n):
        value = _fold(shape, labels, 0, rules)
        if value is not None:
            results.add(value)
    return frozenset(results)


def out_adjacency(
    edges: Iterable[tuple[int, RelationId, int]]
) -> dict[int, list[tuple[int, RelationId]]]:
    """Successor lists sorted by (node, label) for deterministic walks."""
    adj: dict[int, list[tuple[int, RelationId]]] = {}
    for u, r, v in edges:
        adj.setdefault(u, []).append((v, r))
    for nbrs in adj.values():
        nbrs.sort()
    return adj


def shortest_distance(
    adj: dict[int, list[tuple[int, RelationId]]], source: int, sink: int
) -> int | None:
    """Directed BFS hop count, None when the sink is unreachable."""
    if source == sink:
        return 0
    dist = {source: 0}
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v, _ in adj.get(u, ()):
            if v not in dist:
                dist[v] = dist[u] + 1
                if v == sink:
                    return dist[v]
                queue.append(v)
    return None


def _distances_to(adj, sink: int) -> dict[int, int]:
    """Reverse BFS: node -> hop distance to the sink (pruning table)."""
    rev: dict[int, list[int]] = {}
    for u, nbrs in adj.items():
        for v, _ in nbrs:
            rev.setdefault(v, []).append(u)
    dist = {sink: 0}
    queue = deque([sink])
    while queue:
        v = queue.popleft()
        for u in rev.get(v, ()):
            if u not in dist:
                dist[u] = dist[v] + 1
                queue.append(u)
    return dist


def iter_simple_path_labels(
    adj: dict[int, list[tuple[int, RelationId]]],
    source: int,
    sink: int,
    max_len: int,
    exact_len: int | None = None,
) -> Iterator[tuple[RelationId, ...]]:
    """Label sequences of simple directed source->sink paths.

    Paths longer than ``max_len`` edges are skipped, as are prefixes that
    cannot reach the sink within budget (reverse-distance pruning).
    """
    to_sink = _distances_to(adj, sink)
    if source not in to_sink:
        return
    path_labels: list[RelationId] = []
    visited = {source}

    def walk(node: int) -> Iterator[tuple[RelationId, ...]]:
        for v, r in adj.get(node, ()):
            length = len(path_labels) + 1
            if v == sink:
                # simple paths end at the sink, never pass through it
                if exact_len is None or length == exact_len:
                    yield tuple(path_labels) + (r,)
                continue
            if v in visited or length >= max_len:
                continue
            remaining = (exact_len if exact_len is not None else max_len) - length
            if to_sink.get(v, max_len + 1) > remaining:
                continue
            visited.add(v)
            path_labels.append(r)
            yield from walk(v)
            path_labels.pop()
            visited.remove(v)

    yield from walk(source)


def validate_instance(rules: RuleSet, inst: "Instance") -> ValidationReport:
    """Run all soundness checks for one query instance.

    Total on arbitrary input: a degenerate record (e.g. an empty
    descriptor) yields an all-failing report rather than an error.
    """
    if not inst.descriptor:
        return ValidationReport(
            resolved=frozenset(),
            target_hit=False,
            ambiguous=False,
            shortcut_free=False,
            path_consistent=False,
        )
    resolved = resolve_descriptor(rules, inst.descriptor)
    target_hit = inst.target in resolved
    ambiguous = len(resolved) > 1

    edge_labels = {(u, v): r for u, r, v in inst.edges}
    path_labels = []
    matches = len(inst.resolution_path) == len(inst.descriptor) + 1
    if matches:
        for a, b in zip(inst.resolution_path, inst.resolution_path[1:]):
            r = edge_labels.get((a, b))
            if r is None:
                matches = False
                break
            path_labels.append(r)
        matches = matches and tuple(path_labels) == tuple(inst.descriptor)

    adj = out_adjacency(inst.edges)
    dist = shortest_distance(adj, inst.source, inst.sink)
    shortcut_free = dist == len(inst.descriptor)

    path_consistent = matches
    if path_consistent:
        cache: dict[tuple[RelationId, ...], frozenset[RelationId]] = {}
        for labels in iter_simple_path_labels(
            adj, inst.source, inst.sink, len(inst.descriptor), exact_len=len(inst.descriptor)
        ):
            res = cache.get(labels)
            if res is None:
                res = cache[labels] = resolve_descriptor(rules, labels)
            if not res <= {inst.target}:
                path_consistent = False
                break

    return ValidationReport(
        resolved=resolved,
        target_hit=target_hit,
        ambiguous=ambiguous,
        shortcut_free=shortcut_free,
        path_consistent=path_consistent,
    )


def solve_instance(
    rules: RuleSet, inst: "Instance", max_len: int
) -> RelationId | None:
    """Predict by resolving every simple source->sink path up to max_len.

    Returns the unique resolvable relation; ties break toward the
    smallest relation id; None when nothing resolves.
    """
    adj = out_adjacency(inst.edges)
    candidates: set[RelationId] = set()
    cache: dict[tuple[RelationId, ...], frozenset[RelationId]] = {}
    for labels in iter_simple_path_labels(adj, inst.source, inst.sink, max_len):
        res = cache.get(labels)
        if res is None:
            res = cache[labels] = resolve_descriptor(rules, labels)
        candidates |= res
    return min(candidates) if candidates else None


def symbolic_baseline_solve(rules: RuleSet, dataset: "WorldDataset") -> float | None:
    """Fraction of dataset queries the path-resolution solver answers correctly.

    Returns None for an empty dataset rather than reporting 0.
    """
    total = 0
    correct = 0
    for instances in dataset.instances.values():
        for inst in instances:
            total += 1
            if solve_instance(rules, inst, dataset.max_walk_len) == inst.target:
                correct += 1
    if total == 0:
        return None
    return correct / total
