"""Per-query instance sampling from a WorldGraph.

For every edge (u, r, v) of the world graph, the alternate walks from u
to v of length 2..e are enumerated; their label sequences are the
*descriptors*. Distinct descriptors are partitioned into train/valid/
test, which makes the splits inductive: an evaluation query can only be
resolved by composing rules in a combination never seen in training.

An instance embeds one resolution path in a noisy neighborhood sampled
by bounded BFS, with any path shorter than the resolution path pruned
away, so the query distance equals the descriptor length. Each emitted
instance is certified by the symbolic resolver before it enters the
dataset.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field

from .errors import ConfigError, DegenerateWorldError
from .resolver import resolve_descriptor, validate_instance
from .rules import RelationId, RuleSet
from .seeds import derive_seed
from .worldgraph import GenConfig, NodeId, WorldGraph

SPLIT_NAMES = ("train", "valid", "test")
MAX_WALKS_PER_EDGE = 10_000
MAX_INSTANCE_ATTEMPTS = 50


@dataclass(frozen=True)
class DescriptorPair:
    """One world-graph edge together with an alternate walk resolving it."""

    edge: tuple[NodeId, RelationId, NodeId]
    descriptor: tuple[RelationId, ...]
    path: tuple[NodeId, ...]  # representative walk, first in DFS order


@dataclass
class DescriptorCollection:
    pairs: list[DescriptorPair]
    truncated_edges: int = 0

    def distinct_descriptors(self) -> list[tuple[RelationId, ...]]:
        """Distinct label sequences in first-appearance order."""
        seen: dict[tuple[RelationId, ...], None] = {}
        for pair in self.pairs:
            seen.setdefault(pair.descriptor, None)
        return list(seen)


@dataclass(frozen=True)
class Instance:
    """A single relation-prediction query graph.

    Node ids are dense per instance (0..n-1, in order of first
    appearance along the resolution path, then the noise edges).
    """

    edges: tuple[tuple[NodeId, RelationId, NodeId], ...]
    source: NodeId
    sink: NodeId
    target: RelationId
    resolution_path: tuple[NodeId, ...]
    descriptor: tuple[RelationId, ...]
    split: str

    @property
    def node_count(self) -> int:
        nodes = {self.source, self.sink}
        for u, _, v in self.edges:
            nodes.add(u)
            nodes.add(v)
        return len(nodes)


@dataclass
class WorldDataset:
    """All certified instances of one world, grouped by split."""

    world_id: int
    instances: dict[str, list[Instance]]
    max_walk_len: int
    sampling_info: dict = field(default_factory=dict)
    rules: RuleSet | None = None  # the world's rule subset

    def all_instances(self) -> list[Instance]:
        return [inst for split in SPLIT_NAMES for inst in self.instances[split]]


def collect_descriptors(
    g: WorldGraph, e: int, max_walks_per_edge: int = MAX_WALKS_PER_EDGE
) -> DescriptorCollection:
    """Enumerate alternate walks for every edge of the world graph.

    Walks are simple, directed, of length 2..e, and enumerated in
    deterministic depth-first order (successors sorted). Identical
    (edge, descriptor) combinations are deduplicated keeping the first
    walk found. Enumeration per source stops once every outgoing edge
    hit ``max_walks_per_edge`` walks; affected edges are counted in
    ``truncated_edges``.
    """
    if e < 2:
        raise ConfigError(f"max walk length must be at least 2, got {e}")
    adj: dict[NodeId, list[tuple[NodeId, RelationId]]] = {}
    for (u, v), r in g.edges.items():
        adj.setdefault(u, []).append((v, r))
    for nbrs in adj.values():
        nbrs.sort()

    by_edge: dict[
        tuple[NodeId, RelationId, NodeId], dict[tuple[RelationId, ...], tuple[NodeId, ...]]
    ] = {(u, r, v): {} for (u, v), r in g.edges.items()}
    targets_of: dict[NodeId, dict[NodeId, RelationId]] = {}
    for (u, v), r in g.edges.items():
        targets_of.setdefault(u, {})[v] = r

    truncated: set[tuple[NodeId, RelationId, NodeId]] = set()

    for source, targets in targets_of.items():
        walk_counts = {v: 0 for v in targets}
        open_targets = set(targets)
        path_nodes = [source]
        path_labels: list[RelationId] = []
        visited = {source}

        def walk(node: int) -> None:
            if not open_targets:
                return
            depth = len(path_labels)
            for v, r in adj.get(node, ()):
                if not open_targets:
                    return
                length = depth + 1
                if v in targets and length >= 2 and v in open_targets:
                    walk_counts[v] += 1
                    if walk_counts[v] > max_walks_per_edge:
                        truncated.add((source, targets[v], v))
                        open_targets.discard(v)
                    else:
                        edge = (source, targets[v], v)
                        descriptor = tuple(path_labels) + (r,)
                        by_edge[edge].setdefault(
                            descriptor, tuple(path_nodes) + (v,)
                        )
                if v not in visited and length < e:
                    visited.add(v)
                    path_nodes.append(v)
                    path_labels.append(r)
                    walk(v)
                    path_labels.pop()
                    path_nodes.pop()
                    visited.remove(v)

        walk(source)

    pairs = [
        DescriptorPair(edge=edge, descriptor=descriptor, path=path)
        for edge, walks in by_edge.items()
        for descriptor, path in walks.items()
    ]
    return DescriptorCollection(pairs=pairs, truncated_edges=len(truncated))


def split_descriptors(
    pairs: list[DescriptorPair],
    fractions: tuple[float, float, float],
    rng: random.Random,
) -> dict[tuple[RelationId, ...], str]:
    """Partition distinct descriptor values into train/valid/test.

    Sizes follow largest-remainder rounding of the fractions, with every
    split guaranteed at least one descriptor. Instances always inherit
    the split of their descriptor, which keeps the splits inductive.
    """
    if any(f <= 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise ConfigError("split fractions must be positive and sum to 1")
    seen: dict[tuple[RelationId, ...], None] = {}
    for pair in pairs:
        seen.setdefault(pair.descriptor, None)
    descriptors = list(seen)
    if len(descriptors) < len(SPLIT_NAMES):
        raise DegenerateWorldError(
            f"only {len(descriptors)} descriptors, cannot populate all splits"
        )
    rng.shuffle(descriptors)
    sizes = _largest_remainder(len(descriptors), fractions)
    assignment: dict[tuple[RelationId, ...], str] = {}
    start = 0
    for name, size in zip(SPLIT_NAMES, sizes):
        for descriptor in descriptors[start : start + size]:
            assignment[descriptor] = name
        start += size
    return assignment


def _largest_remainder(n: int, fractions: tuple[float, ...]) -> list[int]:
    raw = [n * f for f in fractions]
    sizes = [math.floor(x) for x in raw]
    order = sorted(range(len(raw)), key=lambda i: (-(raw[i] - sizes[i]), i))
    for i in range(n - sum(sizes)):
        sizes[order[i % len(order)]] += 1
    # every split must hold at least one item
    for i, size in enumerate(sizes):
        while sizes[i] == 0:
            donor = max(range(len(sizes)), key=lambda j: sizes[j])
            sizes[donor] -= 1
            sizes[i] += 1
    return sizes


def sample_instance(
    g: WorldGraph,
    pair: DescriptorPair,
    cfg: GenConfig,
    rng: random.Random,
    split: str = "train",
    adjacency: dict[NodeId, list[tuple[NodeId, RelationId, NodeId]]] | None = None,
) -> Instance:
    """Embed the resolution path in a BFS-sampled noisy neighborhood.

    Neighbor edges join with probability ``noise_gamma ** depth`` up to
    ``noise_depth`` levels from each path node. The direct (u, v) edge
    is dropped, then noise edges creating a path shorter than the
    resolution path are deleted newest-first until the query distance
    equals the descriptor length. Resolution edges are never deleted.
    """
    source, target, sink = pair.edge
    path = pair.path
    if adjacency is None:
        adjacency = incident_adjacency(g)

    edges: dict[tuple[NodeId, NodeId], RelationId] = {}
    for a, b in zip(path, path[1:]):
        edges[(a, b)] = g.edges[(a, b)]
    path_edge_keys = set(edges)
    noise_order: list[tuple[NodeId, NodeId]] = []

    for anchor in path:
        frontier = [anchor]
        for depth in range(1, cfg.noise_depth + 1):
            p = cfg.noise_gamma**depth
            next_frontier: list[NodeId] = []
            for node in frontier:
                for u, r, v in adjacency.get(node, ()):
                    if (u, v) in edges:
                        continue
                    if rng.random() < p:
                        edges[(u, v)] = r
                        noise_order.append((u, v))
                        next_frontier.append(v if u == node else u)
            frontier = next_frontier

    # the direct edge can only have entered as noise: the resolution
    # path has length >= 2, so (source, sink) is never one of its edges
    if (source, sink) in edges:
        edges.pop((source, sink))
        noise_order.remove((source, sink))

    _remove_shortcuts(edges, noise_order, source, sink, len(pair.descriptor))

    final_edges = [(a, edges[(a, b)], b) for a, b in zip(path, path[1:])]
    final_edges.extend((u, edges[(u, v)], v) for u, v in noise_order if (u, v) in edges)

    renumber: dict[NodeId, int] = {}
    for node in path:
        renumber.setdefault(node, len(renumber))
    for u, _, v in final_edges:
        renumber.setdefault(u, len(renumber))
        renumber.setdefault(v, len(renumber))

    return Instance(
        edges=tuple((renumber[u], r, renumber[v]) for u, r, v in final_edges),
        source=renumber[source],
        sink=renumber[sink],
        target=target,
        resolution_path=tuple(renumber[n] for n in path),
        descriptor=pair.descriptor,
        split=split,
    )


def incident_adjacency(
    g: WorldGraph,
) -> dict[NodeId, list[tuple[NodeId, RelationId, NodeId]]]:
    """Node -> incident edges in both directions, sorted for determinism."""
    adj: dict[NodeId, list[tuple[NodeId, RelationId, NodeId]]] = {}
    for (u, v), r in g.edges.items():
        adj.setdefault(u, []).append((u, r, v))
        adj.setdefault(v, []).append((u, r, v))
    for edges in adj.values():
        edges.sort()
    return adj


def _remove_shortcuts(
    edges: dict[tuple[NodeId, NodeId], RelationId],
    noise_order: list[tuple[NodeId, NodeId]],
    source: NodeId,
    sink: NodeId,
    resolution_len: int,
) -> None:
    """Delete newest offending noise edge until distance(u, v) = |descriptor|."""
    insertion = {key: i for i, key in enumerate(noise_order)}
    while True:
        path = _shortest_path(edges, source, sink)
        assert path is not None, "resolution path edges are never deleted"
        if len(path) - 1 >= resolution_len:
            return
        offending = [
            (a, b) for a, b in zip(path, path[1:]) if (a, b) in insertion
        ]
        assert offending, "a shorter path cannot consist of resolution edges only"
        newest = max(offending, key=insertion.__getitem__)
        del edges[newest]


def _shortest_path(
    edges: dict[tuple[NodeId, NodeId], RelationId], source: NodeId, sink: NodeId
) -> list[NodeId] | None:
    out: dict[NodeId, list[NodeId]] = {}
    for u, v in edges:
        out.setdefault(u, []).append(v)
    for nbrs in out.values():
        nbrs.sort()
    parent = {source: source}
    frontier = [source]
    while frontier:
        next_frontier: list[NodeId] = []
        for node in frontier:
            for v in out.get(node, ()):
                if v not in parent:
                    parent[v] = node
                    if v == sink:
                        path = [v]
                        while path[-1] != source:
                            path.append(parent[path[-1]])
                        return path[::-1]
                    next_frontier.append(v)
        frontier = next_frontier
    return None


def usable_pairs(
    rules: RuleSet, collection: DescriptorCollection
) -> tuple[list[DescriptorPair], dict[str, int]]:
    """Keep pairs whose descriptor resolves exactly to the edge label.

    Returns the kept pairs plus counters for the dropped ones
    (unresolved walks, ambiguous descriptors, mismatched resolutions).
    On a closure-clean world graph only unresolved drops occur.
    """
    cache: dict[tuple[RelationId, ...], frozenset[RelationId]] = {}
    kept: list[DescriptorPair] = []
    counts = {"unresolved": 0, "ambiguous": 0, "mismatched": 0}
    for pair in collection.pairs:
        resolved = cache.get(pair.descriptor)
        if resolved is None:
            resolved = cache[pair.descriptor] = resolve_descriptor(
                rules, pair.descriptor
            )
        if not resolved:
            counts["unresolved"] += 1
        elif len(resolved) > 1:
            counts["ambiguous"] += 1
        elif pair.edge[1] not in resolved:
            counts["mismatched"] += 1
        else:
            kept.append(pair)
    return kept, counts


def build_dataset(
    g: WorldGraph,
    rules: RuleSet,
    cfg: GenConfig,
    rng: random.Random,
    world_id: int = 0,
) -> WorldDataset:
    """Sample and certify a full per-world dataset.

    Descriptors are sampled with replacement within each split's pool
    (distinct noise draws differentiate repeated descriptors) until the
    configured per-split instance counts are reached. Every instance
    must pass resolver validation; failures are resampled with a fresh
    sub-seed up to a bounded number of attempts.
    """
    collection = collect_descriptors(g, cfg.max_walk_len)
    kept, drop_counts = usable_pairs(rules, collection)
    assignment = split_descriptors(kept, cfg.split_fractions, rng)

    pools: dict[str, dict[tuple[RelationId, ...], list[DescriptorPair]]] = {
        name: {} for name in SPLIT_NAMES
    }
    for pair in kept:
        split = assignment[pair.descriptor]
        pools[split].setdefault(pair.descriptor, []).append(pair)

    adjacency = incident_adjacency(g)
    instances: dict[str, list[Instance]] = {name: [] for name in SPLIT_NAMES}
    resamples = 0
    for split, count in zip(SPLIT_NAMES, cfg.graphs_per_split):
        pool = pools[split]
        if not pool:
            raise DegenerateWorldError(f"world {world_id}: empty {split} pool")
        descriptors = list(pool)
        seeds = [rng.getrandbits(64) for _ in range(count)]
        for index in range(count):
            inst = None
            for attempt in range(MAX_INSTANCE_ATTEMPTS):
                inst_rng = random.Random(derive_seed(seeds[index], attempt))
                descriptor = descriptors[inst_rng.randrange(len(descriptors))]
                candidates = pool[descriptor]
                pair = candidates[inst_rng.randrange(len(candidates))]
                candidate = sample_instance(
                    g, pair, cfg, inst_rng, split=split, adjacency=adjacency
                )
                if validate_instance(rules, candidate).is_valid:
                    inst = candidate
                    break
                resamples += 1
            if inst is None:
                raise DegenerateWorldError(
                    f"world {world_id}: {split} instance {index} failed validation "
                    f"{MAX_INSTANCE_ATTEMPTS} times"
                )
            instances[split].append(inst)

    info = {
        "descriptor_pairs": len(collection.pairs),
        "usable_pairs": len(kept),
        "distinct_descriptors": len(assignment),
        "truncated_edges": collection.truncated_edges,
        "resamples": resamples,
        **drop_counts,
    }
    return WorldDataset(
        world_id=world_id,
        instances=instances,
        max_walk_len=cfg.max_walk_len,
        sampling_info=info,
        rules=rules,
    )
