"""WorldGraph generation by recursive rule expansion.

Each world grows a labeled multigraph by repeatedly rewriting an edge
(u, r_t, v) into (u, r_i, y), (y, r_j, v) for a rule [r_i, r_j] => r_t
and a fresh node y. Rule choice is weighted, with weights decaying by
``gamma`` per use so every rule of the world gets exercised; a cycle
completes when all rules have fired at least once since the last reset.

Every mutation is recorded in an expansion trace. Replaying the trace
(:func:`replay_trace`) must reproduce the edge map exactly; tests rely
on this as the generation oracle.

Rule grammars are not confluent, so an expansion could derive a second
label for a pair that already carries an edge. The generator maintains
the derivation fixpoint incrementally and rejects such expansions
outright; an independent from-scratch forward chaining pass
(:func:`closure_check`) re-verifies the finished graph, and a graph
that still conflicts is regenerated from a perturbed sub-seed.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field

from .errors import ConfigError, DegenerateWorldError, GenerationError
from .partition import WorldSpec
from .rules import Diagnostic, RelationId, RuleSet, select_rules

NodeId = int

# Trace event tags
SEED_FRESH = "seed-fresh"
SEED_EXISTING = "seed-existing"
EXPAND = "expand"

EDGE_CAP_PER_RULE = 50
MAX_GENERATION_ATTEMPTS = 5


@dataclass(frozen=True)
class GenConfig:
    """Knobs for world-graph growth and instance sampling."""

    gamma: float = 0.8
    max_expansions: int = 5
    cycles: int = 2
    node_pool: int = 500
    max_walk_len: int = 10
    graphs_per_split: tuple[int, int, int] = (5000, 1000, 1000)
    noise_gamma: float = 0.8
    noise_depth: int = 2
    split_fractions: tuple[float, float, float] = (0.7, 0.15, 0.15)

    def __post_init__(self) -> None:
        if not 0 < self.gamma <= 1:
            raise ConfigError("gamma must lie in (0, 1]")
        if not 0 <= self.noise_gamma <= 1:
            raise ConfigError("noise_gamma must lie in [0, 1]")
        if self.max_expansions < 2:
            raise ConfigError("max_expansions must be at least 2")
        if self.cycles < 1 or self.node_pool < 3 or self.noise_depth < 1:
            raise ConfigError("cycles, node_pool and noise_depth must be positive")
        if self.max_walk_len < 2:
            raise ConfigError("max_walk_len must be at least 2")
        if len(self.graphs_per_split) != 3 or any(n <= 0 for n in self.graphs_per_split):
            raise ConfigError("graphs_per_split needs three positive counts")
        if len(self.split_fractions) != 3 or any(f <= 0 for f in self.split_fractions):
            raise ConfigError("split_fractions needs three positive values")
        if abs(sum(self.split_fractions) - 1.0) > 1e-9:
            raise ConfigError("split_fractions must sum to 1")


@dataclass
class WorldGraph:
    """Labeled graph with dense node ids and at most one edge per ordered pair."""

    node_count: int
    edges: dict[tuple[NodeId, NodeId], RelationId]
    trace: list[tuple] = field(default_factory=list, compare=False, repr=False)

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def edge_list(self) -> list[tuple[NodeId, RelationId, NodeId]]:
        return [(u, r, v) for (u, v), r in self.edges.items()]


def replay_trace(trace: list[tuple]) -> dict[tuple[NodeId, NodeId], RelationId]:
    """Rebuild the edge map from the expansion trace (generation oracle)."""
    edges: dict[tuple[NodeId, NodeId], RelationId] = {}
    for event in trace:
        tag = event[0]
        if tag == SEED_FRESH:
            _, u, r, v = event
            edges[(u, v)] = r
        elif tag == EXPAND:
            _, u, r_i, r_j, v, y = event
            edges[(u, y)] = r_i
            edges[(y, v)] = r_j
        elif tag != SEED_EXISTING:
            raise ValueError(f"unknown trace event {tag!r}")
    return edges


def rule_usage(trace: list[tuple], world_rules: RuleSet) -> dict[int, int]:
    """Lifetime use count per rule index, read off the trace.

    Expansion events carry the rule body, which identifies the rule by
    body-uniqueness.
    """
    by_body = {rule.body: idx for idx, rule in enumerate(world_rules.rules)}
    counts = {idx: 0 for idx in range(len(world_rules.rules))}
    for event in trace:
        if event[0] == EXPAND:
            _, _, r_i, r_j, _, _ = event
            counts[by_body[(r_i, r_j)]] += 1
    return counts


def generate_world_graph(
    world: WorldSpec,
    rules: RuleSet,
    cfg: GenConfig,
    rng: random.Random,
    max_attempts: int = MAX_GENERATION_ATTEMPTS,
) -> WorldGraph:
    """Grow a WorldGraph for one world, regenerating on closure conflicts.

    Each attempt runs the expansion process with a sub-seed drawn from
    ``rng``; an attempt whose derivations contradict one of its own edge
    labels is thrown away. Raises GenerationError when every attempt
    conflicts.
    """
    world_rules = select_rules(rules, list(world.rule_indices))
    if not world_rules.rules:
        raise DegenerateWorldError(f"world {world.world_id} has no rules")
    for _ in range(max_attempts):
        graph = _expand(world_rules, cfg, random.Random(rng.getrandbits(64)))
        conflicts = [
            d for d in closure_check(graph, world_rules) if d.kind == "edge-conflict"
        ]
        if not conflicts:
            return graph
    raise GenerationError(
        f"world {world.world_id}: closure conflicts persisted "
        f"across {max_attempts} generation attempts"
    )


class _ClosureState:
    """Incrementally maintained derivation fixpoint over the growing graph.

    Keeping the closure current lets the generator reject an expansion
    whose derived labels would contradict an edge label, instead of
    discovering the conflict after the fact. Rule sets are not confluent
    in general, so such rejections are the only way to guarantee a
    conflict-free graph for every world.
    """

    def __init__(self, rules: RuleSet) -> None:
        self._lookup = rules._by_body
        self.labels: dict[tuple[NodeId, NodeId], set[RelationId]] = {}
        self._by_src: dict[NodeId, list[tuple[NodeId, RelationId]]] = {}
        self._by_dst: dict[NodeId, list[tuple[NodeId, RelationId]]] = {}
        self.edge_labels: dict[tuple[NodeId, NodeId], RelationId] = {}

    def try_add_edges(self, new_edges: list[tuple[NodeId, RelationId, NodeId]]) -> bool:
        """Add edges and propagate; on any conflict roll back and refuse."""
        added: list[tuple[NodeId, RelationId, NodeId]] = []
        registered: list[tuple[NodeId, NodeId]] = []
        queue: deque[tuple[NodeId, RelationId, NodeId]] = deque()
        lookup = self._lookup

        def add_fact(u: NodeId, r: RelationId, v: NodeId) -> bool:
            cell = self.labels.setdefault((u, v), set())
            if r in cell:
                return True
            edge_label = self.edge_labels.get((u, v))
            if edge_label is not None and edge_label != r:
                return False
            cell.add(r)
            self._by_src.setdefault(u, []).append((v, r))
            self._by_dst.setdefault(v, []).append((u, r))
            added.append((u, r, v))
            queue.append((u, r, v))
            return True

        ok = True
        for u, r, v in new_edges:
            self.edge_labels[(u, v)] = r
            registered.append((u, v))
            existing = self.labels.get((u, v), ())
            if any(label != r for label in existing):
                ok = False
                break
            if not add_fact(u, r, v):
                ok = False
                break
        while ok and queue:
            u, a, x = queue.popleft()
            for v, b in list(self._by_src.get(x, ())):
                rule = lookup.get((a, b))
                if rule is not None and not add_fact(u, rule.head, v):
                    ok = False
                    break
            if not ok:
                break
            for w, c in list(self._by_dst.get(u, ())):
                rule = lookup.get((c, a))
                if rule is not None and not add_fact(w, rule.head, x):
                    ok = False
                    break
        if ok:
            return True
        for u, r, v in reversed(added):
            self.labels[(u, v)].discard(r)
            self._by_src[u].remove((v, r))
            self._by_dst[v].remove((u, r))
        for key in registered:
            del self.edge_labels[key]
        return False


_EXPANSION_RETRIES = 10
_MAX_STALLED_CYCLES = 25


def _expand(world_rules: RuleSet, cfg: GenConfig, rng: random.Random) -> WorldGraph:
    rules = world_rules.rules
    heads = list(world_rules.head_symbols())
    by_head: dict[RelationId, list[int]] = {}
    for idx, rule in enumerate(rules):
        by_head.setdefault(rule.head, []).append(idx)

    edges: dict[tuple[NodeId, NodeId], RelationId] = {}
    trace: list[tuple] = []
    closure = _ClosureState(world_rules)
    weights = [1.0] * len(rules)
    used = [0] * len(rules)
    completed = 0
    next_node = 0
    edge_cap = EDGE_CAP_PER_RULE * len(rules)
    stalled_cycles = 0

    def fresh() -> NodeId:
        nonlocal next_node
        next_node += 1
        return next_node - 1

    def remaining() -> int:
        return cfg.node_pool - next_node

    def expandable(items: list[tuple[NodeId, RelationId, NodeId]]):
        return [e for e in items if e[1] in by_head]

    def expand_edge(u: NodeId, r_t: RelationId, v: NodeId) -> bool:
        """One rewrite of (u, r_t, v); refused if it would break closure."""
        nonlocal next_node
        rule_ids = by_head[r_t]
        idx = rng.choices(rule_ids, weights=[weights[i] for i in rule_ids])[0]
        r_i, r_j = rules[idx].body
        y = next_node  # allocate only on success
        if not closure.try_add_edges([(u, r_i, y), (y, r_j, v)]):
            return False
        next_node += 1
        edges[(u, y)] = r_i
        edges[(y, v)] = r_j
        trace.append((EXPAND, u, r_i, r_j, v, y))
        cycle_edges.extend([(u, r_i, y), (y, r_j, v)])
        weights[idx] *= cfg.gamma
        used[idx] += 1
        return True

    while remaining() > 0 and completed < cfg.cycles and len(edges) < edge_cap:
        steps = rng.randint(2, cfg.max_expansions)
        cycle_edges: list[tuple[NodeId, RelationId, NodeId]] = []
        nodes_before = next_node
        for step in range(steps):
            if remaining() < 1:
                break
            if step == 0:
                existing = expandable([(u, r, v) for (u, v), r in edges.items()])
                use_fresh = remaining() >= 3 and (not existing or rng.random() < 0.5)
                if use_fresh:
                    # head choice follows the decayed rule weights, so
                    # heads whose rules are still unused get seeded first
                    head_weights = [sum(weights[i] for i in by_head[h]) for h in heads]
                    r_t = rng.choices(heads, weights=head_weights)[0]
                    u, v = fresh(), fresh()
                    # a fresh disconnected pair can neither collide with an
                    # existing edge nor contradict any derivation
                    accepted = closure.try_add_edges([(u, r_t, v)])
                    assert accepted
                    edges[(u, v)] = r_t
                    trace.append((SEED_FRESH, u, r_t, v))
                elif existing:
                    u, r_t, v = existing[rng.randrange(len(existing))]
                    trace.append((SEED_EXISTING, u, r_t, v))
                else:
                    break
                cycle_edges.append((u, r_t, v))
            expanded = False
            for _ in range(_EXPANSION_RETRIES):
                candidates = expandable(cycle_edges)
                if not candidates:
                    break
                cand_weights = [
                    sum(weights[i] for i in by_head[e[1]]) for e in candidates
                ]
                u, r_t, v = rng.choices(candidates, weights=cand_weights)[0]
                if expand_edge(u, r_t, v):
                    expanded = True
                    break
            if not expanded and step > 0:
                break
        if used and min(used) >= 1:
            completed += 1
            weights = [1.0] * len(rules)
            used = [0] * len(rules)
        if next_node == nodes_before:
            # an unproductive cycle can be bad luck (every expansion
            # draw rejected); only a long run of them means a dead end
            stalled_cycles += 1
            if stalled_cycles >= _MAX_STALLED_CYCLES:
                break
        else:
            stalled_cycles = 0

    return WorldGraph(node_count=next_node, edges=edges, trace=trace)


def derive_closure(
    graph: WorldGraph, rules: RuleSet
) -> dict[tuple[NodeId, NodeId], set[RelationId]]:
    """Forward-chain all rules over the graph to a label fixpoint."""
    lookup = rules._by_body
    labels: dict[tuple[NodeId, NodeId], set[RelationId]] = {}
    by_src: dict[NodeId, list[tuple[NodeId, RelationId]]] = {}
    by_dst: dict[NodeId, list[tuple[NodeId, RelationId]]] = {}
    queue: deque[tuple[NodeId, RelationId, NodeId]] = deque()

    def add(u: NodeId, r: RelationId, v: NodeId) -> None:
        cell = labels.setdefault((u, v), set())
        if r in cell:
            return
        cell.add(r)
        by_src.setdefault(u, []).append((v, r))
        by_dst.setdefault(v, []).append((u, r))
        queue.append((u, r, v))

    for (u, v), r in graph.edges.items():
        add(u, r, v)
    while queue:
        u, a, x = queue.popleft()
        for v, b in list(by_src.get(x, ())):
            rule = lookup.get((a, b))
            if rule is not None:
                add(u, rule.head, v)
        for w, c in list(by_dst.get(u, ())):
            rule = lookup.get((c, a))
            if rule is not None:
                add(w, rule.head, x)
    return labels


def closure_check(graph: WorldGraph, rules: RuleSet) -> list[Diagnostic]:
    """Diagnostics from the derivation fixpoint.

    ``edge-conflict``: a pair carrying an edge derives a second label.
    ``derivation-ambiguity``: an edgeless pair derives two or more labels.
    Only edge conflicts gate regeneration; ambiguity counts are reported
    through suite statistics.
    """
    labels = derive_closure(graph, rules)
    diagnostics: list[Diagnostic] = []
    for (u, v), derived in sorted(labels.items()):
        edge_label = graph.edges.get((u, v))
        if edge_label is not None:
            extras = sorted(derived - {edge_label})
            if extras:
                diagnostics.append(
                    Diagnostic(
                        kind="edge-conflict",
                        detail=f"pair ({u}, {v}) has edge {edge_label} but derives {extras}",
                    )
                )
        elif len(derived) > 1:
            diagnostics.append(
                Diagnostic(
                    kind="derivation-ambiguity",
                    detail=f"pair ({u}, {v}) derives {sorted(derived)}",
                )
            )
    return diagnostics


def worldgraph_to_dict(graph: WorldGraph) -> dict:
    return {"nodes": graph.node_count, "edges": [[u, r, v] for (u, v), r in graph.edges.items()]}


def worldgraph_from_dict(data: dict) -> WorldGraph:
    edges = {(u, v): r for u, r, v in data["edges"]}
    return WorldGraph(node_count=data["nodes"], edges=edges)
