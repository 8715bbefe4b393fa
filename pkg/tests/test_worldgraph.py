import random

import pytest

from logicworlds.errors import ConfigError, DegenerateWorldError
from logicworlds.partition import WorldSpec
from logicworlds.rules import generate_alphabet, generate_rules
from logicworlds.worldgraph import (
    EXPAND,
    SEED_FRESH,
    GenConfig,
    WorldGraph,
    closure_check,
    generate_world_graph,
    replay_trace,
    rule_usage,
    worldgraph_from_dict,
    worldgraph_to_dict,
)

from conftest import make_rules


def world_over(rules):
    return WorldSpec(world_id=0, rule_indices=tuple(range(len(rules.rules))))


def generated_sample(seed, k=12, cfg=None):
    rng = random.Random(seed)
    alpha = generate_alphabet(k, rng)
    rules = generate_rules(alpha, rng)
    cfg = cfg or GenConfig(node_pool=200)
    graph = generate_world_graph(world_over(rules), rules, cfg, rng)
    return rules, cfg, graph


class TestTraceReplay:
    def test_replay_reproduces_edge_map(self):
        for seed in range(8):
            _, _, graph = generated_sample(seed)
            assert replay_trace(graph.trace) == graph.edges

    def test_no_pair_ever_relabeled(self):
        for seed in range(8):
            _, _, graph = generated_sample(seed)
            seen = {}
            for event in graph.trace:
                added = []
                if event[0] == SEED_FRESH:
                    _, u, r, v = event
                    added = [((u, v), r)]
                elif event[0] == EXPAND:
                    _, u, r_i, r_j, v, y = event
                    added = [((u, y), r_i), ((y, v), r_j)]
                for key, r in added:
                    assert seen.setdefault(key, r) == r
            assert len(seen) == len(graph.edges)


class TestSingleRuleExpansion:
    def test_seed_edge_expands_into_labeled_chain(self):
        rules = make_rules([((0, 2), 3)], size=4)
        cfg = GenConfig(node_pool=10, cycles=1, max_expansions=2)
        graph = generate_world_graph(world_over(rules), rules, cfg, random.Random(0))
        seeds = [e for e in graph.trace if e[0] == SEED_FRESH]
        expands = [e for e in graph.trace if e[0] == EXPAND]
        assert seeds and expands
        _, a, r, b = seeds[0]
        assert r == 3  # the only head symbol
        _, u, r_i, r_j, v, c = expands[0]
        assert (u, r_i, r_j, v) == (a, 0, 2, b)
        assert graph.edges[(a, c)] == 0 and graph.edges[(c, b)] == 2
        # the walk a -> c -> b reads off the rule body
        assert [graph.edges[(a, c)], graph.edges[(c, b)]] == [0, 2]


class TestGeneration:
    def test_deterministic_given_seed(self):
        a = generated_sample(3)[2]
        b = generated_sample(3)[2]
        assert a.edges == b.edges and a.node_count == b.node_count

    def test_every_rule_used_at_least_cycles_times(self):
        rules, cfg, graph = generated_sample(1, k=10, cfg=GenConfig(node_pool=400))
        usage = rule_usage(graph.trace, rules)
        assert min(usage.values()) >= cfg.cycles

    def test_edge_cap_bounds_growth(self):
        rules, cfg, graph = generated_sample(2)
        assert len(graph.edges) <= 50 * len(rules.rules)

    def test_no_closure_conflicts_after_generation(self):
        for seed in range(6):
            rules, _, graph = generated_sample(seed, k=14)
            kinds = [d.kind for d in closure_check(graph, rules)]
            assert "edge-conflict" not in kinds

    def test_empty_world_rejected(self):
        rules = make_rules([], size=3)
        with pytest.raises(DegenerateWorldError):
            generate_world_graph(
                WorldSpec(0, ()), rules, GenConfig(node_pool=10), random.Random(0)
            )


class TestClosureCheck:
    def test_consistent_chain_has_no_diagnostics(self):
        rules = make_rules([((0, 2), 3)], size=4)
        graph = WorldGraph(node_count=3, edges={(0, 2): 3, (0, 1): 0, (1, 2): 2})
        assert closure_check(graph, rules) == []

    def test_injected_conflicting_edge(self):
        rules = make_rules([((0, 2), 3)], size=4)
        graph = WorldGraph(node_count=3, edges={(0, 1): 0, (1, 2): 2, (0, 2): 1})
        diags = closure_check(graph, rules)
        assert [d.kind for d in diags] == ["edge-conflict"]
        assert "derives [3]" in diags[0].detail

    def test_ambiguous_edgeless_pair_reported(self):
        rules = make_rules([((0, 0), 2), ((1, 1), 3)], size=4)
        graph = WorldGraph(
            node_count=4,
            edges={(0, 1): 0, (1, 2): 0, (0, 3): 1, (3, 2): 1},
        )
        diags = closure_check(graph, rules)
        assert [d.kind for d in diags] == ["derivation-ambiguity"]


class TestGenConfig:
    def test_rejects_bad_decay(self):
        with pytest.raises(ConfigError):
            GenConfig(gamma=0.0)
        with pytest.raises(ConfigError):
            GenConfig(noise_gamma=1.5)

    def test_zero_noise_allowed(self):
        assert GenConfig(noise_gamma=0.0).noise_gamma == 0.0

    def test_rejects_bad_counts(self):
        with pytest.raises(ConfigError):
            GenConfig(max_expansions=1)
        with pytest.raises(ConfigError):
            GenConfig(graphs_per_split=(5, 0, 5))
        with pytest.raises(ConfigError):
            GenConfig(split_fractions=(0.5, 0.5, 0.5))


class TestSerialization:
    def test_round_trip(self):
        _, _, graph = generated_sample(4)
        doc = worldgraph_to_dict(graph)
        assert set(doc) == {"nodes", "edges"}
        assert worldgraph_from_dict(doc) == WorldGraph(graph.node_count, graph.edges)
