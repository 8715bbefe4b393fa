"""Whole-suite orchestration: generate, write, read.

A suite is the full artifact: master rules, the overlapping world
partition with train/valid/test world designations, one WorldGraph and
one certified dataset per world, plus the manifest tying them together.
Everything is a pure function of (config, seed); worlds get independent
sub-seeds, so they can be built in any order or in parallel.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import seeds
from .config import SuiteConfig, config_from_dict
from .dataset_io import (
    compute_stats,
    read_manifest,
    read_world,
    ruleset_from_dict,
    ruleset_to_dict,
    write_manifest,
    write_world,
)
from .errors import ConfigError
from .partition import RulePartition, WorldSpec, partition_rules, similarity_matrix
from .rules import RuleSet, generate_alphabet, generate_rules
from .sampler import WorldDataset, build_dataset
from .worldgraph import WorldGraph, generate_world_graph


@dataclass
class Suite:
    config: SuiteConfig
    rules: RuleSet  # master rules in partitioned order
    worlds: list[WorldSpec]
    world_splits: dict[int, str]
    graphs: dict[int, WorldGraph] = field(default_factory=dict)
    datasets: dict[int, WorldDataset] = field(default_factory=dict)

    def partition(self) -> RulePartition:
        return RulePartition(
            rules=self.rules,
            worlds=self.worlds,
            w=self.config.rules_per_world,
            s=self.config.stride,
        )


def plan_suite(config: SuiteConfig) -> Suite:
    """Build rules and the world partition; no per-world generation yet."""
    alphabet = generate_alphabet(
        config.num_relations,
        seeds.rng_for(config.seed, seeds.TAG_ALPHABET),
        config.symmetric_fraction,
    )
    master = generate_rules(alphabet, seeds.rng_for(config.seed, seeds.TAG_RULES))
    partition = partition_rules(
        master,
        config.rules_per_world,
        config.stride,
        seeds.rng_for(config.seed, seeds.TAG_PARTITION),
    )
    world_splits = assign_world_splits(
        [w.world_id for w in partition.worlds], config.valid_worlds, config.test_worlds
    )
    return Suite(
        config=config,
        rules=partition.rules,
        worlds=partition.worlds,
        world_splits=world_splits,
    )


def assign_world_splits(
    world_ids: list[int], valid_worlds: int, test_worlds: int
) -> dict[int, str]:
    """Designate worlds train/valid/test in id order: trailing ids become
    the test worlds, the ones before them the validation worlds."""
    if valid_worlds + test_worlds >= len(world_ids):
        raise ConfigError(
            f"{len(world_ids)} worlds cannot hold {valid_worlds} valid "
            f"+ {test_worlds} test worlds and still train"
        )
    splits = {}
    cut_test = len(world_ids) - test_worlds
    cut_valid = cut_test - valid_worlds
    for pos, wid in enumerate(world_ids):
        splits[wid] = "train" if pos < cut_valid else ("valid" if pos < cut_test else "test")
    return splits


def build_world(
    suite: Suite, world: WorldSpec
) -> tuple[WorldGraph, WorldDataset]:
    """Generate one world's graph and dataset from its derived sub-seeds."""
    config = suite.config
    graph = generate_world_graph(
        world,
        suite.rules,
        config.gen,
        seeds.rng_for(config.seed, seeds.TAG_WORLDGRAPH, world.world_id),
    )
    world_rules = suite.partition().world_rules(world)
    dataset = build_dataset(
        graph,
        world_rules,
        config.gen,
        seeds.rng_for(config.seed, seeds.TAG_INSTANCE, world.world_id),
        world_id=world.world_id,
    )
    return graph, dataset


def generate_suite(config: SuiteConfig, world_ids: list[int] | None = None) -> Suite:
    """Generate the whole suite in memory (optionally a subset of worlds)."""
    suite = plan_suite(config)
    for world in suite.worlds:
        if world_ids is not None and world.world_id not in world_ids:
            continue
        graph, dataset = build_world(suite, world)
        suite.graphs[world.world_id] = graph
        suite.datasets[world.world_id] = dataset
    return suite


def protocol_orderings(suite: Suite) -> dict:
    """Manifest orderings for the supervised/multitask/continual setups."""
    ids = [w.world_id for w in suite.worlds]
    train = [wid for wid in ids if suite.world_splits[wid] == "train"]
    heldout = [wid for wid in ids if suite.world_splits[wid] != "train"]
    return {
        "supervised": ids,
        "multitask": {"train": train, "heldout": heldout},
        "continual": train,
    }


def write_suite(path: str | Path, suite: Suite) -> None:
    """Serialize the suite; inverse of :func:`read_suite`."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    partition = suite.partition()
    for world in suite.worlds:
        wid = world.world_id
        if wid not in suite.datasets:
            continue
        ds = suite.datasets[wid]
        stats = compute_stats(ds, split=suite.world_splits[wid])
        write_world(
            out,
            wid,
            ruleset_to_dict(partition.world_rules(world)),
            suite.graphs[wid],
            ds,
            stats,
        )
    worlds_doc = [
        {
            "world_id": w.world_id,
            "rule_indices": list(w.rule_indices),
            "split": suite.world_splits[w.world_id],
        }
        for w in suite.worlds
    ]
    write_manifest(
        out,
        suite.config.to_dict(),
        ruleset_to_dict(suite.rules),
        worlds_doc,
        similarity_matrix(suite.worlds),
        protocol_orderings(suite),
    )


def read_suite(path: str | Path) -> Suite:
    """Load a suite directory back into memory."""
    root = Path(path)
    manifest = read_manifest(root)
    config = config_from_dict(
        {k: v for k, v in manifest["config"].items() if v is not None}
    )
    rules = ruleset_from_dict(manifest["rules"])
    worlds = [
        WorldSpec(world_id=w["world_id"], rule_indices=tuple(w["rule_indices"]))
        for w in manifest["worlds"]
    ]
    world_splits = {w["world_id"]: w["split"] for w in manifest["worlds"]}
    suite = Suite(
        config=config, rules=rules, worlds=worlds, world_splits=world_splits
    )
    for world in worlds:
        wid = world.world_id
        world_dir = root / f"rule_{wid}"
        if not world_dir.exists():
            continue
        _, graph, dataset = read_world(root, wid)
        suite.graphs[wid] = graph
        suite.datasets[wid] = dataset
    return suite


def _build_and_write(args: tuple) -> tuple[int, dict]:
    suite, world, out = args
    graph, dataset = build_world(suite, world)
    stats = compute_stats(dataset, split=suite.world_splits[world.world_id])
    write_world(
        Path(out),
        world.world_id,
        ruleset_to_dict(suite.partition().world_rules(world)),
        graph,
        dataset,
        stats,
    )
    return world.world_id, dataset.sampling_info


def generate_suite_to_disk(
    config: SuiteConfig,
    out: str | Path,
    workers: int = 1,
    world_ids: list[int] | None = None,
) -> dict[int, dict]:
    """Generate straight to disk, world by world (optionally in parallel).

    Returns per-world sampling info keyed by world_id. The result and
    the bytes on disk are independent of ``workers``.
    """
    suite = plan_suite(config)
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    selected = [
        w for w in suite.worlds if world_ids is None or w.world_id in world_ids
    ]
    tasks = [(suite, world, str(out)) for world in selected]
    info: dict[int, dict] = {}
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for wid, sampling_info in pool.map(_build_and_write, tasks):
                info[wid] = sampling_info
    else:
        for task in tasks:
            wid, sampling_info = _build_and_write(task)
            info[wid] = sampling_info
    worlds_doc = [
        {
            "world_id": w.world_id,
            "rule_indices": list(w.rule_indices),
            "split": suite.world_splits[w.world_id],
        }
        for w in suite.worlds
    ]
    write_manifest(
        out,
        config.to_dict(),
        ruleset_to_dict(suite.rules),
        worlds_doc,
        similarity_matrix(suite.worlds),
        protocol_orderings(suite),
    )
    return info
