"""Per-world statistics, difficulty buckets, extended graphs, suite I/O.

On-disk layout of a suite (all JSON/JSONL, byte-deterministic given the
config and seed):

    <out>/manifest.json        master rules, world list + splits,
                               similarity matrix, resolved config,
                               protocol orderings
    <out>/rule_<id>/rules.json         the world's rule subset
    <out>/rule_<id>/world_graph.json   {"nodes": n, "edges": [[u, r, v], ...]}
    <out>/rule_<id>/{train,valid,test}.jsonl   one instance per line
    <out>/rule_<id>/stats.json         WorldStats + sampling info

Instance lines follow the schema
``{"edges": [[u, r, v], ...], "query": [u, v], "target": r,
"resolution_path": [...], "descriptor": [...], "world_id": n}``
with node ids dense per instance.
"""

from __future__ import annotations

import enum
import json
import shutil
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError, SuiteFormatError
from .rules import RelationId, ruleset_from_dict, ruleset_to_dict
from .sampler import SPLIT_NAMES, Instance, WorldDataset
from .worldgraph import WorldGraph, worldgraph_from_dict, worldgraph_to_dict

EASY_THRESHOLD = 0.70
MEDIUM_THRESHOLD = 0.54

FLOAT_DIGITS = 6  # fixed serialization precision, round-half-even


class Difficulty(enum.IntEnum):
    """World difficulty by solver accuracy; ordering Easy < Medium < Hard."""

    EASY = 0
    MEDIUM = 1
    HARD = 2

    @property
    def label(self) -> str:
        return self.name.capitalize()


def difficulty_bucket(accuracy: float) -> Difficulty:
    """Bucket thresholds: >= 0.70 Easy, >= 0.54 Medium, below Hard."""
    if not 0.0 <= accuracy <= 1.0:
        raise ConfigError(f"accuracy {accuracy} outside [0, 1]")
    if accuracy >= EASY_THRESHOLD:
        return Difficulty.EASY
    if accuracy >= MEDIUM_THRESHOLD:
        return Difficulty.MEDIUM
    return Difficulty.HARD


@dataclass(frozen=True)
class WorldStats:
    """Table-style aggregate columns for one world's dataset."""

    num_classes: int
    num_descriptors: int
    avg_resolution_length: float
    avg_nodes: float
    avg_edges: float
    split: str


def compute_stats(ds: WorldDataset, split: str = "train") -> WorldStats:
    """Aggregate over all instances of the dataset (every split pooled)."""
    instances = ds.all_instances()
    if not instances:
        raise ConfigError("cannot compute statistics of an empty dataset")
    lengths = np.array([len(inst.descriptor) for inst in instances], dtype=float)
    nodes = np.array([inst.node_count for inst in instances], dtype=float)
    edges = np.array([len(inst.edges) for inst in instances], dtype=float)
    return WorldStats(
        num_classes=len({inst.target for inst in instances}),
        num_descriptors=len({inst.descriptor for inst in instances}),
        avg_resolution_length=float(lengths.mean()),
        avg_nodes=float(nodes.mean()),
        avg_edges=float(edges.mean()),
        split=split,
    )


@dataclass(frozen=True)
class ExtendedGraph:
    """Unlabeled graph with one degree-2 edge-node per original edge.

    Original node ids are preserved; edge-nodes get dense fresh ids
    above the largest original id, in input edge order, each carrying
    the relation of its originating edge.
    """

    original_nodes: tuple[int, ...]
    edge_nodes: tuple[int, ...]
    edge_node_labels: tuple[RelationId, ...]
    links: tuple[tuple[int, int], ...]

    @property
    def node_count(self) -> int:
        return len(self.original_nodes) + len(self.edge_nodes)

    @property
    def link_count(self) -> int:
        return len(self.links)


def extend_graph(edges: list[tuple[int, RelationId, int]]) -> ExtendedGraph:
    """Replace every labeled edge by an edge-node linked to its endpoints."""
    originals = sorted({n for u, _, v in edges for n in (u, v)})
    next_id = max(originals) + 1 if originals else 0
    edge_nodes = []
    labels = []
    links = []
    for u, r, v in edges:
        edge_nodes.append(next_id)
        labels.append(r)
        links.append((u, next_id))
        links.append((next_id, v))
        next_id += 1
    return ExtendedGraph(
        original_nodes=tuple(originals),
        edge_nodes=tuple(edge_nodes),
        edge_node_labels=tuple(labels),
        links=tuple(links),
    )


def _round(x: float) -> float:
    return round(x, FLOAT_DIGITS)


def _dump_json(path: Path, payload) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _load_json(path: Path):
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise SuiteFormatError(f"{path}: missing suite file")
    except json.JSONDecodeError as exc:
        raise SuiteFormatError(f"{path}:{exc.lineno}: {exc.msg}")


def world_dir_name(world_id: int) -> str:
    return f"rule_{world_id}"


def instance_to_dict(inst: Instance, world_id: int) -> dict:
    return {
        "edges": [[u, r, v] for u, r, v in inst.edges],
        "query": [inst.source, inst.sink],
        "target": inst.target,
        "resolution_path": list(inst.resolution_path),
        "descriptor": list(inst.descriptor),
        "world_id": world_id,
    }


def instance_from_dict(data: dict, split: str) -> Instance:
    return Instance(
        edges=tuple((u, r, v) for u, r, v in data["edges"]),
        source=data["query"][0],
        sink=data["query"][1],
        target=data["target"],
        resolution_path=tuple(data["resolution_path"]),
        descriptor=tuple(data["descriptor"]),
        split=split,
    )


def stats_payload(stats: WorldStats, ds: WorldDataset) -> dict:
    return {
        "world_id": ds.world_id,
        "split": stats.split,
        "num_classes": stats.num_classes,
        "num_descriptors": stats.num_descriptors,
        "avg_resolution_length": _round(stats.avg_resolution_length),
        "avg_nodes": _round(stats.avg_nodes),
        "avg_edges": _round(stats.avg_edges),
        "instances": {name: len(ds.instances[name]) for name in SPLIT_NAMES},
        "max_walk_len": ds.max_walk_len,
        "sampling_info": ds.sampling_info,
    }


def write_world(
    path: Path,
    world_id: int,
    world_rules_doc: dict,
    graph: WorldGraph,
    ds: WorldDataset,
    stats: WorldStats,
) -> None:
    """Write one world directory atomically (temp dir + rename)."""
    final = path / world_dir_name(world_id)
    tmp = path / f".tmp_{world_dir_name(world_id)}"
    if tmp.exists():
        shutil.rmtree(tmp)
    tmp.mkdir(parents=True)
    _dump_json(tmp / "rules.json", world_rules_doc)
    _dump_json(tmp / "world_graph.json", worldgraph_to_dict(graph))
    for split in SPLIT_NAMES:
        lines = [
            json.dumps(
                instance_to_dict(inst, world_id), sort_keys=True, separators=(",", ":")
            )
            for inst in ds.instances[split]
        ]
        (tmp / f"{split}.jsonl").write_text("\n".join(lines) + ("\n" if lines else ""))
    _dump_json(tmp / "stats.json", stats_payload(stats, ds))
    if final.exists():
        shutil.rmtree(final)
    tmp.rename(final)


def read_world(path: Path, world_id: int) -> tuple[dict, WorldGraph, WorldDataset]:
    """Inverse of :func:`write_world`; returns (rules doc, graph, dataset)."""
    world_path = path / world_dir_name(world_id)
    rules_doc = _load_json(world_path / "rules.json")
    graph = worldgraph_from_dict(_load_json(world_path / "world_graph.json"))
    stats_doc = _load_json(world_path / "stats.json")
    instances: dict[str, list[Instance]] = {}
    for split in SPLIT_NAMES:
        file = world_path / f"{split}.jsonl"
        items = []
        try:
            text = file.read_text()
        except FileNotFoundError:
            raise SuiteFormatError(f"{file}: missing split file")
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                items.append(instance_from_dict(json.loads(line), split))
            except (json.JSONDecodeError, KeyError, IndexError) as exc:
                raise SuiteFormatError(f"{file}:{lineno}: bad instance record ({exc})")
        instances[split] = items
    ds = WorldDataset(
        world_id=world_id,
        instances=instances,
        max_walk_len=stats_doc["max_walk_len"],
        sampling_info=stats_doc["sampling_info"],
        rules=ruleset_from_dict(rules_doc),
    )
    return rules_doc, graph, ds


def write_manifest(
    path: Path,
    config_doc: dict,
    rules_doc: dict,
    worlds_doc: list[dict],
    similarity: np.ndarray,
    protocols: dict,
) -> None:
    _dump_json(
        path / "manifest.json",
        {
            "config": config_doc,
            "seed": config_doc["seed"],
            "rules": rules_doc,
            "worlds": worlds_doc,
            "similarity": similarity.tolist(),
            "protocols": protocols,
        },
    )


def read_manifest(path: Path) -> dict:
    manifest = _load_json(path / "manifest.json")
    for key in ("config", "rules", "worlds", "similarity", "protocols"):
        if key not in manifest:
            raise SuiteFormatError(f"{path / 'manifest.json'}: missing key {key!r}")
    return manifest


__all__ = [
    "Difficulty",
    "ExtendedGraph",
    "WorldStats",
    "compute_stats",
    "difficulty_bucket",
    "extend_graph",
    "instance_from_dict",
    "instance_to_dict",
    "read_manifest",
    "read_world",
    "ruleset_from_dict",
    "ruleset_to_dict",
    "stats_payload",
    "world_dir_name",
    "write_manifest",
    "write_world",
]
