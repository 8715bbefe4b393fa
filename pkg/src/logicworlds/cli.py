"""Command-line entry point.

Subcommands::

    logicworlds generate --config cfg.json --out DIR [--seed N] [--workers N] [--world-id N]
    logicworlds validate SUITE_DIR [--world-id N]
    logicworlds solve SUITE_DIR [--world-id N]
    logicworlds stats SUITE_DIR [--accuracy FILE] [--world-id N]

Exit codes: 0 success, 1 validation/generation failure, 2 I/O or config
error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .config import SuiteConfig, load_config
from .dataset_io import _load_json, difficulty_bucket, read_manifest, read_world
from .errors import ConfigError, DegenerateWorldError, GenerationError, SuiteFormatError
from .resolver import symbolic_baseline_solve, validate_instance
from .rules import ruleset_from_dict
from .suite import generate_suite_to_disk

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_CONFIG = 2


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, SuiteFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (GenerationError, DegenerateWorldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logicworlds",
        description="Generate and validate logic-grounded relation prediction benchmarks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a suite onto disk")
    gen.add_argument("--config", type=Path, help="JSON config file (defaults otherwise)")
    gen.add_argument("--seed", type=int, help="override the config seed")
    gen.add_argument("--out", type=Path, help="output directory")
    gen.add_argument("--workers", type=int, default=1, help="parallel world builders")
    gen.add_argument("--world-id", type=int, help="build only this world")
    gen.set_defaults(func=cmd_generate)

    val = sub.add_parser("validate", help="certify every instance of a suite")
    val.add_argument("suite", type=Path)
    val.add_argument("--world-id", type=int, help="restrict to one world")
    val.set_defaults(func=cmd_validate)

    sol = sub.add_parser("solve", help="run the symbolic baseline solver")
    sol.add_argument("suite", type=Path)
    sol.add_argument("--world-id", type=int, help="restrict to one world")
    sol.set_defaults(func=cmd_solve)

    sta = sub.add_parser("stats", help="print per-world statistics")
    sta.add_argument("suite", type=Path)
    sta.add_argument("--accuracy", type=Path, help="JSON accuracy file for difficulty")
    sta.add_argument("--world-id", type=int, help="restrict to one world")
    sta.set_defaults(func=cmd_stats)
    return parser


def cmd_generate(args) -> int:
    config = load_config(args.config) if args.config else SuiteConfig()
    if args.seed is not None:
        config = dataclasses.replace(config, seed=args.seed)
    out = args.out or (Path(config.output_dir) if config.output_dir else None)
    if out is None:
        raise ConfigError("no output directory (--out or config output_dir)")
    world_ids = [args.world_id] if args.world_id is not None else None
    info = generate_suite_to_disk(config, out, workers=args.workers, world_ids=world_ids)

    manifest = read_manifest(Path(out))
    pairs = sum(w["descriptor_pairs"] for w in info.values())
    ambiguous = sum(w["ambiguous"] for w in info.values())
    instances = 0
    for wid in sorted(info):
        stats = _load_json(Path(out) / f"rule_{wid}" / "stats.json")
        instances += sum(stats["instances"].values())
    distinct = [w["distinct_descriptors"] for w in info.values()]
    print(f"rules: {len(manifest['rules']['rules'])}")
    print(f"worlds: {len(info)} of {len(manifest['worlds'])}")
    print(f"instances: {instances}")
    if distinct:
        print(
            f"descriptors: {sum(distinct)} pooled, "
            f"{sum(distinct) / len(distinct):.1f} mean per world"
        )
    rate = ambiguous / pairs if pairs else 0.0
    print(f"descriptor ambiguity rate: {rate:.6f} ({ambiguous}/{pairs})")
    print(f"wrote {out}")
    return EXIT_OK


def _world_ids(manifest: dict, only: int | None) -> list[int]:
    ids = [w["world_id"] for w in manifest["worlds"]]
    if only is not None:
        if only not in ids:
            raise SuiteFormatError(f"world {only} not present in the manifest")
        return [only]
    return ids


def cmd_validate(args) -> int:
    manifest = read_manifest(args.suite)
    totals = {"instances": 0, "valid": 0, "ambiguous": 0, "shortcut_violations": 0}
    per_world = {}
    for wid in _world_ids(manifest, args.world_id):
        rules_doc, _, ds = read_world(args.suite, wid)
        world_rules = ruleset_from_dict(rules_doc)
        counts = {"instances": 0, "valid": 0, "ambiguous": 0, "shortcut_violations": 0}
        for inst in ds.all_instances():
            report = validate_instance(world_rules, inst)
            counts["instances"] += 1
            counts["valid"] += report.is_valid
            counts["ambiguous"] += report.ambiguous
            counts["shortcut_violations"] += not report.shortcut_free
        per_world[f"rule_{wid}"] = counts
        for key in totals:
            totals[key] += counts[key]
    print(json.dumps({**totals, "worlds": per_world}, indent=2, sort_keys=True))
    ok = totals["valid"] == totals["instances"] and totals["ambiguous"] == 0
    return EXIT_OK if ok else EXIT_INVALID


def cmd_solve(args) -> int:
    manifest = read_manifest(args.suite)
    accuracies = []
    for wid in _world_ids(manifest, args.world_id):
        rules_doc, _, ds = read_world(args.suite, wid)
        accuracy = symbolic_baseline_solve(ruleset_from_dict(rules_doc), ds)
        if accuracy is None:
            print(f"rule_{wid} no-instances")
            continue
        accuracies.append(accuracy)
        print(f"rule_{wid} {accuracy:.3f}")
    if accuracies:
        print(f"aggregate {sum(accuracies) / len(accuracies):.3f}")
    return EXIT_OK


def cmd_stats(args) -> int:
    manifest = read_manifest(args.suite)
    scores = _load_accuracy(args.accuracy) if args.accuracy else None
    header = ["World", "Split", "NC", "ND", "ARL", "AN", "AE"]
    if scores is not None:
        header.append("D")
    rows = []
    agg = {"NC": [], "ND": [], "ARL": [], "AN": [], "AE": []}
    for wid in _world_ids(manifest, args.world_id):
        doc = _load_json(args.suite / f"rule_{wid}" / "stats.json")
        row = [
            f"rule_{wid}",
            doc["split"],
            str(doc["num_classes"]),
            str(doc["num_descriptors"]),
            f"{doc['avg_resolution_length']:.2f}",
            f"{doc['avg_nodes']:.3f}",
            f"{doc['avg_edges']:.3f}",
        ]
        agg["NC"].append(doc["num_classes"])
        agg["ND"].append(doc["num_descriptors"])
        agg["ARL"].append(doc["avg_resolution_length"])
        agg["AN"].append(doc["avg_nodes"])
        agg["AE"].append(doc["avg_edges"])
        if scores is not None:
            acc = scores.get(wid)
            row.append(difficulty_bucket(acc).label if acc is not None else "-")
        rows.append(row)
    if agg["NC"]:
        agg_row = [
            "AGG",
            "",
            f"{sum(agg['NC']) / len(agg['NC']):.2f}",
            f"{sum(agg['ND']) / len(agg['ND']):.2f}",
            f"{sum(agg['ARL']) / len(agg['ARL']):.2f}",
            f"{sum(agg['AN']) / len(agg['AN']):.2f}",
            f"{sum(agg['AE']) / len(agg['AE']):.2f}",
        ]
        if scores is not None:
            agg_row.append("")
        rows.append(agg_row)
    _print_table(header, rows)
    return EXIT_OK


def _load_accuracy(path: Path) -> dict[int, float]:
    doc = _load_json(path)
    scores = {}
    try:
        for key, value in doc.items():
            scores[int(key.removeprefix("rule_"))] = float(value)
    except (AttributeError, ValueError) as exc:
        raise ConfigError(f"{path}: accuracy file must map world names to floats ({exc})")
    return scores


def _print_table(header: list[str], rows: list[list[str]]) -> None:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    line = "  ".join(h.ljust(w) for h, w in zip(header, widths))
    print(line)
    print("-" * len(line))
    for row in rows:
        print("  ".join(cell.ljust(w) for cell, w in zip(row, widths)))


if __name__ == "__main__":
    sys.exit(main())
