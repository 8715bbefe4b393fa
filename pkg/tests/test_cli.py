import json

import pytest

from logicworlds.cli import main

from conftest import tiny_suite_config


@pytest.fixture(scope="module")
def config_file(tmp_path_factory):
    path = tmp_path_factory.mktemp("cfg") / "config.json"
    path.write_text(json.dumps(tiny_suite_config().to_dict()))
    return path


@pytest.fixture(scope="module")
def suite_dir(config_file, tmp_path_factory):
    out = tmp_path_factory.mktemp("cli") / "suite"
    rc = main(["generate", "--config", str(config_file), "--out", str(out)])
    assert rc == 0
    return out


def corrupt_one_target(suite_dir, tmp_path):
    import shutil

    broken = tmp_path / "corrupt"
    shutil.copytree(suite_dir, broken)
    target_file = broken / "rule_0" / "train.jsonl"
    lines = target_file.read_text().splitlines()
    record = json.loads(lines[0])
    record["target"] = (record["target"] + 1) % 8
    lines[0] = json.dumps(record, sort_keys=True, separators=(",", ":"))
    target_file.write_text("\n".join(lines) + "\n")
    return broken


class TestGenerate:
    def test_summary_output(self, config_file, tmp_path, capsys):
        rc = main(["generate", "--config", str(config_file), "--out", str(tmp_path / "s")])
        out = capsys.readouterr().out
        assert rc == 0
        assert "rules:" in out and "worlds:" in out and "instances:" in out
        assert "ambiguity rate" in out

    def test_missing_out_is_config_error(self, config_file):
        assert main(["generate", "--config", str(config_file)]) == 2

    def test_bad_config_file(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text('{"no_such_key": 1}')
        assert main(["generate", "--config", str(bad), "--out", str(tmp_path / "x")]) == 2

    def test_single_world_filter(self, config_file, tmp_path):
        out = tmp_path / "one"
        rc = main(
            ["generate", "--config", str(config_file), "--out", str(out), "--world-id", "2"]
        )
        assert rc == 0
        assert (out / "rule_2").exists()
        assert not (out / "rule_0").exists()
        # manifest still lists the full partition
        manifest = json.loads((out / "manifest.json").read_text())
        assert len(manifest["worlds"]) > 1

    def test_seed_override_changes_bytes(self, config_file, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(["generate", "--config", str(config_file), "--out", str(a)]) == 0
        assert (
            main(["generate", "--config", str(config_file), "--out", str(b), "--seed", "99"])
            == 0
        )
        assert (a / "manifest.json").read_text() != (b / "manifest.json").read_text()


class TestValidate:
    def test_fresh_suite_passes(self, suite_dir, capsys):
        rc = main(["validate", str(suite_dir)])
        report = json.loads(capsys.readouterr().out)
        assert rc == 0
        assert report["valid"] == report["instances"]
        assert report["ambiguous"] == 0
        assert report["shortcut_violations"] == 0

    def test_report_totals_match_stats(self, suite_dir, capsys):
        main(["validate", str(suite_dir)])
        report = json.loads(capsys.readouterr().out)
        manifest = json.loads((suite_dir / "manifest.json").read_text())
        expected = 0
        for world in manifest["worlds"]:
            stats = json.loads(
                (suite_dir / f"rule_{world['world_id']}" / "stats.json").read_text()
            )
            expected += sum(stats["instances"].values())
        assert report["instances"] == expected

    def test_corrupted_target_fails(self, suite_dir, tmp_path, capsys):
        broken = corrupt_one_target(suite_dir, tmp_path)
        rc = main(["validate", str(broken)])
        report = json.loads(capsys.readouterr().out)
        assert rc == 1
        assert report["instances"] - report["valid"] == 1
        assert report["worlds"]["rule_0"]["valid"] == report["worlds"]["rule_0"]["instances"] - 1

    def test_unreadable_suite(self, tmp_path):
        assert main(["validate", str(tmp_path / "nowhere")]) == 2


class TestSolve:
    def test_perfect_accuracy_rows(self, suite_dir, capsys):
        rc = main(["solve", str(suite_dir)])
        out = capsys.readouterr().out.strip().splitlines()
        assert rc == 0
        manifest = json.loads((suite_dir / "manifest.json").read_text())
        world_rows = [l for l in out if l.startswith("rule_")]
        assert len(world_rows) == len(manifest["worlds"])
        assert all(row.endswith("1.000") for row in world_rows)
        assert out[-1] == "aggregate 1.000"

    def test_corrupted_target_lowers_accuracy(self, suite_dir, tmp_path, capsys):
        broken = corrupt_one_target(suite_dir, tmp_path)
        main(["solve", str(broken), "--world-id", "0"])
        out = capsys.readouterr().out.strip().splitlines()
        accuracy = float(out[0].split()[1])
        stats = json.loads((broken / "rule_0" / "stats.json").read_text())
        total = sum(stats["instances"].values())
        assert accuracy == pytest.approx((total - 1) / total, abs=5e-4)

    def test_unreadable_suite(self, tmp_path):
        assert main(["solve", str(tmp_path / "missing")]) == 2


class TestStats:
    def test_row_per_world_plus_aggregate(self, suite_dir, capsys):
        rc = main(["stats", str(suite_dir)])
        out = capsys.readouterr().out.strip().splitlines()
        assert rc == 0
        manifest = json.loads((suite_dir / "manifest.json").read_text())
        rows = [l for l in out if l.startswith("rule_")]
        assert len(rows) == len(manifest["worlds"])
        assert out[-1].startswith("AGG")

    def test_difficulty_column_from_accuracy_file(self, suite_dir, tmp_path, capsys):
        scores = {"rule_9": 0.758, "rule_54": 0.638, "rule_0": 0.481}
        acc = tmp_path / "acc.json"
        acc.write_text(json.dumps(scores))
        rc = main(["stats", str(suite_dir), "--accuracy", str(acc)])
        out = capsys.readouterr().out
        assert rc == 0
        row0 = next(l for l in out.splitlines() if l.startswith("rule_0 "))
        assert row0.rstrip().endswith("Hard")

    def test_stats_rows_match_stats_files(self, suite_dir, capsys):
        main(["stats", str(suite_dir), "--world-id", "1"])
        out = capsys.readouterr().out
        row = next(l for l in out.splitlines() if l.startswith("rule_1"))
        doc = json.loads((suite_dir / "rule_1" / "stats.json").read_text())
        cells = row.split()
        assert cells[2] == str(doc["num_classes"])
        assert cells[3] == str(doc["num_descriptors"])
        assert float(cells[4]) == pytest.approx(doc["avg_resolution_length"], abs=5e-3)


class TestDeterminism:
    def test_identical_trees_same_seed(self, config_file, tmp_path):
        a, b = tmp_path / "t1", tmp_path / "t2"
        assert main(["generate", "--config", str(config_file), "--out", str(a)]) == 0
        assert main(["generate", "--config", str(config_file), "--out", str(b)]) == 0
        files_a = sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file())
        files_b = sorted(p.relative_to(b) for p in b.rglob("*") if p.is_file())
        assert files_a == files_b
        for rel in files_a:
            assert (a / rel).read_bytes() == (b / rel).read_bytes(), str(rel)

    def test_workers_do_not_change_bytes(self, config_file, tmp_path):
        a, b = tmp_path / "w1", tmp_path / "w2"
        assert main(["generate", "--config", str(config_file), "--out", str(a)]) == 0
        assert (
            main(
                ["generate", "--config", str(config_file), "--out", str(b), "--workers", "2"]
            )
            == 0
        )
        for rel in sorted(p.relative_to(a) for p in a.rglob("*") if p.is_file()):
            assert (a / rel).read_bytes() == (b / rel).read_bytes(), str(rel)
