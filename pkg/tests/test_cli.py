import json

import pytest

from cxrmine.cli import run
from cxrmine.preprocess import GrayImage, load_png, save_png


def synth_dir(tmp_path, n="60", epochs="4", seed="7"):
    out = tmp_path / "tables"
    code = run(
        [
            "synth",
            "--n", n,
            "--epochs", epochs,
            "--seed", seed,
            "--out", str(out),
        ]
    )
    assert code == 0
    return out


class TestSynthCommand:
    def test_writes_conventional_filenames(self, tmp_path, capsys):
        out = synth_dir(tmp_path, epochs="3")
        names = sorted(p.name for p in out.iterdir())
        assert names == [
            "scores_synth_1_combined.csv",
            "scores_synth_2_combined.csv",
            "scores_synth_3_combined.csv",
        ]
        printed = capsys.readouterr().out.splitlines()
        assert printed == [str(out / name) for name in names]

    def test_custom_experiment_name(self, tmp_path, capsys):
        out = tmp_path / "t"
        assert run(
            ["synth", "--n", "10", "--epochs", "1", "--seed", "1",
             "--experiment", "ramp_a", "--out", str(out)]
        ) == 0
        assert (out / "scores_ramp_a_1_combined.csv").exists()

    def test_bad_config_is_data_error(self, tmp_path):
        code = run(
            ["synth", "--n", "0", "--epochs", "1", "--seed", "1",
             "--out", str(tmp_path / "x")]
        )
        assert code == 2


class TestMineCommand:
    def test_end_to_end(self, tmp_path, capsys):
        tables = synth_dir(tmp_path)
        capsys.readouterr()  # discard synth output
        out = tmp_path / "report"
        code = run(
            [
                "mine",
                "--scores", str(tables),
                "--dataset", "combined",
                "--seed", "7",
                "--out", str(out),
            ]
        )
        assert code == 0
        captured = capsys.readouterr()
        # stdout carries exactly the machine-readable summary line
        assert captured.out == "3/4 (75.0%)\n"
        assert (out / "metrics.csv").exists()
        assert (out / "summary.txt").exists()
        header = (out / "metrics.csv").read_text().splitlines()[0]
        assert header.startswith("experiment_id,epoch,dataset,")
        trees = sorted(p.name for p in out.glob("tree_*.json"))
        assert trees == [
            "tree_synth_2_combined.json",
            "tree_synth_3_combined.json",
            "tree_synth_4_combined.json",
        ]

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        tables = synth_dir(tmp_path)
        args = ["mine", "--scores", str(tables), "--dataset", "combined", "--seed", "7"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert run(args + ["--out", str(out_a)]) == 0
        assert run(args + ["--out", str(out_b)]) == 0
        files_a = sorted(p for p in out_a.iterdir())
        files_b = sorted(p for p in out_b.iterdir())
        assert [p.name for p in files_a] == [p.name for p in files_b]
        for pa, pb in zip(files_a, files_b):
            assert pa.read_bytes() == pb.read_bytes()

    def test_explicit_file_list(self, tmp_path, capsys):
        tables = synth_dir(tmp_path, epochs="2")
        capsys.readouterr()
        out = tmp_path / "r"
        code = run(
            [
                "mine",
                "--scores",
                str(tables / "scores_synth_1_combined.csv"),
                str(tables / "scores_synth_2_combined.csv"),
                "--dataset", "combined",
                "--seed", "3",
                "--out", str(out),
            ]
        )
        assert code == 0
        assert len((out / "metrics.csv").read_text().splitlines()) == 3

    def test_bad_row_reported_on_stderr(self, tmp_path, capsys):
        bad = tmp_path / "scores_bad_1_lidc.csv"
        bad.write_text(
            "PatientID,Atelectasis,Effusion,Mass,NoFinding,Nodule,Diagnosis\n"
            "P1,0.1,0.2,0.3,0.4,0.5,9\n"
        )
        code = run(
            ["mine", "--scores", str(bad), "--dataset", "lidc",
             "--seed", "1", "--strict", "--out", str(tmp_path / "o")]
        )
        assert code == 2
        err = capsys.readouterr().err
        assert "row 1" in err

    def test_out_path_under_file_is_io_error(self, tmp_path, capsys):
        tables = synth_dir(tmp_path, epochs="1")
        blocker = tmp_path / "blocker"
        blocker.write_text("x")
        code = run(
            ["mine", "--scores", str(tables), "--dataset", "combined",
             "--seed", "1", "--out", str(blocker / "nested")]
        )
        assert code == 3

    def test_missing_seed_is_usage_error(self, tmp_path, capsys, monkeypatch):
        monkeypatch.delenv("MINER_SEED", raising=False)
        tables = synth_dir(tmp_path, epochs="1")
        code = run(
            ["mine", "--scores", str(tables), "--dataset", "combined",
             "--out", str(tmp_path / "o")]
        )
        assert code == 1

    def test_seed_from_environment(self, tmp_path, capsys, monkeypatch):
        tables = synth_dir(tmp_path)
        capsys.readouterr()
        monkeypatch.setenv("MINER_SEED", "7")
        code = run(
            ["mine", "--scores", str(tables), "--dataset", "combined",
             "--out", str(tmp_path / "env")]
        )
        assert code == 0
        assert capsys.readouterr().out == "3/4 (75.0%)\n"


class TestEvalCommand:
    def test_key_value_output(self, tmp_path, capsys):
        tables = synth_dir(tmp_path)
        capsys.readouterr()
        target = tables / "scores_synth_4_combined.csv"
        code = run(["eval", "--scores", str(target), "--seed", "7"])
        assert code == 0
        lines = capsys.readouterr().out.splitlines()
        pairs = dict(line.split("=", 1) for line in lines)
        assert pairs["experiment"] == "synth"
        assert pairs["epoch"] == "4"
        assert pairs["dataset"] == "combined"
        assert pairs["n_test"] == "12"
        assert pairs["passed"] in {"true", "false"}
        assert set(pairs) >= {"accuracy", "sensitivity", "specificity", "ppv", "fp_rate", "f1"}

    def test_missing_file_is_io_error(self, tmp_path):
        assert run(["eval", "--scores", str(tmp_path / "none.csv"), "--seed", "1"]) == 3

    def test_malformed_row_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "scores_x_1_lidc.csv"
        bad.write_text(
            "PatientID,Atelectasis,Effusion,Mass,NoFinding,Nodule,Diagnosis\n"
            "P1,0.1,0.2,0.3,0.4,oops,1\n"
        )
        assert run(["eval", "--scores", str(bad), "--seed", "1"]) == 2


class TestTreeCommand:
    @pytest.fixture
    def tree_file(self, tmp_path, capsys):
        tables = synth_dir(tmp_path)
        out = tmp_path / "report"
        assert run(
            ["mine", "--scores", str(tmp_path / "tables"), "--dataset", "combined",
             "--seed", "7", "--out", str(out)]
        ) == 0
        capsys.readouterr()
        return next(iter(sorted(out.glob("tree_*.json"))))

    def test_export_dot(self, tree_file, capsys):
        assert run(["tree", "export", "--tree", str(tree_file)]) == 0
        out = capsys.readouterr().out
        assert out.startswith("digraph")

    def test_export_json_round_trips(self, tree_file, capsys):
        assert run(["tree", "export", "--tree", str(tree_file), "--format", "json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["schema"] == "tree/1"

    def test_show_ascii(self, tree_file, capsys):
        assert run(["tree", "show", "--tree", str(tree_file)]) == 0
        out = capsys.readouterr().out
        assert "<=" in out

    def test_corrupt_tree_is_data_error(self, tmp_path):
        bad = tmp_path / "t.json"
        bad.write_text("{not json")
        assert run(["tree", "show", "--tree", str(bad)]) == 2


class TestPrepCommand:
    @pytest.fixture
    def png(self, tmp_path):
        path = tmp_path / "in.png"
        save_png(GrayImage.from_rows([[10, 10, 20], [20, 10, 20]]), path)
        return path

    def test_equalize(self, png, tmp_path):
        out = tmp_path / "eq.png"
        assert run(["prep", "equalize", "--in", str(png), "--out", str(out)]) == 0
        assert load_png(out).pixels.tolist() == [[0, 0, 255], [255, 0, 255]]

    def test_resize(self, png, tmp_path):
        out = tmp_path / "rs.png"
        assert run(
            ["prep", "resize", "--in", str(png), "--out", str(out),
             "--width", "6", "--height", "4"]
        ) == 0
        img = load_png(out)
        assert (img.width, img.height) == (6, 4)

    def test_flip(self, png, tmp_path):
        out = tmp_path / "fl.png"
        assert run(["prep", "flip", "--in", str(png), "--out", str(out)]) == 0
        assert load_png(out).pixels.tolist() == [[20, 10, 10], [20, 10, 20]]

    def test_rotate_expand(self, png, tmp_path):
        out = tmp_path / "rot.png"
        assert run(
            ["prep", "rotate", "--in", str(png), "--out", str(out),
             "--degrees", "90", "--expand"]
        ) == 0
        img = load_png(out)
        assert (img.width, img.height) == (2, 3)

    def test_missing_input_is_io_error(self, tmp_path):
        assert run(
            ["prep", "flip", "--in", str(tmp_path / "none.png"),
             "--out", str(tmp_path / "o.png")]
        ) == 3


class TestUsageErrors:
    def test_no_arguments(self, capsys):
        assert run([]) == 1

    def test_unknown_subcommand(self, capsys):
        assert run(["transmogrify"]) == 1

    def test_unknown_flag(self, capsys):
        assert run(["synth", "--n", "5", "--epochs", "1", "--seed", "1",
                    "--out", "x", "--frobnicate"]) == 1

    def test_usage_text_lands_on_stderr(self, capsys):
        run([])
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "usage" in captured.err.lower()
