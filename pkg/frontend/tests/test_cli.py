import json

import pytest

from sarplots.cli import main

from test_figures import GAIN_CSV, IMAGE_CSV, RMSE_CSV


@pytest.fixture
def results(tmp_path):
    (tmp_path / "rmse.csv").write_text(RMSE_CSV)
    (tmp_path / "gain.csv").write_text(GAIN_CSV)
    (tmp_path / "image.csv").write_text(IMAGE_CSV)
    (tmp_path / "notes.txt").write_text("not a csv")
    return tmp_path


def test_spec_file_rendering(results, tmp_path):
    spec = {
        "input_csv": str(results / "rmse.csv"),
        "kind": "rmse-family",
        "output": str(tmp_path / "figs" / "rmse.png"),
        "title": "custom title",
    }
    spec_path = tmp_path / "figure.json"
    spec_path.write_text(json.dumps(spec))
    assert main(["--spec", str(spec_path)]) == 0
    assert (tmp_path / "figs" / "rmse.png").exists()


def test_spec_file_list(results, tmp_path):
    specs = [
        {
            "input_csv": str(results / "rmse.csv"),
            "kind": "rmse-family",
            "output": str(tmp_path / "a.png"),
        },
        {
            "input_csv": str(results / "image.csv"),
            "kind": "image",
            "output": str(tmp_path / "b.svg"),
        },
    ]
    spec_path = tmp_path / "figures.json"
    spec_path.write_text(json.dumps(specs))
    assert main(["--spec", str(spec_path)]) == 0
    assert (tmp_path / "a.png").exists()
    assert (tmp_path / "b.svg").exists()


def test_auto_rendering(results, tmp_path):
    out_dir = tmp_path / "figures"
    assert main(["--auto", str(results), "--out-dir", str(out_dir)]) == 0
    assert sorted(p.name for p in out_dir.glob("*.png")) == [
        "gain.png",
        "image.png",
        "rmse.png",
    ]


def test_auto_svg_format(results, tmp_path):
    out_dir = tmp_path / "figures"
    assert main(["--auto", str(results), "--out-dir", str(out_dir),
                 "--format", "svg"]) == 0
    assert (out_dir / "rmse.svg").exists()


def test_auto_empty_directory(tmp_path):
    empty = tmp_path / "empty"
    empty.mkdir()
    assert main(["--auto", str(empty)]) == 1


def test_schema_mismatch_exit_code(tmp_path):
    bad = tmp_path / "rmse.csv"
    bad.write_text("sweep_value,theta_deg\n1,10\n")
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps({
        "input_csv": str(bad),
        "kind": "rmse-family",
        "output": str(tmp_path / "x.png"),
    }))
    assert main(["--spec", str(spec_path)]) == 2
