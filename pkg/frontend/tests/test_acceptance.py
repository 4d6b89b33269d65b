"""Acceptance: render the five report figures from real egosar CSV outputs.

Requires the `egosar` CLI on PATH (the primary package); skipped otherwise.
Trial counts are kept small: this checks the file interface and styling,
not the statistics.
"""

import shutil
import subprocess

import pytest

from sarplots import FigureSpec, build_figure
from sarplots.cli import main

EGOSAR = shutil.which("egosar")

pytestmark = pytest.mark.skipif(EGOSAR is None, reason="egosar CLI not installed")

BASE_CFG = """
theta_start_deg = 20
theta_stop_deg = 80
theta_step_deg = 20
trials = 8
seed = 5
"""


def _run(args):
    subprocess.run([EGOSAR, *args], check=True, capture_output=True)


@pytest.fixture(scope="module")
def results(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("results")
    cfg = tmp / "base.cfg"
    cfg.write_text(BASE_CFG)
    sweep_cfg = tmp / "speed.cfg"
    sweep_cfg.write_text(BASE_CFG + "sweep.name = speed_mps\nsweep.values = 3,10,25\n")
    image_cfg = tmp / "image.cfg"
    image_cfg.write_text(BASE_CFG + "num_frames = 15\n")

    _run(["rmse", "--config", str(cfg), "--out", str(tmp / "rmse.csv")])
    _run(["rmse", "--config", str(sweep_cfg), "--out", str(tmp / "rmse_speed.csv")])
    _run(["gain", "--config", str(cfg), "--out", str(tmp / "gain.csv")])
    _run(["resolution", "--config", str(cfg), "--apertures", "1,2.5,3",
          "--out", str(tmp / "resolution.csv")])
    _run(["image", "--config", str(image_cfg), "--range-step-m", "0.2",
          "--angle-step-deg", "0.1", "--out", str(tmp / "image.csv")])
    return tmp


def test_five_figures_render(results, tmp_path):
    out_dir = tmp_path / "figures"
    assert main(["--auto", str(results), "--out-dir", str(out_dir)]) == 0
    rendered = sorted(p.name for p in out_dir.glob("*.png"))
    assert rendered == [
        "gain.png",
        "image.png",
        "resolution.png",
        "rmse.png",
        "rmse_speed.png",
    ]


def test_simulation_solid_analysis_dashed(results):
    fig = build_figure(
        FigureSpec(str(results / "rmse_speed.csv"), "rmse-family", "unused.png")
    )
    lines = fig.axes[0].get_lines()
    solid = [l for l in lines if l.get_linestyle() == "-"]
    dashed = [l for l in lines if l.get_linestyle() == "--"]
    assert len(solid) == 3 and len(dashed) == 3
    assert all("simulation" in l.get_label() for l in solid)
    assert all("analysis" in l.get_label() for l in dashed)
