import pathlib
import shutil

import pytest

from gldpc_figures.cli import main
from gldpc_figures.recipes import SchemaError, read_csv, recipe_for
from gldpc_figures.render import render

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "golden"


@pytest.mark.parametrize("fid", ["fig3a", "fig4a", "fig11"])
def test_renders_from_golden(fid, tmp_path):
    out = render(recipe_for(fid, GOLDEN), tmp_path)
    assert out.exists() and out.stat().st_size > 1000
    assert out.name == f"{fid}.png"


@pytest.mark.parametrize("fid", ["fig3a", "fig4a", "fig11"])
def test_render_deterministic(fid, tmp_path):
    a = render(recipe_for(fid, GOLDEN), tmp_path / "a")
    b = render(recipe_for(fid, GOLDEN), tmp_path / "b")
    assert a.read_bytes() == b.read_bytes()


def test_cli_end_to_end(tmp_path):
    assert main(["--recipe", "fig4a", "--in", str(GOLDEN), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig4a.png").exists()


def test_unknown_recipe(tmp_path):
    assert main(["--recipe", "fig99", "--in", str(GOLDEN), "--out", str(tmp_path)]) == 2


def test_missing_column_names_it(tmp_path):
    bad = tmp_path / "fig4a_sweep.csv"
    bad.write_text("# schema=x\nnu,rate\n0.1,0.5\n")
    with pytest.raises(SchemaError, match="hamming_bound_rate"):
        render(recipe_for("fig4a", tmp_path), tmp_path)


def test_empty_grid_rejected(tmp_path):
    for name in ("fig3a_ppd.csv", "fig3a_mlpd.csv"):
        src = (GOLDEN / name).read_text().strip().split("\n")
        (tmp_path / name).write_text("\n".join(ln for ln in src if ln.startswith(("#", "epsilon"))) + "\n")
    with pytest.raises(SchemaError, match="empty grid"):
        render(recipe_for("fig3a", tmp_path), tmp_path / "out")
    assert not (tmp_path / "out" / "fig3a.png").exists()  # no empty image


def test_missing_input_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        render(recipe_for("fig3a", tmp_path), tmp_path)


def test_read_csv_roundtrip():
    cols = read_csv(GOLDEN / "fig4a_sweep.csv", ("nu", "rate"))
    assert len(cols["nu"]) == 11
    assert cols["nu"][0] == 0.0 and cols["nu"][-1] == 1.0


def test_schema_headers_present():
    text = (GOLDEN / "fig11_beta03.csv").read_text()
    assert text.startswith("# schema=gldpc/dg-sweep/v1")
    assert "# config=" in text
