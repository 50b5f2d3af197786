import json

import pytest
from click.testing import CliRunner

from sway.cli import main


@pytest.fixture
def env(tmp_path, monkeypatch):
    monkeypatch.setenv("SWAY_DATA_DIR", str(tmp_path / "data"))
    monkeypatch.delenv("SWAY_API_KEY", raising=False)
    return tmp_path


def run(*args):
    result = CliRunner().invoke(main, list(args))
    assert result.exit_code == 0, result.output
    return result.output


def test_cli_full_walkthrough(env, flowers_svg, grow_prompt):
    svg_path = env / "chart.svg"
    svg_path.write_text(flowers_svg)

    session_id = run("new", str(svg_path)).strip()
    assert session_id

    out = run("prompt", session_id, grow_prompt)
    assert "version 1 created with 2 clip(s)" in out

    out = run("coord", session_id, "1", "0", "--mode", "layout-radius",
              "--center", "0.5", "0.5")
    assert "layout-radius" in out

    out = run("timing", session_id, "1", "0", "--delay", "100", "--duration", "900")
    assert "delay=100.0" in out

    out_path = env / "program.json"
    run("export", session_id, "1", "--flavor", "program", "-o", str(out_path))
    program = json.loads(out_path.read_text())
    assert program["tracks"][0]["coordination"]["mode"] == "layout-radius"
    assert program["tracks"][0]["delay"] == 100.0

    assert run("check", session_id, "1").strip() == "clean"


def test_cli_manifest_warning(env, flowers_svg, flower_manifest, brighten_prompt):
    svg_path = env / "chart.svg"
    svg_path.write_text(flowers_svg)
    manifest_path = env / "manifest.json"
    manifest_path.write_text(json.dumps(flower_manifest.to_json()))

    session_id = run("new", str(svg_path), "--manifest", str(manifest_path)).strip()
    out = run("prompt", session_id, brighten_prompt)
    assert "warning:" in out
    # advisory only: check exits 0 but surfaces the warning
    out = run("check", session_id, "1")
    assert "warning [fill-color]" in out


def test_cli_export_script_and_baked(env, flowers_svg, grow_prompt):
    svg_path = env / "chart.svg"
    svg_path.write_text(flowers_svg)
    session_id = run("new", str(svg_path)).strip()
    run("prompt", session_id, grow_prompt)

    script_path = env / "anim.mjs"
    run("export", session_id, "1", "--flavor", "script", "-o", str(script_path))
    assert "createAnimation" in script_path.read_text()

    baked_path = env / "baked.json"
    run("export", session_id, "1", "--flavor", "baked", "-o", str(baked_path))
    baked = json.loads(baked_path.read_text())
    assert "@keyframes" in baked["css"]
