import os
import pathlib

import pytest

import braggsim

SRC = pathlib.Path(os.environ.get("BRAGGSIM_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))


def test_paper_stopband():
    g = braggsim.paper_grating()
    assert g.total_length() == pytest.approx(1.6e-3)
    center = braggsim.stopband_center(g)
    assert 1544e-9 <= center <= 1547e-9
    spec = braggsim.transmission_spectrum(g, center, 4e-9, 401)
    assert min(spec["transmission_db"]) == pytest.approx(-19.14, abs=0.2)


def test_design_inversion():
    assert abs(braggsim.design_periods(19.14, 2.414, 3.4985e-3) - 2000) <= 1
    with pytest.raises(ValueError):
        braggsim.design_periods(3.0, 2.414, 3.4985e-3)


def test_uniform_guide_idler_power():
    g = braggsim.paper_grating()
    g.delta_n = 0.0
    p = braggsim.paper_nonlinear()
    got = braggsim.stimulated_idler_power(g, p, 1545e-9, 1560e-9)
    expected = (p.gamma * p.pump_power * 1.6e-3) ** 2 * p.signal_power
    assert got == pytest.approx(expected, rel=1e-6)


def test_spont_from_stim_units():
    power, rate = braggsim.spont_rate(1e-3, 1560e-9, 1e-3, 2 * 3.141592653589793 * 10e9)
    assert power == pytest.approx(8.0e-9, rel=5e-3)
    assert rate == pytest.approx(6.283e10, rel=1e-3)


def test_config_roundtrip_and_cli(tmp_path):
    text = (SRC / "configs" / "paper.json").read_text()
    once = braggsim.roundtrip_config(text)
    assert braggsim.roundtrip_config(once) == once
    out = braggsim.run(str(SRC / "configs" / "paper.json"), "design", str(tmp_path / "d"))
    assert out["exit_code"] == 0
    assert out["messages"][-1].startswith("N=")
    again = braggsim.run(str(SRC / "configs" / "paper.json"), "design", str(tmp_path / "d"))
    assert again["exit_code"] == 4
    missing = braggsim.run(str(tmp_path / "nope.json"), "design", str(tmp_path / "e"))
    assert missing["exit_code"] == 4
    assert "nope.json" in missing["error"]


def test_configs_follow_the_schema():
    jsonschema = pytest.importorskip("jsonschema")
    import json

    schema = json.loads((SRC / "configs" / "schema.json").read_text())
    paper = json.loads((SRC / "configs" / "paper.json").read_text())
    jsonschema.validate(paper, schema)
    # the serialized form of the loaded config validates too
    jsonschema.validate(json.loads(braggsim.roundtrip_config((SRC / "configs" / "paper.json").read_text())), schema)
    paper["structure"]["period"] = 320
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(paper, schema)
