import math
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from weilheights import cli
from weilheights.config import ExperimentConfig, dump_config, parse_config, rational
from weilheights.enumeration import CountSeries
from weilheights.errors import ConfigError
from weilheights.experiments import PRESETS, Artifacts, parse_ladder, preset_config
from weilheights.fitting import fit_asymptotic
from weilheights.outputs import (SVG_H, SVG_W, emit_outputs, ledger_diff, ledger_text, read_series_csv,
                                 series_csv, loglog_svg)


# -- config ----------------------------------------------------------------------

@pytest.mark.parametrize("name", sorted(PRESETS))
def test_preset_round_trip(name):
    cfg = preset_config(name)
    text = dump_config(cfg)
    again = parse_config(text)
    assert again == cfg
    assert dump_config(again) == text


def test_defaults_and_rationals():
    cfg = parse_config("")
    assert cfg == ExperimentConfig()
    assert rational("3/2") == Fraction(3, 2) and rational(4) == 4
    with pytest.raises(ConfigError):
        rational(0.5)
    with pytest.raises(ConfigError):
        rational("1/0")


@pytest.mark.parametrize("text", [
    "kind: schanuel\nbogus: 1\n",
    "ladder: {b0: 1, colour: red}\n",
    "kind: nonsense\n",
    "metric: {kind: taxicab}\n",
    "fit: {mode: fix_a, a: 2.5}\n",
    "ladder: {b0: 0}\n",
    "ladder: [1, 2]\n",
    "kind: [unclosed\n",
])
def test_bad_configs_rejected(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_parse_ladder():
    assert parse_ladder("1:2:6") == [1, 2, 4, 8, 16, 32]
    with pytest.raises(ConfigError):
        parse_ladder("1:2")


# -- outputs ---------------------------------------------------------------------

def test_series_csv_round_trip():
    s = CountSeries([1, 2, 4], [4, 8, 24])
    text = series_csv(s)
    assert text == "B,count,elapsed_ms\n1,4,\n2,8,\n4,24,\n"
    back = read_series_csv(text)
    assert back.ladder == s.ladder and back.counts == s.counts
    assert series_csv(s) == text


def test_svg_geometry():
    ladder = [10 * 2 ** k for k in range(12)]
    s = CountSeries(ladder, [int(7 * B * B * math.log(B)) for B in ladder])
    fit = fit_asymptotic(s, "free")
    svg = loglog_svg(s, fit, "demo")
    root = ET.fromstring(svg)
    assert root.get("width") == str(SVG_W) and root.get("height") == str(SVG_H)
    assert root.get("viewBox") == f"0 0 {SVG_W} {SVG_H}"
    polys = [el for el in root.iter() if el.tag.endswith("polyline")]
    assert len(polys) == 2
    for pl in polys:
        for pair in pl.get("points").split():
            x, y = map(float, pair.split(","))
            assert 0 <= x <= SVG_W and 0 <= y <= SVG_H
    assert loglog_svg(s, fit, "demo") == svg


def test_ledger_text_and_diff():
    rows = [("alpha", Fraction(1, 2)), ("beta", 1), ("tau", 2.5)]
    text = ledger_text("demo", rows, {"seed": 0})
    assert text == "# demo\nalpha = 1/2\nbeta = 1\ntau = 2.5\nmeta.seed = 0\n"
    d = ledger_diff(rows, [("alpha", 1), ("beta", 1), ("tau", 0)])
    assert [r[0] for r in d] == ["alpha", "beta", "tau"]
    assert d[0][4] == 0.5 and d[1][4] == 1 and math.isnan(d[2][4])


def test_emit_outputs(tmp_path):
    paths = emit_outputs({"b.txt": "2\n", "a.txt": "1\n"}, tmp_path / "o", "x_")
    assert [p.rsplit("/", 1)[1] for p in paths] == ["x_a.txt", "x_b.txt"]
    assert (tmp_path / "o" / "x_b.txt").read_text() == "2\n"


# -- cli -------------------------------------------------------------------------

def test_enumerate_ladder(capsys):
    assert cli.main(["enumerate", "--ladder", "1:2:6"]) == 0
    out = capsys.readouterr().out
    rows = [line.split(",")[:2] for line in out.splitlines()[2:]]
    assert rows == [["1", "4"], ["2", "8"], ["4", "24"], ["8", "88"], ["16", "320"], ["32", "1296"]]


def test_enumerate_gaussian_config(tmp_path, capsys):
    cfg = tmp_path / "g.yaml"
    cfg.write_text('kind: enumerate\nfield: {name: "Q(i)"}\nladder: {b0: 1, factor: "2", rungs: 3}\n')
    assert cli.main(["enumerate", "--config", str(cfg)]) == 0
    assert "1,6," in capsys.readouterr().out


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.yaml"
    bad.write_text("kind: schanuel\nunknown_block: 3\n")
    assert cli.main(["enumerate", "--config", str(bad)]) == 2
    bad.write_text("kind: [oops\n")
    assert cli.main(["enumerate", "--config", str(bad)]) == 2
    assert cli.main(["enumerate", "--config", str(tmp_path / "missing.yaml")]) == 2
    assert cli.main(["enumerate", "--ladder", "nonsense"]) == 2
    assert cli.main(["enumerate", "--preset", "schanuel-p1", "--config", str(bad)]) == 2
    assert cli.main(["no-such-command"]) == 2
    real = tmp_path / "real.yaml"
    real.write_text('kind: enumerate\nfield: {name: custom, minpoly: [-2, 0, 1]}\n'
                    'ladder: {b0: 1, factor: "2", rungs: 3}\n')
    assert cli.main(["enumerate", "--config", str(real)]) == 3
    capsys.readouterr()


def test_check_commands_report_mismatch(monkeypatch, capsys):
    def fake_tau(cfg):
        return Artifacts({"tamagawa.txt": "x\n"}, {"relative_difference": 0.5}, False)

    def fake_counts(cfg, ladder=None):
        return Artifacts({"restriction.txt": "x\n"}, {"ladder": [1, 2], "F_counts": [6, 10],
                                                      "E_counts": [6, 11]}, False)

    monkeypatch.setattr(cli, "run_tamagawa_check", fake_tau)
    monkeypatch.setattr(cli, "run_restriction_check", fake_counts)
    assert cli.main(["check-tamagawa"]) == 4
    assert cli.main(["check-restriction"]) == 4
    capsys.readouterr()


def test_check_restriction_small(capsys):
    assert cli.main(["check-restriction", "--ladder", "1:2:5"]) == 0
    assert "all_equal = true" in capsys.readouterr().out


def test_fit_input(tmp_path, capsys):
    ladder = [10 * 2 ** k for k in range(12)]
    s = CountSeries(ladder, [round(3 * B ** 2 * math.log(B)) for B in ladder])
    src = tmp_path / "s.csv"
    src.write_text(series_csv(s))
    assert cli.main(["fit", "--input", str(src), "--mode", "free"]) == 0
    out = capsys.readouterr().out
    vals = dict(line.split(" = ") for line in out.splitlines() if " = " in line)
    assert abs(float(vals["a"]) - 2) < 1e-3 and abs(float(vals["b"]) - 2) < 1e-2
    src.write_text(series_csv(CountSeries([1, 2, 4, 8], [4, 8, 24, 88])))
    assert cli.main(["fit", "--input", str(src)]) == 3
    capsys.readouterr()


def test_restrict_dump(tmp_path, capsys):
    cfg = tmp_path / "circle.yaml"
    cfg.write_text('kind: enumerate\nfield: {name: "Q(i)"}\n'
                   'variety: {ambient: [2], equations: ["x0^2 + x1^2 - x2^2"]}\n')
    assert cli.main(["restrict", "--config", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert out.count("# chart") == 3
    assert "4 variables, 2 equations" in out


def test_out_dir_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a", tmp_path / "b"
    for d in (a, b):
        assert cli.main(["enumerate", "--ladder", "1:3:5", "--out", str(d)]) == 0
    capsys.readouterr()
    assert (a / "series.csv").read_bytes() == (b / "series.csv").read_bytes()
