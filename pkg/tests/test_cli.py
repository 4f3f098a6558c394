import json
import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from wagoner import cli
from wagoner.acceptance import TIERS
from wagoner.export import COMPLEX_SCHEMA, TABLE_SCHEMA, complex_from_json, table_from_csv


def manifest(out, op):
    with open(os.path.join(out, f"manifest-{op}.json"), encoding="utf-8") as fh:
        return json.load(fh)


def test_pi0_gl33(tmp_path, capsys):
    code = cli.main(["pi0", "--family", "GL", "--n", "3", "--q", "3", "--out", str(tmp_path)])
    assert code == 0
    assert "components=2, index=2, MATCH" in capsys.readouterr().out
    m = manifest(tmp_path, "pi0")
    assert m["verdicts"] == ["components=2, index=2, MATCH"]
    assert m["schema_version"] == 1 and m["config_digest"]


def test_intervals_hexagon_table(capsys):
    code = cli.main(["intervals", "--coxeter-matrix", "1,3;3,1", "--format", "csv"])
    assert code == 0
    header, rows = table_from_csv(capsys.readouterr().out.split("\n", 1)[1])
    assert header == ["alpha", "beta", "kind", "interval"]
    table = {(r[0], r[1]): r[3] for r in rows}
    assert table[("a0", "a2")] == "a0 a1 a2"
    assert table[("a3", "a3")] == "a3"
    assert table[("a4", "a0")] == "a4 a5 a0"
    assert ("a0", "a3") not in table


def test_unknown_operation_is_config_error(capsys):
    assert cli.main(["frobnicate"]) == cli.EXIT_CONFIG
    assert cli.main(["pi0", "--family", "SO", "--n", "3", "--q", "2"]) == cli.EXIT_CONFIG
    assert cli.main(["pi0", "--family", "SL", "--n", "3"]) == cli.EXIT_CONFIG
    assert cli.main(["build", "--complex", "coxeter", "--coxeter-matrix", "1,2;2,1"]) == cli.EXIT_CONFIG


def test_bad_environment_cap(monkeypatch):
    monkeypatch.setenv("WAGONER_TC_CAP", "many")
    assert cli.main(["steinberg", "--family", "SL", "--n", "3", "--q", "2"]) == cli.EXIT_CONFIG


def test_overflow_exit_code(tmp_path):
    code = cli.main(["steinberg", "--family", "SL", "--n", "3", "--q", "2", "--tc-cap", "50",
                     "--out", str(tmp_path)])
    assert code == cli.EXIT_OVERFLOW
    m = manifest(tmp_path, "steinberg")
    assert "overflow" in m["results"]["status"] and m["results"]["cap"] == 50
    assert "orders agree" not in m["verdicts"]


def test_steinberg_agrees(capsys):
    assert cli.main(["steinberg", "--family", "SL", "--n", "3", "--q", "2"]) == 0
    assert "orders agree" in capsys.readouterr().out


def test_side_conditions_flags_sp4(capsys):
    assert cli.main(["side-conditions", "--family", "Sp", "--n", "4", "--q", "2"]) == 0
    out = capsys.readouterr().out
    assert "Co*: FAIL" in out and "720" in out


def test_apartment_dot_is_12_cycle(capsys):
    assert cli.main(["build", "--family", "SL", "--n", "3", "--q", "2", "--complex", "apartment",
                     "--format", "dot"]) == 0
    dot = capsys.readouterr().out.split("\n", 1)[1]
    lines = dot.splitlines()
    assert lines[0].startswith("// schema " + COMPLEX_SCHEMA)
    edges = [ln for ln in lines if "--" in ln]
    assert len(edges) == 12
    degree = {}
    for ln in edges:
        a, b = ln.strip(" ;").split(" -- ")
        degree[a] = degree.get(a, 0) + 1
        degree[b] = degree.get(b, 0) + 1
    assert len(degree) == 12 and set(degree.values()) == {2}


def test_homology_csv(capsys):
    assert cli.main(["homology", "--family", "SL", "--n", "3", "--q", "2", "--complex", "building-flag",
                     "--format", "csv"]) == 0
    text = capsys.readouterr().out
    csv_text = text[text.index("# schema"):]
    assert csv_text.startswith(f"# schema {TABLE_SCHEMA} config ")
    header, rows = table_from_csv(csv_text)
    assert header == ["k", "free_rank", "torsion"] and rows == [["0", "1", ""], ["1", "8", ""]]


def test_coxeter_sphere_homology(tmp_path):
    assert cli.main(["homology", "--coxeter-matrix", "1,3,2;3,1,3;2,3,1", "--out", str(tmp_path)]) == 0
    assert manifest(tmp_path, "homology")["results"]["homology"] == {"0": "Z", "1": "0", "2": "Z"}


def test_wagoner_json_round_trip(tmp_path):
    out = tmp_path / "a"
    assert cli.main(["build", "--family", "SL", "--n", "3", "--q", "2", "--out", str(out)]) == 0
    text = (out / "wagoner.json").read_text()
    data = json.loads(text)
    # 126 chamber cosets, each holding 2 cosets of each of its 2 vertex groups
    assert data["schema"] == COMPLEX_SCHEMA and data["f_vector"] == [378, 504]
    assert {"subgroup", "rep", "rep_digest"} <= set(data["vertices"][0])
    cx = complex_from_json(text)
    assert cx.digest() == data["digest"]
    # export back to JSON is byte-identical, to DOT keeps the edges
    back = tmp_path / "b"
    assert cli.main(["export", "--artifact", str(out / "wagoner.json"), "--out", str(back)]) == 0
    assert (back / "wagoner.json").read_text() == text
    assert cli.main(["export", "--artifact", str(out / "wagoner.json"), "--format", "dot",
                     "--out", str(back)]) == 0
    assert (back / "wagoner.dot").read_text().count(" -- ") == 504


def test_export_rejects_bad_pairings(tmp_path):
    out = tmp_path / "a"
    cli.main(["build", "--family", "SL", "--n", "3", "--q", "2", "--complex", "apartment", "--out", str(out)])
    assert cli.main(["export", "--artifact", str(out / "apartment.json"), "--format", "csv"]) == cli.EXIT_CONFIG
    assert cli.main(["export", "--artifact", str(tmp_path / "missing.json")]) == cli.EXIT_CONFIG
    cli.main(["pi0", "--family", "SL", "--n", "3", "--q", "2", "--out", str(out)])
    assert cli.main(["export", "--artifact", str(out / "pi0.json"), "--format", "dot"]) == cli.EXIT_CONFIG
    assert cli.main(["export", "--artifact", str(out / "pi0.json"), "--format", "csv", "--out", str(out)]) == 0
    pi0 = json.loads((out / "pi0.json").read_text())
    assert (out / "pi0.csv").read_text().startswith(f"# schema {TABLE_SCHEMA} config {pi0['config_digest']}")


def test_affine_cells(tmp_path):
    assert cli.main(["affine", "--family", "A2", "--n", "2", "--radius", "6", "--out", str(tmp_path)]) == 0
    m = manifest(tmp_path, "affine")
    assert m["results"]["rescale"] == {"bijective": True, "order_preserving": True, "weyl_equivariant": True}


def test_artifacts_embed_config_digest(tmp_path):
    cli.main(["intervals", "--coxeter-matrix", "1,4;4,1", "--out", str(tmp_path)])
    m = manifest(tmp_path, "intervals")
    data = json.loads((tmp_path / "intervals.json").read_text())
    assert data["config_digest"] == m["config_digest"] and data["schema"] == TABLE_SCHEMA


def test_result_digests_are_deterministic(tmp_path):
    for d in ("x", "y"):
        cli.main(["build", "--family", "Sp", "--n", "4", "--q", "2", "--skeleton-dim", "1",
                  "--out", str(tmp_path / d)])
    mx, my = manifest(tmp_path / "x", "build"), manifest(tmp_path / "y", "build")
    assert mx["result_digest"] == my["result_digest"]
    assert mx["artifacts"] == my["artifacts"]
    assert mx["config_digest"] == my["config_digest"]


def test_config_file(tmp_path, capsys):
    cfg = cli.RunConfig(operation="pi0", family="GL", n=3, q=2)
    path = tmp_path / "cfg.json"
    path.write_text(cfg.to_json())
    assert cli.main(["pi0", "--config", str(path)]) == 0
    assert "components=1, index=1, MATCH" in capsys.readouterr().out


def test_tiers():
    assert 10 in TIERS["full"] and 10 not in TIERS["fast"]
    assert set(TIERS["full"]) == set(range(1, 15))


def test_console_script():
    proc = subprocess.run([sys.executable, "-c", "from wagoner.cli import entry; entry()",
                           "pi0", "--family", "SL", "--n", "3", "--q", "2"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "MATCH" in proc.stdout


@given(st.sampled_from(cli.OPERATIONS), st.sampled_from(["SL", "GL", "Sp", None]),
       st.one_of(st.none(), st.integers(1, 6)), st.one_of(st.none(), st.integers(2, 5)),
       st.integers(1, 10), st.sampled_from(cli.FORMATS), st.integers(0, 2 ** 31))
def test_config_round_trip(op, family, n, q, radius, fmt, seed):
    cfg = cli.RunConfig(operation=op, family=family, n=n, q=q, radius=radius, format=fmt, seed=seed,
                        coxeter_matrix=[[1, 3], [3, 1]])
    again = cli.RunConfig.from_json(cfg.to_json())
    assert again == cfg and again.digest() == cfg.digest()
    other = cli.RunConfig.from_json(cfg.to_json())
    other.out = "/elsewhere"
    assert other.digest() == cfg.digest()


@pytest.mark.parametrize("text,expected", [
    ("1,3;3,1", [[1, 3], [3, 1]]),
    ("[[1, 4], [4, 1]]", [[1, 4], [4, 1]]),
])
def test_parse_coxeter_matrix(text, expected):
    assert cli.parse_coxeter_matrix(text) == expected


def test_parse_infinity():
    from wagoner.coxeter import INF
    assert cli.parse_coxeter_matrix("1,inf;inf,1") == [[1, INF], [INF, 1]]
    with pytest.raises(cli.ConfigError):
        cli.parse_coxeter_matrix("1,3;3")
