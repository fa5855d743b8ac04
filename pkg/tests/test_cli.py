import json
import os

import pydot
import pytest

from tgwa.cli import (EXIT_CONFIG, EXIT_FAIL, EXIT_MATH, EXIT_OK, config_from_dict, emit_dot,
                      load_config, main)
from tgwa.errors import ConfigError

CONFIGS = os.path.join(os.path.dirname(__file__), os.pardir, "configs")


def cfg(name):
    return os.path.join(CONFIGS, name + ".toml")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def parse_dot(text):
    """Nodes as {name: (g1, g2)} and edges as (src, tgt, generator)."""
    graphs = pydot.graph_from_dot_data(text)
    assert graphs and len(graphs) == 1
    g = graphs[0]
    nodes = {}
    for node in g.get_nodes():
        pos = node.get("pos")
        if pos is None:
            continue
        x, y = pos.strip('"!').split(",")
        nodes[node.get_name()] = (int(x), int(y.rstrip("!")))
    edges = []
    for e in g.get_edges():
        gen = e.get("label").strip('"')
        double = e.get("color") is not None
        assert double == (gen == "X2")
        edges.append((e.get_source(), e.get_destination(), gen))
    return nodes, edges


def diagram(capsys, name, *extra):
    code, out, _ = run(capsys, "diagram", "--config", cfg(name), *extra)
    assert code == EXIT_OK
    return parse_dot(out)


# ---------------------------------------------------------------------------
# analyses


def test_classify_n0_prints_case(capsys):
    code, out, _ = run(capsys, "classify", "--config", cfg("n0"), "--format", "text")
    assert code == EXIT_OK and out == "N0\n"
    code, out, _ = run(capsys, "classify", "--config", cfg("n0"))
    assert json.loads(out) == {"case": "N0"}


def test_orbit_output(capsys):
    code, out, _ = run(capsys, "orbit", "--config", cfg("n1_break_rou"))
    assert code == EXIT_OK
    data = json.loads(out)
    assert set(data) == {"point", "gamma", "breaks", "isotropy"}
    assert len(data["point"]) == 2 and set(data["breaks"]) == {"t1", "t2"}


def test_gtilde_and_gm(capsys):
    code, out, _ = run(capsys, "gtilde", "--config", cfg("n1_break_rou"))
    assert code == EXIT_OK and "text" in json.loads(out)
    code, out, _ = run(capsys, "gm", "--config", cfg("rank2_two_rows"))
    data = json.loads(out)
    assert code == EXIT_OK and data["rank"] == 2


def test_bm_reports_torus(capsys):
    code, out, _ = run(capsys, "bm", "--config", cfg("rank2_two_rows"))
    data = json.loads(out)
    assert code == EXIT_OK
    assert "presentation" in data and "torus" in data


def test_text_format_and_out_file(capsys, tmp_path):
    path = tmp_path / "orbit.txt"
    code, out, _ = run(capsys, "orbit", "--config", cfg("n0"), "--format", "text",
                       "--out", str(path))
    assert code == EXIT_OK and out == ""
    text = path.read_text()
    assert "gamma" in text and "isotropy" in text


def test_outputs_are_deterministic(capsys):
    outs = [run(capsys, "build", "--config", cfg("rank2_two_rows"))[1] for _ in range(2)]
    assert outs[0] == outs[1]


# ---------------------------------------------------------------------------
# exit codes


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--config", cfg("rank2_cycle"))
    assert code == EXIT_OK and json.loads(out)["ok"] is True


def test_proper_break_fixture_exits_nonzero(capsys):
    code, out, _ = run(capsys, "verify", "--config", cfg("proper_break"), "--format", "text")
    assert code == EXIT_FAIL
    assert "proper breaks" in out


def test_sign_flip_fixture_verifies(capsys):
    code, _, _ = run(capsys, "verify", "--config", cfg("sign_flip"))
    assert code == EXIT_OK


def test_config_errors(capsys, tmp_path):
    bad = tmp_path / "bad.toml"
    bad.write_text('[algebra]\npreset = "nope"\n')
    code, _, err = run(capsys, "classify", "--config", str(bad))
    assert code == EXIT_CONFIG and "preset" in err
    bad.write_text("[algebra\n")
    assert run(capsys, "orbit", "--config", str(bad))[0] == EXIT_CONFIG
    assert run(capsys, "orbit", "--config", str(tmp_path / "missing.toml"))[0] == EXIT_CONFIG
    assert run(capsys, "verify")[0] == EXIT_CONFIG
    assert run(capsys, "orbit", "--config", cfg("n0"), "--format", "dot")[0] == EXIT_CONFIG
    assert run(capsys, "diagram", "--config", cfg("n0"), "--format", "json")[0] == EXIT_CONFIG
    assert run(capsys, "verify", "--config", cfg("n0"), "--window", "0")[0] == EXIT_CONFIG


def test_config_error_names_the_source(tmp_path):
    bad = tmp_path / "w.toml"
    bad.write_text('[algebra]\nN = 12\n[window]\nB = -1\n')
    with pytest.raises(ConfigError, match="w.toml"):
        load_config(str(bad))
    with pytest.raises(ConfigError, match="basis"):
        config_from_dict({"module": {"basis": [[1, 2, 3]]}})
    with pytest.raises(ConfigError, match="unknown"):
        config_from_dict({"modul": {}})


def test_ccr_preset_is_refused_for_analysis(capsys, tmp_path):
    path = tmp_path / "ccr.toml"
    path.write_text('[algebra]\npreset = "ccr"\n[point]\nvector = ["a", "b"]\n')
    assert config_from_dict({"algebra": {"preset": "ccr"}}).preset == "ccr"
    assert run(capsys, "orbit", "--config", str(path))[0] == EXIT_CONFIG


def test_symbolic_commutation_scalar_is_a_math_error(capsys, tmp_path):
    path = tmp_path / "sym.toml"
    path.write_text('[algebra]\nN = 12\n[algebra.bindings]\nq1 = "e^4"\nq2 = "e^3"\n'
                    '[point]\npreset = "n2(a)"\n')
    code, _, err = run(capsys, "bm", "--config", str(path))
    assert code == EXIT_MATH and "NotRootOfUnity" in err


# ---------------------------------------------------------------------------
# build / verify round trip


@pytest.mark.parametrize("name,extra", [("rank2_two_rows", ()), ("rank1_wrap", ("--window", "2"))])
def test_build_then_verify_is_byte_stable(capsys, tmp_path, name, extra):
    table = tmp_path / "m.json"
    assert run(capsys, "build", "--config", cfg(name), "--out", str(table), *extra)[0] == EXIT_OK
    code1, direct, _ = run(capsys, "verify", "--config", cfg(name), *extra)
    code2, reread, _ = run(capsys, "verify", "--module", str(table))
    assert code1 == code2 == EXIT_OK
    assert direct == reread


def test_diagram_from_module_table(capsys, tmp_path):
    table = tmp_path / "m.json"
    run(capsys, "build", "--config", cfg("rank2_cycle"), "--out", str(table))
    code, out, _ = run(capsys, "diagram", "--module", str(table))
    assert code == EXIT_OK
    assert out == run(capsys, "diagram", "--config", cfg("rank2_cycle"))[1]


# ---------------------------------------------------------------------------
# weight diagrams


def test_path_with_self_loops(capsys):
    nodes, edges = diagram(capsys, "n1_break_rou")
    assert len(nodes) == 3
    x1 = sorted((nodes[s], nodes[t]) for s, t, gen in edges if gen == "X1")
    assert x1 == [((-2, 0), (-1, 0)), ((-1, 0), (0, 0))]
    loops = [s for s, t, gen in edges if gen == "X2" and s == t]
    assert len(loops) == 3 and len(edges) == 5


def test_two_row_wrap_pattern(capsys):
    nodes, edges = diagram(capsys, "rank2_two_rows")
    assert len(nodes) == 10
    assert len(set(nodes.values())) == 10
    # every support point has exactly one outgoing X_1 and one outgoing X_2
    for gen in ("X1", "X2"):
        out = [s for s, _, g in edges if g == gen]
        assert sorted(out) == sorted(nodes)
    assert len(edges) == 20


def test_single_cycle(capsys):
    nodes, edges = diagram(capsys, "rank2_cycle")
    assert len(nodes) == 3
    for gen in ("X1", "X2"):
        succ = {s: t for s, t, g in edges if g == gen}
        assert len(succ) == 3
        start = next(iter(nodes))
        seen, cur = [], start
        for _ in range(3):
            seen.append(cur)
            cur = succ[cur]
        assert cur == start and len(set(seen)) == 3


def test_rank_one_wrap_pattern(capsys):
    nodes, edges = diagram(capsys, "rank1_wrap")
    # G_m = <(4, -2)>: four columns g_1 = 0..3 in the window |g_2| <= 3
    assert sorted(nodes.values()) == [(x, y) for x in range(4) for y in range(-3, 4)]
    for s, t, gen in edges:
        (x, y), (u, v) = nodes[s], nodes[t]
        if gen == "X2":
            assert (u, v) == (x, y + 1)
        elif x < 3:
            assert (u, v) == (x + 1, y)
        else:
            # the fourth X_1 step wraps back to column 0, two rows up
            assert (u, v) == (0, y + 2)
    wraps = [e for e in edges if e[2] == "X1" and nodes[e[0]][0] == 3]
    assert len(wraps) == 5
    assert len(edges) == 3 * 7 + 5 + 4 * 6


def test_window_flag_overrides_config(capsys):
    nodes, _ = diagram(capsys, "rank1_wrap", "--window", "1")
    assert len(nodes) == 4 * 3


def test_dot_labels_are_escaped():
    from tgwa.qwa import example_instances

    m = example_instances()[1].build()
    text = emit_dot(m)
    assert '\\n' in text and "\n\n" not in text
    nodes, _ = parse_dot(text)
    assert len(nodes) == len({m.point_of(lab) for lab in m.labels()})
