import json
import subprocess
import sys
from fractions import Fraction as Q
from pathlib import Path

import pytest

from micp_forge import serialize
from micp_forge.cli import main
from micp_forge.convex import ConicSet, box, interval
from micp_forge.errors import MicpError
from micp_forge.fixtures import (
    REGISTRY,
    concave_balls,
    dense_sqrt2,
    figure2_pwl,
    fixture,
    hyperbola,
    lorentz_intcone,
    parity_cube,
    s_epsilon_formulation,
)
from micp_forge.formulations import slice_set, union_basic
from micp_forge.lpformat import decimal_string, emit_lp, parse_lp
from micp_forge.naturals import PeriodicNaturalSet, polyhedral_milp, to_milp
from micp_forge.pwl import PwlFunction
from micp_forge.shapes import IndexedFamily

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def golden(name):
    return (GOLDEN / name).read_text()


# golden outputs ---------------------------------------------------------------


def test_golden_parity_fixture(capsys, tmp_path):
    lp = tmp_path / "out.lp"
    code, out, _ = run(capsys, "fixture", "parity_cube", "--param", "n=2", "--lp", lp)
    assert code == 0
    assert out == golden("parity_cube_n2.json")
    assert lp.read_text() == golden("parity_cube_n2.lp")
    assert " c0: x0 + x1 - 2 z0 = 0" in out + lp.read_text() and "General\n z0\n" in lp.read_text()


def test_golden_nat_compile(capsys, tmp_path):
    lp = tmp_path / "out.lp"
    code, out, _ = run(capsys, "nat-compile", "--offsets", "1,2", "--period", "3", "--lp", lp)
    assert code == 0
    assert out == golden("nat_offsets_1_2_t3.json")
    assert lp.read_text() == golden("nat_offsets_1_2_t3.lp")


def test_golden_lower_bound(capsys):
    code, out, _ = run(capsys, "lower-bound", "--fixture", "parity_cube", "--param", "n=4", "--exact")
    assert code == 0 and out == golden("lower_bound_parity4.json")
    data = json.loads(out)
    assert (data["w"], data["bound"]) == (8, 3)


def test_golden_nat_detect_negative(capsys):
    code, out, _ = run(capsys, "nat-detect", "--oracle", "s_epsilon", "--eps", "2/5", "--bound", 10000, "--max-period", 200)
    assert code == 2 and out == golden("nat_detect_s_eps.json")


def test_golden_pwl_compile(capsys):
    code, out, _ = run(capsys, "pwl-compile", "--prefix", "1,0", "--block-slopes", "3/2", "--format", "text")
    assert code == 0 and out == golden("pwl_figure2.txt")
    code, out, _ = run(capsys, "pwl-compile", "--prefix", "1,0", "--block-slopes", "3/2", "--mode", "global")
    assert code == 2 and out == golden("pwl_figure2_global.json")


def test_golden_hnf_and_completion(capsys):
    code, out, _ = run(capsys, "hnf", "--matrix", "2,4;3,5")
    assert code == 0 and out == golden("hnf.json")
    code, out, _ = run(capsys, "unimodular-complete", "--vector", "2,3")
    assert code == 0 and out == golden("ucomplete.json")


def test_golden_decompose(capsys):
    code, out, _ = run(capsys, "decompose-bounded", "--vertices", GOLDEN / "decompose_input.json", "--n", 1, "--d", 1)
    assert code == 0 and out == golden("decompose.json")


def test_golden_union_and_slices(capsys, tmp_path):
    lp = tmp_path / "u.lp"
    code, out, _ = run(capsys, "build-union", "--sets", GOLDEN / "union_sets.json", "--kind", "basic", "--lp", lp)
    assert code == 0 and out == golden("union_basic.json")
    assert lp.read_text() == golden("union_basic.lp")
    code, out, _ = run(capsys, "slice-enum", "--formulation", GOLDEN / "union_basic.json", "--format", "text")
    assert code == 0 and out == golden("slices.txt")


def test_golden_shape_check(capsys):
    code, out, _ = run(capsys, "shape-check", "--family", GOLDEN / "family_intervals.json")
    assert code == 0 and out == golden("shape_check.json")


# exit codes and errors ----------------------------------------------------------


def test_nat_compile_lp_with_exceptional(capsys, tmp_path):
    lp = tmp_path / "n.lp"
    code, out, _ = run(capsys, "nat-compile", "--offsets", "4", "--period", "2", "--exceptional", "0", "--lp", lp)
    assert code == 0 and "RotatedSecondOrder" in out
    text = lp.read_text()
    assert "c0: x0 - 6 z1 - 4 z2 = 0" in text or "c0: x0 - 4 z1 - 6 z2 = 0" in text
    code, _, err = run(capsys, "nat-compile", "--offsets", "4", "--period", "2", "--exceptional", "1", "--lp", lp)
    assert code == 1 and "no polyhedral formulation" in err


def test_unknown_fixture_exits_1(capsys):
    code, out, err = run(capsys, "fixture", "nope")
    assert code == 1 and out == "" and "registered" in err


def test_missing_file_exits_1(capsys, tmp_path):
    code, _, err = run(capsys, "check-ideal", "--formulation", tmp_path / "missing.json")
    assert code == 1 and "error" in err


def test_conic_lp_export_exits_1(capsys, tmp_path):
    code, _, err = run(capsys, "fixture", "hyperbola", "--lp", tmp_path / "h.lp")
    assert code == 1 and "LP export requires polyhedral formulation" in err


def test_check_ideal_codes(capsys, tmp_path):
    f = tmp_path / "f.json"
    code, _, _ = run(capsys, "build-union", "--sets", GOLDEN / "union_sets.json", "--kind", "ideal", "--out", f)
    assert code == 0
    code, out, _ = run(capsys, "check-ideal", "--formulation", f)
    assert code == 0 and json.loads(out)["ideal"] is True
    code, out, _ = run(capsys, "check-ideal", "--formulation", GOLDEN / "union_basic.json")
    assert code in (0, 2)


def test_shape_check_negative(capsys, tmp_path):
    fam = IndexedFamily({(z,): [(0, 0), (1 + Q(z, 4), 0), (0, 1 / (1 + Q(z, 4))), (1 + Q(z, 4), 1 / (1 + Q(z, 4)))] for z in range(5)})
    p = tmp_path / "fam.json"
    p.write_text(serialize.dumps(fam))
    svg = tmp_path / "fam.svg"
    code, out, _ = run(capsys, "shape-check", "--family", p, "--svg", svg)
    assert code == 2 and json.loads(out)["verdict"] == "hypothesis-violated"
    assert svg.read_text().startswith("<svg")


def test_out_flag_and_text_format(capsys, tmp_path):
    o = tmp_path / "r.txt"
    code, out, _ = run(capsys, "lower-bound", "--fixture", "primes", "--param", "bound=50", "--format", "text", "--out", o)
    assert code == 0 and out == ""
    assert o.read_text().startswith("w = ")


def test_deterministic_output(capsys):
    a = run(capsys, "fixture", "dense_sqrt2")[1]
    b = run(capsys, "fixture", "dense_sqrt2")[1]
    assert a == b


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "micp_forge.cli", "hnf", "--matrix", "2,4;3,5"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout == golden("hnf.json")


# LP emission -------------------------------------------------------------------


def test_decimal_string():
    assert decimal_string(Q(3, 4)) == "0.75"
    assert decimal_string(Q(-5, 2)) == "-2.5"
    assert decimal_string(Q(7)) == "7"
    assert decimal_string(Q(-1, 20)) == "-0.05"
    with pytest.raises(MicpError):
        decimal_string(Q(1, 3))


@pytest.mark.parametrize("F", [
    parity_cube(3),
    union_basic([interval(0, Q(1, 3)), interval(Q(5, 7), 2)]),
    to_milp(PeriodicNaturalSet((), (7, 9), 4)),
    polyhedral_milp(PeriodicNaturalSet((1, 3), (7, 9), 4)),
    union_basic([box([0, Q(-1, 6)], [Q(1, 2), 1]), box([1, 1], [2, Q(9, 4)])]),
])
def test_lp_round_trip(F):
    G = parse_lp(emit_lp(F))
    assert (G.n, G.p, G.d) == (F.n, F.p, F.d)
    assert G.M.A == F.M.A and G.M.b == F.M.b
    assert emit_lp(G) == emit_lp(F)


def test_lp_rejects_conic():
    with pytest.raises(MicpError, match="LP export requires polyhedral formulation"):
        emit_lp(hyperbola())


# JSON -------------------------------------------------------------------------------


@pytest.mark.parametrize("obj", [
    interval(0, Q(1, 3)),
    box([0, 0], [1, Q(2, 3)]).to_polyhedron(),
    parity_cube(2),
    dense_sqrt2(),
    PeriodicNaturalSet((0,), (4,), 2),
    figure2_pwl(),
    IndexedFamily({(0,): [(0,), (1,)], (1,): [(1,), (2,)]}),
])
def test_json_round_trip(obj):
    d = serialize.to_json(obj)
    assert "schema" in d
    back = serialize.from_json(json.loads(json.dumps(d)))
    assert serialize.to_json(back) == d


def test_json_rejects_floats_and_unknown_schema():
    d = serialize.to_json(interval(0, 1))
    d["b"][0] = 0.5
    with pytest.raises(MicpError):
        serialize.from_json(d)
    with pytest.raises(MicpError):
        serialize.from_json({"schema": "nope.v9"})


# fixtures -------------------------------------------------------------------------------


def test_registry_names():
    assert set(REGISTRY) == {"parity_cube", "dense_sqrt2", "hyperbola", "s_epsilon", "concave_balls",
                             "lorentz_intcone", "figure2_pwl", "primes"}
    with pytest.raises(MicpError, match="registered"):
        fixture("nope")


def test_parity_fixture_row():
    F = fixture("parity_cube", n=3)
    assert F.d == 1 and F.M.A[0] == (1, 1, 1, -2) and F.M.cones[0].kind == "Zero"


def test_figure2_fixture():
    P = fixture("figure2_pwl")
    assert P == PwlFunction((1, 0), (Q(3, 2),))


def test_dense_sqrt2_rows():
    F = dense_sqrt2()
    assert [c.kind for c in F.M.cones] == ["SecondOrder"] * 4 + ["Zero"]
    # variables x | y1 y2 y3 | z1 z2; z2 = floor(sqrt(2) z1) and y1 = sqrt(2) z1
    assert F.M.contains((0, 0, 0, 0, 0, 0))
    assert not F.M.contains((0, 0, 0, 0, 0, 1))
    # sqrt(2) * 5 = 7.0710678...: both rational neighbours of y1 violate a row
    for y1 in (Q(707, 100), Q(70711, 10000)):
        assert not F.M.contains((y1 - 7, y1, 0, 0, 5, 7))


def test_hyperbola_slices():
    F = hyperbola()
    S = slice_set(F, (2,))
    assert S.contains((2, Q(1, 2))) and not S.contains((2, Q(1, 3)))
    assert slice_set(F, (0,)) is None or not slice_set(F, (0,)).contains((0, 10 ** 6))


def test_s_epsilon_formulation_membership():
    F = s_epsilon_formulation(Q(2, 5))
    from micp_forge.naturals import s_epsilon_member

    for z1 in range(0, 25):
        feasible = any(slice_set(F, (z1, z2)) is not None for z2 in range(0, 40))
        assert feasible == s_epsilon_member(z1, Q(2, 5))


def test_concave_balls_and_lorentz():
    F = concave_balls(2, [1, 0], 1, 1)
    S = slice_set(F, (3,))
    assert S.contains((3, 0, 2)) and S.contains((5, 0, 2))
    assert not S.contains((Q(11, 2), 0, 2)) and not S.contains((3, 0, Q(21, 10)))
    L = lorentz_intcone(2)
    assert slice_set(L, (5, 3, 4)) is not None and slice_set(L, (1, 1, 1)) is None
