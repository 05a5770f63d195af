import random
from itertools import combinations

import pytest

import oracles
from weilheights import cli
from weilheights.errors import DomainError, NonSplitWitness
from weilheights.experiments import (PRESETS, bt_experiment, bt_exponent_ledger, check_base_point, cube_root,
                                     diagonal_cubic_counts, lines_of_diagonal_cubic, preset_config,
                                     primitive_cube_root_of_unity, run_experiment, sample_base_points)
from weilheights.nfcore import eisenstein, gaussian, rationals

Q, G, E3 = rationals(), gaussian(), eisenstein()


def det(rows):
    """Determinant over a number field by elimination."""
    m = [list(r) for r in rows]
    n, out = len(m), m[0][0].field.one
    for c in range(n):
        piv = next((r for r in range(c, n) if not m[r][c].is_zero()), None)
        if piv is None:
            return m[0][0].field.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out = out * m[c][c]
        inv = m[c][c].inverse()
        for r in range(c + 1, n):
            f = m[r][c] * inv
            m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return out


def test_cube_roots():
    rng = random.Random(1)
    for F in (Q, G, E3):
        for _ in range(60):
            x = F([rng.randint(-20, 20) for _ in range(F.degree)]) / F(rng.randint(1, 6))
            r = cube_root(x ** 3)
            assert r is not None and r ** 3 == x ** 3
    assert cube_root(Q(2)) is None and cube_root(E3(2)) is None
    assert cube_root(G(2) * G.gen) is None


def test_cube_roots_of_unity():
    z = primitive_cube_root_of_unity(E3)
    assert z != E3.one and z ** 3 == E3.one
    with pytest.raises(NonSplitWitness):
        primitive_cube_root_of_unity(G)


def test_base_point_guard():
    check_base_point([E3.one] * 4)
    with pytest.raises(DomainError):
        check_base_point([E3.zero, E3.one, E3.one, E3.one])


def line_forms(line):
    return [[E3(list(c)) for c in form] for form in line]


def test_fermat_cubic_lines_incidence():
    lines = [line_forms(l) for l in lines_of_diagonal_cubic([E3.one] * 4)]
    assert len(lines) == 27
    # two lines meet iff their four defining planes are dependent; each line meets 10 others
    meets = {i: 0 for i in range(27)}
    for i, j in combinations(range(27), 2):
        if det(lines[i] + lines[j]).is_zero():
            meets[i] += 1
            meets[j] += 1
    assert set(meets.values()) == {10}


def test_cubed_base_points_split():
    for t in sample_base_points(E3, 10, 3, seed=7):
        check_base_point(t)
        assert len(lines_of_diagonal_cubic([c ** 3 for c in t])) == 27


def test_nonsplit_fiber_reports_witness():
    with pytest.raises(NonSplitWitness) as exc:
        lines_of_diagonal_cubic([E3.one, E3.one, E3.one, E3(2)])
    assert exc.value.witness["j"] == 3


@pytest.mark.parametrize("F, f", [(E3, oracles.EISEN), (G, oracles.GAUSS)])
def test_diagonal_cubic_counts_vs_filter(F, f):
    ladder = [1, 2, 3, 4]
    got = diagonal_cubic_counts(F, [F.one] * 4, ladder)
    assert got == [oracles.brute_diagonal_cubic([(1, 0)] * 4, B, f) for B in ladder]
    if F is E3:
        assert got[1] == 99
    two = [F.one, F.one, F.one, F(2)]
    assert diagonal_cubic_counts(F, two, [4]) == [oracles.brute_diagonal_cubic([(1, 0)] * 3 + [(2, 0)], 4, f)]


def test_bt_ledger():
    led = bt_exponent_ledger()
    assert led["rho_total"] == 2 and led["b_total"] == 2 and led["a_total"] == 1
    assert led["total_log_exponent"] == 1 and led["fiber_floor_log_exponent"] == 3
    assert (led["rho_dP6_split"], led["rho_dP6_swap"]) == (8, 4)


def test_bt_experiment_preset():
    art = bt_experiment(preset_config("bt"))
    assert art.ok and art.report["split"] == 20
    assert art.report["chart_dims"] == [(12, 2)]
    text = art.files["bt.txt"]
    assert "split_fibers = 20" in text and "b_total = 2" in text and "fiber_floor_log_exponent = 3" in text


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_exit_zero_and_repeat(name, tmp_path, capsys):
    cmd = {"schanuel": "fit", "restriction-check": "check-restriction", "tamagawa-check": "check-tamagawa",
           "bt": "bt-experiment"}[PRESETS[name]["kind"]]
    for d in ("a", "b"):
        assert cli.main([cmd, "--preset", name, "--out", str(tmp_path / d)]) == 0
    capsys.readouterr()
    files = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert files and files == sorted(p.name for p in (tmp_path / "b").iterdir())
    for f in files:
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_run_experiment_reports_seconds():
    art = run_experiment(preset_config("restriction-check", ladder={"rungs": 4, "bmax": None}))
    assert art.ok and art.report["seconds"] >= 0
