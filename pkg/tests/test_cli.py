from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

import gromov_overlap.f2_complex as f2
from gromov_overlap import cli
from gromov_overlap.formats import (
    InstanceFormatError,
    Report,
    parse_rational,
    read_instance,
    write_instance,
)
from gromov_overlap.geometry import AffineInstance, Point
from gromov_overlap.selfcheck import run_selfcheck


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, capsys.readouterr().out


@pytest.fixture
def inst_file(tmp_path):
    def make(n, seed, p="uniform"):
        path = tmp_path / f"i{n}_{seed}_{p}.txt"
        assert cli.main(["gen", str(n), "--seed", str(seed), "--p", p, "--out", str(path)]) == 0
        return path
    return make


def test_parse_rational():
    assert parse_rational("-3/4") == Q(-3, 4)
    for bad in ("3", "1/0", "a/b", "1.5/2"):
        with pytest.raises(InstanceFormatError):
            parse_rational(bad)


@given(st.integers(3, 12), st.integers(0, 10 ** 6), st.sampled_from(["uniform", "random"]))
def test_instance_round_trip_is_byte_identical(n, seed, mode):
    text = write_instance(cli.generate_instance(n, seed, mode), seed)
    f = read_instance(text)
    assert f.seed == seed
    assert write_instance(f.instance, f.seed) == text


def test_read_rejects_bad_files():
    good = write_instance(AffineInstance([(0, 0), (1, 0), (0, 1)]))
    with pytest.raises(InstanceFormatError):
        read_instance(good.replace("overlap-instance v1", "v0"))
    with pytest.raises(InstanceFormatError):
        read_instance(good.replace("point 2", "point 5"))
    with pytest.raises(InstanceFormatError):
        read_instance(good.replace("p uniform", "p 0 1/2\np 1 1/2\np 2 1/2"))
    with pytest.raises(InstanceFormatError):
        read_instance(good + "colour red\n")


def test_random_weights_sum_to_one():
    inst = read_instance(write_instance(cli.generate_instance(30, 1, "random"))).instance
    assert sum(inst.p.weights) == 1 and not inst.is_uniform()


def test_report_rendering():
    r = Report("x").add("q", Q(2, 4)).add("ok", True).add("pt", Point(Q(1), Q(-1, 3)))
    r.add("xs", [Q(1), 2])
    assert r.render() == "# x\nq: 1/2\nok: pass\npt: (1/1, -1/3)\nxs: [1/1, 2]\n"


def test_gen_is_deterministic(capsys):
    a = run(capsys, "gen", 5, "--seed", 7)
    b = run(capsys, "gen", 5, "--seed", 7)
    assert a == b and a[0] == 0
    assert run(capsys, "gen", 5, "--seed", 8)[1] != a[1]


def test_gen_rejects_tiny_n(capsys):
    assert run(capsys, "gen", 2)[0] == 2


def test_overlap_report(capsys, inst_file):
    code, out = run(capsys, "overlap", inst_file(10, 3, "random"))
    assert code == 0
    assert "weighted_check: pass" in out and "gromov_check" not in out
    code, out = run(capsys, "overlap", inst_file(10, 3), "--p", "uniform")
    assert code == 0 and "gromov_check: pass" in out


def test_overlap_rejects_degenerate_file(capsys, tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("overlap-instance v1\nn 3\npoint 0 0/1 0/1\npoint 1 1/1 1/1\n"
                    "point 2 2/1 2/1\np uniform\n")
    assert run(capsys, "overlap", path)[0] == 2
    assert run(capsys, "overlap", tmp_path / "missing.txt")[0] == 2


def test_game_report(capsys, inst_file):
    code, out = run(capsys, "game", inst_file(6, 2))
    assert code == 0
    assert "gap: 0/1" in out and "value_check: pass" in out


def test_folding_report(capsys, inst_file, tmp_path):
    tri = tmp_path / "x.tri"
    code, out = run(capsys, "folding", inst_file(5, 1), "--seed", 1, "--triangulation", tri)
    assert code == 0
    assert "duality: pass" in out and "defects_odd: pass" in out
    assert tri.read_text().split("\n", 1)[0].count(" ") == 2


def test_folding_exhaustion_exit_code(capsys, inst_file):
    code, out = run(capsys, "folding", inst_file(8, 4), "--seed", 4)
    assert code == 3 and "P7=FAIL" in out


def test_selfcheck_passes(capsys):
    code, out = run(capsys, "selfcheck", 5, "--seed", 0)
    assert code == 0 and out.endswith("status: pass\n")


def test_selfcheck_catches_a_flipped_coboundary_bit(monkeypatch, capsys):
    real = f2.coboundary0_bits

    def flipped(sk, u):
        return real(sk, u) ^ (1 if u == 1 else 0)

    monkeypatch.setattr(f2, "coboundary0_bits", flipped)
    results = run_selfcheck(4, 0)
    assert not results[-1].passed
    code, out = run(capsys, "selfcheck", 4)
    assert code == 1 and "first_failure:" in out


def test_selfcheck_rejects_small_n(capsys):
    assert run(capsys, "selfcheck", 2)[0] == 2
