import math
import re

import numpy as np
import pytest

from qqpft import fileio
from qqpft.cli import main
from qqpft.grid_signal import lp_norm


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def info(capsys, path) -> dict:
    code, out, _ = run(capsys, "info", path)
    assert code == 0
    return dict(line.split(": ", 1) for line in out.splitlines())


@pytest.fixture
def gauss32(tmp_path, capsys):
    p = tmp_path / "g32.qsig"
    assert run(capsys, "gen", "gaussian", "--n", 32, "--extent", 14, "--out", p)[0] == 0
    return p


def test_gen_gaussian_norm(tmp_path, capsys):
    p = tmp_path / "g.qsig"
    code, out, _ = run(capsys, "gen", "gaussian", "--n", 128, "--extent", 20, "--out", p)
    assert code == 0 and "wrote" in out
    assert math.isclose(lp_norm(fileio.read_signal(p), 2), math.sqrt(math.pi), rel_tol=1e-6)
    meta = info(capsys, p)
    assert meta["format"] == "QSIG1" and meta["n"] == "128"


def test_gen_impulse(tmp_path, capsys):
    p = tmp_path / "i.qsig"
    run(capsys, "gen", "impulse", "--n", 16, "--extent", 4, "--out", p)
    f = fileio.read_signal(p)
    nz = np.argwhere(f.samples != 0)
    assert nz.tolist() == [[8, 8, 0]]
    assert f.samples[8, 8, 0] == 1 / f.spec.delta ** 2


def test_gen_is_deterministic(tmp_path, capsys):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    for p in (a, b):
        run(capsys, "gen", "quaternion-random", "--n", 16, "--seed", 9, "--out", p)
    run(capsys, "gen", "quaternion-random", "--n", 16, "--seed", 10, "--out", c)
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()


def test_gen_csv_and_unknown_generator(tmp_path, capsys):
    run(capsys, "gen", "chirp", "--n", 8, "--out", tmp_path / "c", "--csv", tmp_path / "c.csv")
    assert (tmp_path / "c.csv").read_text().startswith("t1,t2,r0,r1,r2,r3\n")
    with pytest.raises(SystemExit) as exc:
        main(["gen", "sawtooth", "--out", str(tmp_path / "x")])
    assert exc.value.code == 2


def test_qqpft_gaussian_is_gaussian(tmp_path, capsys):
    src, out = tmp_path / "g.qsig", tmp_path / "g.qqpf"
    run(capsys, "gen", "gaussian", "--n", 128, "--extent", 20, "--out", src)
    code, text, _ = run(capsys, "qqpft", src, "--out", out)
    assert code == 0
    ratio = float(re.search(r"parseval ratio .* = (\S+)", text).group(1))
    assert abs(ratio - 1) <= 1e-9
    meta = info(capsys, out)
    assert meta["format"] == "QQPF1"
    assert abs(float(meta["max_modulus"]) - 1.0) <= 1e-8
    assert [float(v) for v in meta["peak_at"].split()] == [0.0, 0.0]
    # a unit-height Gaussian carries the same L2 norm on both sides
    assert math.isclose(float(meta["l2_norm"]), math.sqrt(math.pi), rel_tol=1e-6)


def test_direct_and_fast_files_agree(tmp_path, capsys):
    src = tmp_path / "q.qsig"
    run(capsys, "gen", "quaternion-random", "--n", 32, "--extent", 14, "--seed", 3, "--out", src)
    params = "0.1,1.1,0.2,-0.4,0.5;-0.1,0.9,0.1,0.3,-0.6"
    run(capsys, "qqpft", src, "--params", params, "--out", tmp_path / "fast")
    run(capsys, "qqpft", src, "--params", params, "--direct", "--out", tmp_path / "direct")
    a, b = fileio.read_transform(tmp_path / "fast"), fileio.read_transform(tmp_path / "direct")
    assert np.array_equal(a.freq.xi1, b.freq.xi1)
    assert np.abs(a.values - b.values).max() <= 1e-8


def test_b_zero_is_a_usage_error(gauss32, tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        main(["qqpft", str(gauss32), "--params", "1,0,0,0,0", "--out", str(tmp_path / "x")])
    assert exc.value.code == 2
    assert "B ≠ 0" in capsys.readouterr().err


def test_stft_energy_ratio(gauss32, tmp_path, capsys):
    out = tmp_path / "s.qtf"
    code, text, _ = run(capsys, "stft", gauss32, "--out", out)
    assert code == 0
    ratio = float(re.search(r"energy ratio .* = (\S+)", text).group(1))
    assert abs(ratio - 1) <= 1e-3
    meta = info(capsys, out)
    assert meta["format"] == "QTF41" and meta["kind"] == "stqqpft"
    assert meta["lattice"] == "32 32 32 32"


def test_tf_commands_and_slices(gauss32, tmp_path, capsys):
    params = "0.05,1.2,0,0,0.1;0,0.8,0.1,0.2,0"
    for cmd, kind in (("af", "qqpaf"), ("wvd", "qqpwvd")):
        out = tmp_path / f"{cmd}.qtf"
        assert run(capsys, cmd, gauss32, "--params", params, "--out", out)[0] == 0
        F = fileio.read_tf(out)
        assert F.kind == kind
        csv = tmp_path / f"{cmd}.csv"
        code, text, _ = run(capsys, cmd, gauss32, "--params", params, "--slice", "0,0", "--out", csv)
        assert code == 0 and "slice at x = (0, 0)" in text
        rows = np.loadtxt(csv, delimiter=",", skiprows=1)
        zero = int(np.argmin(np.abs(F.x1)))
        assert np.allclose(rows[:, 3:], F.slice(zero, zero).reshape(-1, 4), atol=1e-12)
    code, text, _ = run(capsys, "stft", gauss32, "--slice", "0.3,-0.2", "--out", tmp_path / "s.csv")
    assert code == 0 and "0.4375" in text


def test_direct_stft_matches_fast(tmp_path, capsys):
    src = tmp_path / "q.qsig"
    run(capsys, "gen", "random-smooth", "--n", 8, "--extent", 6, "--seed", 1, "--out", src)
    run(capsys, "stft", src, "--out", tmp_path / "a")
    run(capsys, "stft", src, "--direct", "--out", tmp_path / "b")
    a = fileio.read_tf(tmp_path / "a").materialize().values
    b = fileio.read_tf(tmp_path / "b").materialize().values
    assert np.abs(a - b).max() <= 1e-12
    assert run(capsys, "af", src, "--direct", "--out", tmp_path / "c")[0] == 2


def test_grid_mismatch(gauss32, tmp_path, capsys):
    other = tmp_path / "o.qsig"
    run(capsys, "gen", "gaussian", "--n", 32, "--extent", 10, "--out", other)
    code, _, err = run(capsys, "stft", gauss32, "--window", other, "--out", tmp_path / "x")
    assert code == 2 and "grid mismatch" in err


def test_size_limit_needs_force(tmp_path, capsys):
    big = tmp_path / "big.qsig"
    run(capsys, "gen", "gaussian", "--n", 256, "--out", big)
    code, _, err = run(capsys, "stft", big, "--out", tmp_path / "x")
    assert code == 2 and "--force" in err
    assert not (tmp_path / "x").exists()


def test_chirp_warning_is_reported(gauss32, tmp_path, capsys):
    code, _, err = run(capsys, "qqpft", gauss32, "--params", "0.5,1,0,0,0", "--out", tmp_path / "x")
    assert code == 0 and "warning" in err and "alias" in err


def test_verify_all(tmp_path, capsys):
    out = tmp_path / "all.tsv"
    code, text, _ = run(capsys, "verify", "--battery", "all", "--seed", 7, "--n", 32, "--out", out)
    assert code == 0, text
    lines = out.read_text().splitlines()
    assert lines[0] == fileio.REPORT_HEADER
    assert len(lines) - 1 >= 60
    assert all(line.split("\t")[4] == "true" for line in lines[1:])
    assert "0 failed" in text


def test_verify_parseval_on_impulse(tmp_path, capsys):
    src, out = tmp_path / "i.qsig", tmp_path / "p.tsv"
    run(capsys, "gen", "impulse", "--n", 32, "--extent", 14, "--out", src)
    assert run(capsys, "verify", src, "--battery", "parseval", "--pairs", 1, "--out", out)[0] == 0
    rows = [line.split("\t") for line in out.read_text().splitlines()[1:]]
    parseval = [r for r in rows if r[0] == "parseval"]
    assert parseval and all(abs(float(r[3])) <= 1e-6 * float(r[2]) for r in parseval)


def test_verify_hy_on_impulse_reports_failure(tmp_path, capsys):
    # a lattice delta is not in the regime where the discrete sharp constant holds for p < 2
    src, out = tmp_path / "i.qsig", tmp_path / "h.tsv"
    run(capsys, "gen", "impulse", "--n", 32, "--extent", 14, "--out", src)
    code, text, _ = run(capsys, "verify", src, "--battery", "hy", "--pairs", 1, "--out", out)
    assert code == 1 and "FAIL hausdorff-young" in text
    assert out.exists()


def test_verify_lemma41(tmp_path, capsys):
    out = tmp_path / "l.tsv"
    assert run(capsys, "verify", "--battery", "lemma41", "--out", out)[0] == 0
    rows = out.read_text().splitlines()[1:]
    assert [r.split("\t")[0] for r in rows] == ["lemma41[shift,1000pts]", "lemma41[wvd,1000pts]"]
    assert all(float(r.split("\t")[1]) <= 1e-10 for r in rows)


def test_verify_options(tmp_path, capsys):
    out = tmp_path / "r.tsv"
    code, _, _ = run(capsys, "verify", "--battery", "renyi", "--alpha", 0.7, "--alpha", 0.9,
                     "--signals", 1, "--pairs", 1, "--params", "0,1.5,0,0,0", "--out", out)
    assert code == 0
    rows = [line.split("\t") for line in out.read_text().splitlines()[1:]]
    assert len(rows) == 2 and all(r[6] == "0.0,1.5,0.0,0.0,0.0;0.0,1.5,0.0,0.0,0.0" for r in rows)
    with pytest.raises(SystemExit):
        main(["verify", "--battery", "nonsense", "--out", str(out)])


def test_info_errors(tmp_path, capsys):
    code, _, err = run(capsys, "info", tmp_path / "missing")
    assert code == 2 and "error" in err
    junk = tmp_path / "junk"
    junk.write_bytes(b"not a container")
    assert run(capsys, "info", junk)[0] == 2
