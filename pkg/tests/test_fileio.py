import struct

import numpy as np
import pytest

from qqpft import fileio
from qqpft.analysis import make_report
from qqpft.generators import gaussian
from qqpft.grid_signal import GridSpec
from qqpft.params_kernels import FT_PAIR, ParamPair, ParamSet
from qqpft.time_frequency import WindowedPair, qqpaf, qqpwvd, stqqpft
from qqpft.transforms import qqpft_fast

from conftest import rand_quat_signal

P = ParamPair(ParamSet(0.05, 1.1, 0.2, -0.4, 0.5), ParamSet(-0.03, -0.9, 0.1, 0.3, -0.6))


def test_signal_layout_and_round_trip(tmp_path, rng):
    f = rand_quat_signal(GridSpec(8, 3.5), rng)
    a, b = tmp_path / "a.qsig", tmp_path / "b.qsig"
    fileio.write_signal(a, f)
    raw = a.read_bytes()
    assert raw[:8] == b"QSIG1\0\0\0"
    assert struct.unpack("<Id", raw[8:20]) == (8, 3.5)
    assert len(raw) == 20 + 8 * 8 * 4 * 8
    # row-major, components interleaved
    assert struct.unpack("<4d", raw[20:52]) == tuple(f.samples[0, 0])
    assert struct.unpack("<4d", raw[52:84]) == tuple(f.samples[0, 1])
    g = fileio.read_signal(a)
    assert np.array_equal(g.samples, f.samples) and g.spec == f.spec
    fileio.write_signal(b, g)
    assert b.read_bytes() == raw


def test_transform_round_trip(tmp_path, rng):
    F = qqpft_fast(rand_quat_signal(GridSpec(16, 5.0), rng), P)
    a, b = tmp_path / "a.qqpf", tmp_path / "b.qqpf"
    fileio.write_transform(a, F)
    assert a.read_bytes()[:8] == b"QQPF1\0\0\0"
    G = fileio.read_transform(a)
    assert G.params == P and np.array_equal(G.values, F.values)
    assert np.array_equal(G.freq.xi1, F.freq.xi1) and G.source == F.source
    fileio.write_transform(b, G)
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("kind", ["stqqpft", "qqpaf", "qqpwvd"])
def test_tf_round_trip(tmp_path, kind):
    spec = GridSpec(8, 4.0)
    f, g = gaussian(spec), gaussian(spec, 1.3)
    F = {"stqqpft": lambda: stqqpft(WindowedPair(f, g, P)),
         "qqpaf": lambda: qqpaf(f, g, P),
         "qqpwvd": lambda: qqpwvd(f, g, P)}[kind]()
    a, b = tmp_path / "a.qtf", tmp_path / "b.qtf"
    rows = []
    fileio.write_tf(a, F, on_row=rows.append)
    assert len(rows) == F.shape[0]
    G = fileio.read_tf(a)
    assert G.kind == kind and G.shape == F.shape and G.params == P and G.source == spec
    assert np.array_equal(G.materialize().values, np.stack(rows))
    fileio.write_tf(b, G)
    assert a.read_bytes() == b.read_bytes()


def test_sniff_and_format_errors(tmp_path, rng):
    f = rand_quat_signal(GridSpec(4, 1.0), rng)
    p = tmp_path / "s.qsig"
    fileio.write_signal(p, f)
    assert fileio.sniff(p) == fileio.MAGIC_SIGNAL
    with pytest.raises(fileio.FormatError):
        fileio.read_transform(p)
    with pytest.raises(fileio.FormatError):
        fileio.read_tf(p)
    trunc = tmp_path / "t.qsig"
    trunc.write_bytes(p.read_bytes()[:-8])
    with pytest.raises(fileio.FormatError):
        fileio.read_signal(trunc)
    extra = tmp_path / "x.qsig"
    extra.write_bytes(p.read_bytes() + b"\0")
    with pytest.raises(fileio.FormatError):
        fileio.read_signal(extra)
    bad_grid = tmp_path / "g.qsig"
    bad_grid.write_bytes(b"QSIG1\0\0\0" + struct.pack("<Id", 1, 1.0) + bytes(32))
    with pytest.raises(fileio.FormatError):
        fileio.read_signal(bad_grid)


def test_signal_csv(tmp_path):
    f = gaussian(GridSpec(4, 2.0))
    p = tmp_path / "s.csv"
    fileio.write_signal_csv(p, f)
    lines = p.read_text().splitlines()
    assert lines[0] == "t1,t2,r0,r1,r2,r3"
    assert len(lines) == 17
    first = [float(v) for v in lines[1].split(",")]
    assert first[:2] == [-1.0, -1.0] and first[2] == f.samples[0, 0, 0]
    # the last sample is t = (0.5, 0.5)
    assert [float(v) for v in lines[-1].split(",")][:2] == [0.5, 0.5]


def test_slice_csv(tmp_path):
    vals = np.arange(2 * 3 * 4, dtype=float).reshape(2, 3, 4) / 7
    p = tmp_path / "slice.csv"
    fileio.write_slice_csv(p, np.array([0.0, 1.0]), np.array([-1.0, 0.0, 1.0]), vals)
    lines = p.read_text().splitlines()
    assert lines[0] == "xi1,xi2,abs,r0,r1,r2,r3"
    row = [float(v) for v in lines[2].split(",")]
    assert row[:2] == [0.0, 0.0]
    assert row[3:] == list(vals[0, 1])
    assert row[2] == pytest.approx(np.linalg.norm(vals[0, 1]), rel=1e-15)


def test_reports_file(tmp_path):
    reps = [make_report("a", 1.0, 2.0, "le", 0.0, "d", FT_PAIR, 3), make_report("b", 1.0, 2.0, "ge", 0.0, "d")]
    p = tmp_path / "r.tsv"
    fileio.write_reports(p, reps)
    lines = p.read_text().splitlines()
    assert lines[0] == fileio.REPORT_HEADER
    assert lines[1].split("\t") == ["a", "1", "2", "1", "true", "3", str(FT_PAIR)]
    assert lines[2].split("\t")[4] == "false"
