"""Binary containers (QSIG1, QQPF1, QTF41), CSV exports and TSV reports.

All binary fields are little-endian. Every container starts with an 8-byte
magic. Values are ``(r0, r1, r2, r3)`` float64 quadruples in row-major
order. Writing what was read reproduces the file byte for byte.
"""

from __future__ import annotations

import struct
from pathlib import Path
from typing import Iterable

import numpy as np

from .grid_signal import FreqGridSpec, GridSpec, QSignal2D, TFGrid4D
from .params_kernels import ParamPair, ParamSet
from .transforms import QQPFTResult

__all__ = [
    "MAGIC_SIGNAL",
    "MAGIC_TRANSFORM",
    "MAGIC_TF",
    "KIND_CODES",
    "FormatError",
    "write_signal",
    "read_signal",
    "write_transform",
    "read_transform",
    "write_tf",
    "read_tf",
    "sniff",
    "write_signal_csv",
    "write_slice_csv",
    "write_reports",
    "REPORT_HEADER",
]

MAGIC_SIGNAL = b"QSIG1\0\0\0"
MAGIC_TRANSFORM = b"QQPF1\0\0\0"
MAGIC_TF = b"QTF41\0\0\0"
KIND_CODES = {"generic": 0, "stqqpft": 1, "qqpaf": 2, "qqpwvd": 3}
_KIND_NAMES = {v: k for k, v in KIND_CODES.items()}
_F8 = np.dtype("<f8")
REPORT_HEADER = "# inequality_id\tlhs\trhs\tmargin\tpassed\tseed\tparams"


class FormatError(ValueError):
    """Malformed or truncated container."""


def _params_blob(P: ParamPair) -> bytes:
    return struct.pack("<10d", *P.l1.astuple(), *P.l2.astuple())


def _params_from(vals) -> ParamPair:
    v = [float(x) for x in vals]
    return ParamPair(ParamSet(*v[:5]), ParamSet(*v[5:]))


def _values_bytes(a: np.ndarray) -> bytes:
    return np.ascontiguousarray(a, dtype=_F8).tobytes()


class _Reader:
    def __init__(self, data: bytes, path):
        self.data, self.pos, self.path = data, 0, path

    def take(self, nbytes: int) -> bytes:
        if self.pos + nbytes > len(self.data):
            raise FormatError(f"{self.path}: file is truncated")
        out = self.data[self.pos:self.pos + nbytes]
        self.pos += nbytes
        return out

    def unpack(self, fmt: str):
        return struct.unpack(fmt, self.take(struct.calcsize(fmt)))

    def floats(self, count: int) -> np.ndarray:
        return np.frombuffer(self.take(8 * count), dtype=_F8).astype(float)

    def finish(self) -> None:
        if self.pos != len(self.data):
            raise FormatError(f"{self.path}: {len(self.data) - self.pos} trailing bytes")


def _open(path, magic: bytes) -> _Reader:
    data = Path(path).read_bytes()
    if data[:8] != magic:
        raise FormatError(f"{path}: expected magic {magic!r}, found {data[:8]!r}")
    r = _Reader(data, path)
    r.pos = 8
    return r


def sniff(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read(8)


# ---------------------------------------------------------------------------
# QSIG1


def write_signal(path, f: QSignal2D) -> None:
    with open(path, "wb") as fh:
        fh.write(MAGIC_SIGNAL)
        fh.write(struct.pack("<Id", f.spec.n, f.spec.extent))
        fh.write(_values_bytes(f.samples))


def read_signal(path) -> QSignal2D:
    r = _open(path, MAGIC_SIGNAL)
    n, extent = r.unpack("<Id")
    try:
        spec = GridSpec(n, extent)
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    vals = r.floats(n * n * 4).reshape(n, n, 4)
    r.finish()
    return QSignal2D(spec, vals)


# ---------------------------------------------------------------------------
# QQPF1


def write_transform(path, F: QQPFTResult) -> None:
    if F.source is None:
        raise ValueError("transform result does not record its source grid")
    with open(path, "wb") as fh:
        fh.write(MAGIC_TRANSFORM)
        fh.write(struct.pack("<Id", F.freq.n, F.source.extent))
        fh.write(_params_blob(F.params))
        fh.write(_values_bytes(F.freq.xi1))
        fh.write(_values_bytes(F.freq.xi2))
        fh.write(_values_bytes(F.values))


def read_transform(path) -> QQPFTResult:
    r = _open(path, MAGIC_TRANSFORM)
    n, extent = r.unpack("<Id")
    P = _params_from(r.floats(10))
    xi1, xi2 = r.floats(n), r.floats(n)
    vals = r.floats(n * n * 4).reshape(n, n, 4)
    r.finish()
    return QQPFTResult(P, FreqGridSpec(n, xi1, xi2), vals, source=GridSpec(n, extent))


# ---------------------------------------------------------------------------
# QTF41


def write_tf(path, F: TFGrid4D, on_row=None) -> None:
    """Stream a 4D field to disk one ``x1`` row at a time.

    ``on_row(row)`` is called for every row written, which lets callers
    reduce the field without computing it twice.
    """
    if F.params is None or F.source is None:
        raise ValueError("field must record its parameters and source grid")
    if F.x1.size != F.x2.size or F.xi1.size != F.xi2.size:
        raise ValueError("the container stores square lattices only")
    with open(path, "wb") as fh:
        fh.write(MAGIC_TF)
        fh.write(struct.pack("<IIdII", KIND_CODES.get(F.kind, 0), F.source.n, F.source.extent,
                             F.x1.size, F.xi1.size))
        for a in (F.x1, F.x2, F.xi1, F.xi2):
            fh.write(_values_bytes(a))
        fh.write(_params_blob(F.params))
        for row in F.iter_rows():
            fh.write(_values_bytes(row))
            if on_row is not None:
                on_row(row)


def read_tf(path) -> TFGrid4D:
    """Read a 4D field; rows are served lazily from a memory map."""
    with open(path, "rb") as fh:
        head = fh.read(8 + struct.calcsize("<IIdII"))
    if head[:8] != MAGIC_TF:
        raise FormatError(f"{path}: expected magic {MAGIC_TF!r}, found {head[:8]!r}")
    if len(head) < 8 + struct.calcsize("<IIdII"):
        raise FormatError(f"{path}: file is truncated")
    code, n_src, extent, nx, nxi = struct.unpack("<IIdII", head[8:])
    header = 8 + struct.calcsize("<IIdII") + 8 * (2 * nx + 2 * nxi + 10)
    body = nx * nx * nxi * nxi * 4 * 8
    size = Path(path).stat().st_size
    if size != header + body:
        raise FormatError(f"{path}: expected {header + body} bytes, found {size}")
    axes = np.fromfile(path, dtype=_F8, count=2 * nx + 2 * nxi + 10,
                       offset=8 + struct.calcsize("<IIdII")).astype(float)
    x1, x2 = axes[:nx], axes[nx:2 * nx]
    xi1, xi2 = axes[2 * nx:2 * nx + nxi], axes[2 * nx + nxi:2 * nx + 2 * nxi]
    P = _params_from(axes[2 * nx + 2 * nxi:])
    mm = np.memmap(path, dtype=_F8, mode="r", offset=header, shape=(nx, nx, nxi, nxi, 4))
    return TFGrid4D(x1, x2, xi1, xi2, row_fn=lambda i: np.array(mm[i], dtype=float), params=P,
                    kind=_KIND_NAMES.get(code, "generic"), source=GridSpec(n_src, extent))


# ---------------------------------------------------------------------------
# text exports


def _fmt(rows: np.ndarray) -> list[str]:
    return [",".join(f"{v:.17g}" for v in r) for r in rows]


def write_signal_csv(path, f: QSignal2D) -> None:
    t1, t2 = f.spec.mesh()
    rows = np.column_stack([t1.ravel(), t2.ravel(), f.samples.reshape(-1, 4)])
    Path(path).write_text("\n".join(["t1,t2,r0,r1,r2,r3"] + _fmt(rows)) + "\n")


def write_slice_csv(path, xi1: np.ndarray, xi2: np.ndarray, values: np.ndarray) -> None:
    """One frequency slice: columns ``xi1, xi2, |S|, r0..r3``."""
    a, b = np.meshgrid(xi1, xi2, indexing="ij")
    v = values.reshape(-1, 4)
    rows = np.column_stack([a.ravel(), b.ravel(), np.sqrt(np.sum(v * v, axis=1)), v])
    Path(path).write_text("\n".join(["xi1,xi2,abs,r0,r1,r2,r3"] + _fmt(rows)) + "\n")


def write_reports(path, reports: Iterable) -> None:
    lines = [REPORT_HEADER] + [r.tsv() for r in reports]
    Path(path).write_text("\n".join(lines) + "\n")
