"""Command-line front end.

Exit status: 0 when everything requested succeeded (and every check
passed), 1 when a verification check failed, 2 for usage and I/O errors.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings

import numpy as np

from . import fileio
from .analysis import tf_entropy
from .battery import BATTERIES, BatteryConfig, run_battery
from .generators import GENERATORS, generate
from .grid_signal import GridSpec, lp_norm
from .params_kernels import FT_PAIR, format_pair, parse_pair
from .time_frequency import (
    WindowedPair,
    qqpaf,
    qqpaf_at,
    qqpwvd,
    qqpwvd_at,
    stqqpft,
    stqqpft_at,
    wvd_lag_grid,
)
from .transforms import ChirpAliasingWarning, canonical_freq_grid, qqpft_direct, qqpft_fast

__all__ = ["main", "build_parser", "SIZE_LIMIT"]

SIZE_LIMIT = 2 * 1024 ** 3


class UsageError(Exception):
    pass


def _pair(text: str):
    try:
        return parse_pair(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _xy(text: str) -> tuple[float, float]:
    try:
        a, b = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'x1,x2', got {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qqpft", description=(
        "Quaternion quadratic-phase Fourier transforms and uncertainty-principle checks."))
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="synthesise a test signal (QSIG1)")
    g.add_argument("generator", choices=GENERATORS)
    g.add_argument("--n", type=int, default=128)
    g.add_argument("--extent", type=float, default=20.0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--width", type=float, default=1.0)
    g.add_argument("--rate", type=float, default=0.5, help="chirp rate")
    g.add_argument("--csv", help="also write the samples as CSV")
    g.add_argument("--out", required=True)

    q = sub.add_parser("qqpft", help="transform a signal (QQPF1)")
    q.add_argument("input")
    q.add_argument("--params", type=_pair, default=FT_PAIR)
    q.add_argument("--direct", action="store_true", help="use direct quadrature")
    q.add_argument("--csv", help="also write the result as CSV")
    q.add_argument("--out", required=True)

    for name, help_ in (("stft", "short-time transform"), ("af", "ambiguity function"),
                        ("wvd", "Wigner-Ville distribution")):
        t = sub.add_parser(name, help=f"{help_} (QTF41, or a CSV slice)")
        t.add_argument("input")
        t.add_argument("--window", help="window QSIG1 file (defaults to the input)")
        t.add_argument("--params", type=_pair, default=FT_PAIR)
        t.add_argument("--slice", type=_xy, help="write only the slice nearest x1,x2 as CSV")
        t.add_argument("--direct", action="store_true", help="use direct quadrature")
        t.add_argument("--force", action="store_true", help="allow outputs above 2 GiB")
        t.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run a verification battery (TSV report)")
    v.add_argument("input", nargs="?", help="optional QSIG1 signal to analyse")
    v.add_argument("--battery", choices=BATTERIES, default="all")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--n", type=int, default=32)
    v.add_argument("--extent", type=float, default=14.0)
    v.add_argument("--params", type=_pair, help="fixed parameters instead of random draws")
    v.add_argument("--alpha", type=float, action="append", help="Renyi order(s)")
    v.add_argument("--q", type=float, action="append", help="Lieb exponent(s)")
    v.add_argument("--epsilon", type=float, action="append", help="concentration level(s)")
    v.add_argument("--signals", type=int, default=3)
    v.add_argument("--pairs", type=int, default=2)
    v.add_argument("--out", required=True)

    i = sub.add_parser("info", help="describe a QSIG1, QQPF1 or QTF41 file")
    i.add_argument("path")
    return p


# ---------------------------------------------------------------------------
# commands


def cmd_gen(a) -> int:
    spec = GridSpec(a.n, a.extent)
    f = generate(a.generator, spec, seed=a.seed, width=a.width, rate=a.rate)
    fileio.write_signal(a.out, f)
    if a.csv:
        fileio.write_signal_csv(a.csv, f)
    print(f"wrote {a.out}: {a.generator}, n={a.n}, extent={a.extent:g}, L2 norm={lp_norm(f, 2):.10g}")
    return 0


def cmd_qqpft(a) -> int:
    f = fileio.read_signal(a.input)
    F = qqpft_direct(f, a.params) if a.direct else qqpft_fast(f, a.params)
    fileio.write_transform(a.out, F)
    if a.csv:
        fileio.write_slice_csv(a.csv, F.freq.xi1, F.freq.xi2, F.values)
    energy = a.params.b_product * float(np.sum(F.values ** 2)) * F.cell_measure
    print(f"wrote {a.out}: params {format_pair(a.params)}")
    print(f"parseval ratio |B1B2| ||Qf||^2 / ||f||^2 = {energy / lp_norm(f, 2) ** 2:.12g}")
    return 0


def _nearest(coords: np.ndarray, x: float) -> int:
    return int(np.argmin(np.abs(coords - x)))


def cmd_tf(a) -> int:
    f = fileio.read_signal(a.input)
    g = fileio.read_signal(a.window) if a.window else f
    if f.spec != g.spec:
        raise UsageError(f"grid mismatch between signal {f.spec} and window {g.spec}")
    P = a.params
    kind = {"stft": "stqqpft", "af": "qqpaf", "wvd": "qqpwvd"}[a.command]

    if a.slice is not None:
        return _write_slice(a, kind, f, g, P)

    if a.direct and kind != "stqqpft":
        raise UsageError("--direct is only available for stft without --slice")
    if kind == "stqqpft":
        F = stqqpft(WindowedPair(f, g, P), direct=a.direct)
    elif kind == "qqpaf":
        F = qqpaf(f, g, P)
    else:
        F = qqpwvd(f, g, P)
    if F.nbytes > SIZE_LIMIT and not a.force:
        raise UsageError(f"output would take {F.nbytes / 1024 ** 3:.2f} GiB; "
                         "pass --force or request a --slice")
    acc = [0.0]

    def tally(row):
        acc[0] += float(np.sum(row * row))

    fileio.write_tf(a.out, F, on_row=tally)
    energy = acc[0] * F.cell_measure
    ratio = P.b_product * energy / (lp_norm(f, 2) * lp_norm(g, 2)) ** 2
    print(f"wrote {a.out}: {kind}, lattice {F.shape}, params {format_pair(P)}")
    print(f"energy ratio |B1B2| ||F||^2 / (||f||^2 ||g||^2) = {ratio:.12g}")
    return 0


def _write_slice(a, kind, f, g, P) -> int:
    x1, x2 = a.slice
    spec = f.spec
    n = spec.n
    if kind == "stqqpft":
        freq = canonical_freq_grid(spec, P)
        t = spec.coords()
        i1, i2 = _nearest(t, x1), _nearest(t, x2)
        lag = (i1 - n // 2, i2 - n // 2)
        vals = stqqpft_at(f, g, P, lag, freq.xi1, freq.xi2)
        at = (t[i1], t[i2])
    elif kind == "qqpaf":
        if n % 4:
            raise UsageError("the ambiguity lattice needs n divisible by 4")
        freq = canonical_freq_grid(spec, P)
        half = np.arange(n // 2) - n // 4
        xs = 2 * half * spec.delta
        i1, i2 = _nearest(xs, x1), _nearest(xs, x2)
        vals = qqpaf_at(f, g, P, (int(half[i1]), int(half[i2])), freq.xi1, freq.xi2)
        at = (xs[i1], xs[i2])
    else:
        freq = canonical_freq_grid(wvd_lag_grid(spec), P)
        t = spec.coords()
        i1, i2 = _nearest(t, x1), _nearest(t, x2)
        vals = qqpwvd_at(f, g, P, (i1, i2), freq.xi1, freq.xi2)
        at = (t[i1], t[i2])
    fileio.write_slice_csv(a.out, freq.xi1, freq.xi2, vals)
    print(f"wrote {a.out}: {kind} slice at x = ({at[0]:.10g}, {at[1]:.10g})")
    return 0


def cmd_verify(a) -> int:
    signal = fileio.read_signal(a.input) if a.input else None
    defaults = BatteryConfig()
    cfg = BatteryConfig(
        seed=a.seed, n=a.n, extent=a.extent,
        n_signals=1 if signal is not None else a.signals, n_pairs=a.pairs,
        alphas=tuple(a.alpha) if a.alpha else defaults.alphas,
        lieb_qs=tuple(a.q) if a.q else defaults.lieb_qs,
        concentration_q=a.q[0] if a.q and a.q[0] > 2 else defaults.concentration_q,
        epsilons=tuple(a.epsilon) if a.epsilon else defaults.epsilons,
        signal=signal, params=a.params)
    reports = run_battery(a.battery, cfg)
    fileio.write_reports(a.out, reports)
    failed = [r for r in reports if not r.passed]
    print(f"{a.battery}: {len(reports)} checks, {len(failed)} failed; report in {a.out}")
    for r in failed:
        print(f"  FAIL {r.inequality_id}: lhs={r.lhs:.10g} rhs={r.rhs:.10g} margin={r.margin:.3g}")
    return 1 if failed else 0


def cmd_info(a) -> int:
    magic = fileio.sniff(a.path)
    if magic == fileio.MAGIC_SIGNAL:
        f = fileio.read_signal(a.path)
        o = f.spec.origin_index
        lines = ["format: QSIG1", f"n: {f.spec.n}", f"extent: {f.spec.extent!r}",
                 f"l2_norm: {lp_norm(f, 2):.17g}", f"max_modulus: {float(f.modulus().max()):.17g}",
                 "origin_value: " + ",".join(f"{v:.17g}" for v in f.samples[o, o])]
    elif magic == fileio.MAGIC_TRANSFORM:
        F = fileio.read_transform(a.path)
        mod = F.modulus()
        k = np.unravel_index(int(np.argmax(mod)), mod.shape)
        l2 = math.sqrt(float(np.sum(mod ** 2)) * F.cell_measure)
        lines = ["format: QQPF1", f"n: {F.freq.n}", f"source_extent: {F.source.extent!r}",
                 f"params: {format_pair(F.params)}",
                 f"xi1_range: {F.freq.xi1[0]:.17g} {F.freq.xi1[-1]:.17g}",
                 f"xi2_range: {F.freq.xi2[0]:.17g} {F.freq.xi2[-1]:.17g}",
                 f"l2_norm: {l2:.17g}",
                 f"scaled_l2_norm: {l2 * math.sqrt(F.params.b_product):.17g}",
                 f"max_modulus: {float(mod.max()):.17g}",
                 f"peak_at: {F.freq.xi1[k[0]]:.17g} {F.freq.xi2[k[1]]:.17g}"]
    elif magic == fileio.MAGIC_TF:
        F = fileio.read_tf(a.path)
        e = peak = 0.0
        for m in F.modulus_rows():
            e += float(np.sum(m * m))
            peak = max(peak, float(m.max()))
        lines = ["format: QTF41", f"kind: {F.kind}", f"lattice: {' '.join(map(str, F.shape))}",
                 f"source_n: {F.source.n}", f"source_extent: {F.source.extent!r}",
                 f"params: {format_pair(F.params)}", f"energy: {e * F.cell_measure:.17g}",
                 f"max_modulus: {peak:.17g}", f"entropy: {tf_entropy(F):.17g}"]
    else:
        raise UsageError(f"{a.path}: unrecognised file (magic {magic!r})")
    print("\n".join(lines))
    return 0


_COMMANDS = {"gen": cmd_gen, "qqpft": cmd_qqpft, "stft": cmd_tf, "af": cmd_tf, "wvd": cmd_tf,
             "verify": cmd_verify, "info": cmd_info}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", ChirpAliasingWarning)
            status = _COMMANDS[args.command](args)
    except (UsageError, fileio.FormatError, OSError, ValueError) as exc:
        print(f"qqpft {args.command}: error: {exc}", file=sys.stderr)
        return 2
    msgs = list(dict.fromkeys(str(w.message) for w in caught))
    if len(msgs) == 1:
        print(f"qqpft {args.command}: warning: {msgs[0]}", file=sys.stderr)
    elif msgs:
        print(f"qqpft {args.command}: warning: {len(msgs)} parameter sets exceed the chirp "
              f"sampling guard (first: {msgs[0]})", file=sys.stderr)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
