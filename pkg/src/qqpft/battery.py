"""Randomised verification batteries shared by the CLI and the test-suite.

A battery draws smooth quaternion signals, windows and parameter pairs from
one seeded generator, runs a family of checks and returns the reports in a
fixed order, so equal seeds give identical output.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import analysis as an
from .generators import quaternion_random
from .grid_signal import GridSpec, QSignal2D, TFGrid4D, lp_norm
from .params_kernels import (
    ParamPair,
    ParamSet,
    kernel,
    shift_offset,
    shift_phase,
    wvd_params,
    wvd_phase,
)
from .quaternion_core import qmul_array
from .time_frequency import (
    WindowedPair,
    qqpaf,
    qqpwvd,
    reflect,
    stqqpft,
    stqqpft_at,
    wvd_pair,
)

__all__ = [
    "BATTERIES",
    "BatteryConfig",
    "random_param_pair",
    "suite",
    "run_battery",
    "lemma41_errors",
    "af_relation_error",
    "wvd_relation_error",
]

BATTERIES = ("parseval", "hy", "renyi", "shannon", "lieb", "concentration", "entropy-tf",
             "lemma41", "thm45", "thm46", "all")
IDENTITY_SLACK = 1e-10
RELATION_SLACK = 1e-8


@dataclass(frozen=True)
class BatteryConfig:
    seed: int = 0
    n: int = 32
    extent: float = 14.0
    n_signals: int = 3
    n_pairs: int = 2
    alphas: tuple[float, ...] = (0.6, 0.8)
    hy_ps: tuple[float, ...] = (1.0, 4.0 / 3.0, 2.0)
    lieb_qs: tuple[float, ...] = (2.0, 3.0, 4.0)
    epsilons: tuple[float, ...] = (0.0, 0.2, 0.5)
    concentration_q: float = 3.0
    identity_points: int = 1000
    signal: QSignal2D | None = None
    params: ParamPair | None = None


def random_param_pair(rng: np.random.Generator) -> ParamPair:
    """``|A|, |C| <= 0.5``, ``0.5 <= |B| <= 2``, ``|D|, |E| <= 1``."""
    def one() -> ParamSet:
        a, c = rng.uniform(-0.5, 0.5, size=2)
        b = rng.uniform(0.5, 2.0) * rng.choice([-1.0, 1.0])
        d, e = rng.uniform(-1.0, 1.0, size=2)
        return ParamSet(a, b, c, d, e)
    return ParamPair(one(), one())


def _unit(f: QSignal2D) -> QSignal2D:
    return f.scaled(1.0 / lp_norm(f, 2))


def suite(cfg: BatteryConfig) -> Iterator[tuple[int, QSignal2D, QSignal2D, ParamPair]]:
    """Yield ``(index, f, g, P)`` with unit-norm ``f`` and ``g``.

    Each signal is paired with the next draw as its window and with
    ``n_pairs`` parameter pairs. A user-supplied signal replaces the drawn
    one and fixed parameters replace the drawn pairs; the draws still happen
    so the remaining stream is unchanged.
    """
    rng = np.random.default_rng(cfg.seed)
    spec = GridSpec(cfg.n, cfg.extent) if cfg.signal is None else cfg.signal.spec
    idx = 0
    for _ in range(cfg.n_signals):
        f = quaternion_random(spec, rng) if cfg.signal is None else cfg.signal
        g = quaternion_random(spec, rng)
        pairs = [random_param_pair(rng) for _ in range(cfg.n_pairs)]
        if cfg.params is not None:
            pairs = [cfg.params]
        for P in pairs:
            yield idx, f, _unit(g), P
            idx += 1


# ---------------------------------------------------------------------------
# identity checks


def lemma41_errors(rng: np.random.Generator, points: int) -> tuple[float, float]:
    """Worst componentwise residuals of the shift and WVD kernel identities.

    Each point draws fresh arguments and checks both axes.
    """
    shift_err = wvd_err = 0.0
    for _ in range(points):
        L = ParamSet(*rng.uniform(-1, 1, size=1), rng.uniform(0.5, 2) * rng.choice([-1, 1]),
                     *rng.uniform(-1, 1, size=3))
        t, xi, r, k, x = rng.uniform(-3, 3, size=5)
        for axis in ("i", "j"):
            lhs = kernel(axis, L, t + r * k, xi)
            rhs = kernel(axis, L, t, xi + shift_offset(L, r, k)) * shift_phase(axis, L, r, k, xi)
            shift_err = max(shift_err, max(abs(a - b) for a, b in zip(lhs, rhs)))
            lhs = kernel(axis, L, 2 * (t - x), xi)
            rhs = (kernel(axis, wvd_params(L), t, xi - 4 * L.a * x / L.b)
                   * wvd_phase(axis, L, x, xi))
            wvd_err = max(wvd_err, max(abs(a - b) for a, b in zip(lhs, rhs)))
    return shift_err, wvd_err


def _sandwich(left: np.ndarray, mid: np.ndarray, right: np.ndarray) -> np.ndarray:
    return qmul_array(qmul_array(left, mid), right)


def af_relation_error(A: TFGrid4D, f, g, P: ParamPair, points) -> float:
    """Max residual of ``A(x, xi) = phi * S(x, xi - A x / B) * phi`` over ``points``.

    ``points`` holds ``(i1, i2, a, b)``: ambiguity lattice indices, then
    frequency indices.
    """
    half = A.meta["half_lags"]
    d = f.spec.delta
    worst = 0.0
    for i1, i2, a, b in points:
        s1, s2 = int(half[i1]), int(half[i2])
        x1, x2 = 2 * s1 * d, 2 * s2 * d
        xi1, xi2 = A.xi1[a], A.xi2[b]
        lhs = A.slice(i1, i2)[a, b]
        s = stqqpft_at(f, g, P, (2 * s1, 2 * s2),
                       [xi1 + shift_offset(P.l1, -0.5, x1)], [xi2 + shift_offset(P.l2, -0.5, x2)])[0, 0]
        rhs = _sandwich(shift_phase("i", P.l1, -0.5, x1, xi1).to_array(), s,
                        shift_phase("j", P.l2, -0.5, x2, xi2).to_array())
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def wvd_relation_error(W: TFGrid4D, f, g, P: ParamPair, points) -> float:
    """Max residual of ``W(x, xi) = 4 psi * S'(2x, xi - 4 A x / B) * psi``.

    ``S'`` uses the reflected window and doubled parameters; ``points``
    holds ``(c1, c2, a, b)`` grid and frequency indices.
    """
    n = f.spec.n
    t = f.spec.coords()
    gt = reflect(g)
    Pp = wvd_pair(P)
    worst = 0.0
    for c1, c2, a, b in points:
        x1, x2 = t[c1], t[c2]
        xi1, xi2 = W.xi1[a], W.xi2[b]
        lhs = W.slice(c1, c2)[a, b]
        s = stqqpft_at(f, gt, Pp, (2 * (c1 - n // 2), 2 * (c2 - n // 2)),
                       [xi1 - 4 * P.l1.a * x1 / P.l1.b], [xi2 - 4 * P.l2.a * x2 / P.l2.b])[0, 0]
        rhs = 4 * _sandwich(wvd_phase("i", P.l1, x1, xi1).to_array(), s,
                            wvd_phase("j", P.l2, x2, xi2).to_array())
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst


def _af_points(rng, n: int, count: int = 6):
    return [(int(rng.integers(n // 8, 3 * n // 8)), int(rng.integers(n // 8, 3 * n // 8)),
             int(rng.integers(n)), int(rng.integers(n))) for _ in range(count)]


def _wvd_points(rng, n: int, count: int = 6):
    # below n/2 the lattice sum keeps a g[0] term that the reflected window cannot mirror
    lo, hi = n // 2, n // 2 + n // 4
    return [(int(rng.integers(lo, hi)), int(rng.integers(lo, hi)),
             int(rng.integers(n)), int(rng.integers(n))) for _ in range(count)]


# ---------------------------------------------------------------------------
# driver


def _wants(name: str, battery: str) -> bool:
    return battery == "all" or battery == name


def run_battery(battery: str, cfg: BatteryConfig) -> list[an.VerificationReport]:
    if battery not in BATTERIES:
        raise ValueError(f"unknown battery {battery!r}; choose from {', '.join(BATTERIES)}")
    seed = cfg.seed
    out: list[an.VerificationReport] = []
    rng = np.random.default_rng([cfg.seed, 1])

    if _wants("lemma41", battery):
        shift_err, wvd_err = lemma41_errors(rng, cfg.identity_points)
        digest = an.digest_inputs("lemma41", cfg.seed, cfg.identity_points)
        out.append(an.make_report(f"lemma41[shift,{cfg.identity_points}pts]", shift_err, 0.0, "eq",
                              IDENTITY_SLACK, digest, None, seed))
        out.append(an.make_report(f"lemma41[wvd,{cfg.identity_points}pts]", wvd_err, 0.0, "eq",
                              IDENTITY_SLACK, digest, None, seed))
        if battery == "lemma41":
            return out

    needs_tf = any(_wants(b, battery) for b in ("lieb", "concentration", "entropy-tf"))
    for idx, f, g, P in suite(cfg):
        f_raw, f = f, _unit(f)
        if _wants("parseval", battery):
            out.append(an.check_parseval(f_raw, P, seed=seed))
            out.append(an.check_parseval_inner(f_raw, g, P, seed=seed))
        if _wants("hy", battery):
            out.extend(an.check_hausdorff_young(f_raw, P, p, seed=seed) for p in cfg.hy_ps)
        if _wants("renyi", battery):
            out.extend(an.check_renyi_up(f, P, a, seed=seed) for a in cfg.alphas)
        if _wants("shannon", battery):
            out.append(an.check_shannon_up(f, P, seed=seed))

        fields: dict[str, TFGrid4D] = {}
        if needs_tf:
            fields["stqqpft"] = stqqpft(WindowedPair(f, g, P)).materialize()
        if _wants("lieb", battery):
            S = fields["stqqpft"]
            out.extend(an.check_lieb_inequality(f, g, P, q, S=S, seed=seed) for q in cfg.lieb_qs)
            out.append(an.check_energy_identity(f, g, P, S=S, seed=seed))
        if _wants("concentration", battery) or _wants("entropy-tf", battery):
            fields["qqpaf"] = qqpaf(f, g, P).materialize()
            fields["qqpwvd"] = qqpwvd(f, g, P).materialize()
        if _wants("entropy-tf", battery):
            out.extend(an.check_entropy_up_tf(f, g, P, k, F=fields[k], seed=seed)
                       for k in an.TF_KINDS)
        if _wants("concentration", battery):
            for k in an.TF_KINDS:
                out.extend(an.check_concentration_up(fields[k], k, e, cfg.concentration_q, seed=seed)
                           for e in cfg.epsilons)

        if _wants("thm45", battery):
            A = fields["qqpaf"] if "qqpaf" in fields else qqpaf(f, g, P)
            err = af_relation_error(A, f, g, P, _af_points(rng, f.spec.n))
            out.append(an.make_report("thm45[af-shear]", err, 0.0, "eq", RELATION_SLACK,
                                  an.digest_inputs(f, g, P, "thm45"), P, seed))
        if _wants("thm46", battery):
            W = fields["qqpwvd"] if "qqpwvd" in fields else qqpwvd(f, g, P)
            err = wvd_relation_error(W, f, g, P, _wvd_points(rng, f.spec.n))
            out.append(an.make_report("thm46[wvd-reflect]", err, 0.0, "eq", RELATION_SLACK,
                                  an.digest_inputs(f, g, P, "thm46"), P, seed))
    return out
