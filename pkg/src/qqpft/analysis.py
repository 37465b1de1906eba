"""Entropies, identity checks and uncertainty-inequality checks.

Every ``check_*`` function returns a :class:`VerificationReport`. Its
``margin`` is oriented so that ``margin >= 0`` means the relation holds
exactly, and ``passed`` is ``margin >= -slack``. ``slack`` is stored as an
absolute amount even when it was specified relative to the right-hand side.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .grid_signal import (
    QSignal2D,
    TFGrid4D,
    inner_product,
    lp_norm,
    lp_norm_4d,
    scalar_inner,
    scalar_inner_4d,
)
from .params_kernels import ParamPair
from .quaternion_core import conj_array, qmul_array
from .time_frequency import WindowedPair, qqpaf, qqpwvd, stqqpft
from .transforms import QQPFTResult, _is_pow2, qqpft_direct, qqpft_fast

__all__ = [
    "DensityGrid",
    "VerificationReport",
    "make_report",
    "digest_inputs",
    "signal_density",
    "transform_density",
    "tf_density",
    "normalize",
    "renyi_entropy",
    "shannon_entropy",
    "transform",
    "check_parseval",
    "check_parseval_inner",
    "check_hausdorff_young",
    "check_renyi_up",
    "check_shannon_up",
    "check_lieb_inequality",
    "check_energy_identity",
    "check_inner_product_relation",
    "essential_support_measure",
    "concentration_bound",
    "check_concentration_up",
    "tf_entropy",
    "tf_entropy_bound",
    "check_entropy_up_tf",
    "hy_constant",
    "renyi_bound",
    "shannon_bound",
    "lieb_bound",
]

REL_EXACT = 1e-6
REL_QUADRATURE = 1e-3
ABS_STRICT = 1e-9
MASS_TOL = 1e-9
TF_KINDS = ("stqqpft", "qqpaf", "qqpwvd")


# ---------------------------------------------------------------------------
# densities and entropies


@dataclass(frozen=True, eq=False)
class DensityGrid:
    domain: str
    cell_measure: float
    weights: np.ndarray

    def __post_init__(self):
        if self.domain not in ("2d", "4d"):
            raise ValueError(f"domain must be '2d' or '4d', got {self.domain!r}")
        if not self.cell_measure > 0:
            raise ValueError("cell measure must be positive")
        w = np.asarray(self.weights, dtype=float)
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("density weights must be finite and nonnegative")
        w = np.ascontiguousarray(w)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights) * self.cell_measure)


def signal_density(f: QSignal2D) -> DensityGrid:
    """``|f|^2`` on the signal grid."""
    return DensityGrid("2d", f.spec.delta ** 2, np.sum(f.samples ** 2, axis=-1))


def transform_density(F: QQPFTResult) -> DensityGrid:
    """``|B1 B2| |Q f|^2``, which has the same mass as ``|f|^2``."""
    return DensityGrid("2d", F.cell_measure, F.params.b_product * np.sum(F.values ** 2, axis=-1))


def tf_density(F: TFGrid4D) -> DensityGrid:
    w = np.stack([m * m for m in F.modulus_rows()])
    return DensityGrid("4d", F.cell_measure, w)


def normalize(P: DensityGrid) -> DensityGrid:
    m = P.mass
    if m == 0:
        raise ValueError("cannot normalise a zero density")
    return DensityGrid(P.domain, P.cell_measure, P.weights / m)


def _require_normalized(P: DensityGrid) -> None:
    if abs(P.mass - 1.0) > MASS_TOL:
        raise ValueError(f"density has mass {P.mass!r}; normalise it first")


def renyi_entropy(P: DensityGrid, alpha: float) -> float:
    """``log(sum P^alpha * cell) / (1 - alpha)``."""
    if not alpha > 0 or alpha == 1:
        raise ValueError(f"Renyi order must be positive and different from 1, got {alpha}")
    _require_normalized(P)
    w = P.weights[P.weights > 0]
    # log-sum-exp keeps large alpha from underflowing
    lw = alpha * np.log(w)
    top = lw.max()
    s = top + math.log(float(np.sum(np.exp(lw - top)))) + math.log(P.cell_measure)
    return s / (1.0 - alpha)


def shannon_entropy(P: DensityGrid) -> float:
    """``-sum P log P * cell`` with ``0 log 0 = 0``."""
    _require_normalized(P)
    w = P.weights[P.weights > 0]
    return float(-np.sum(w * np.log(w)) * P.cell_measure)


# ---------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class VerificationReport:
    inequality_id: str
    lhs: float
    rhs: float
    margin: float
    passed: bool
    inputs_digest: str
    slack: float
    seed: int | None = None
    params: str = ""

    def tsv(self) -> str:
        seed = "" if self.seed is None else str(self.seed)
        return "\t".join([self.inequality_id, f"{self.lhs:.17g}", f"{self.rhs:.17g}",
                          f"{self.margin:.17g}", "true" if self.passed else "false",
                          seed, self.params])


def digest_inputs(*parts) -> str:
    h = hashlib.sha256()
    for p in parts:
        if isinstance(p, np.ndarray):
            h.update(np.ascontiguousarray(p, dtype=float).tobytes())
        elif isinstance(p, QSignal2D):
            h.update(repr((p.spec.n, p.spec.extent)).encode())
            h.update(p.samples.tobytes())
        else:
            h.update(repr(p).encode())
        h.update(b"|")
    return h.hexdigest()


def make_report(name, lhs, rhs, sense, slack, digest, P=None, seed=None) -> VerificationReport:
    """``sense`` is ``"le"`` (lhs <= rhs), ``"ge"`` or ``"eq"``."""
    lhs, rhs = float(lhs), float(rhs)
    if sense == "le":
        margin = rhs - lhs
    elif sense == "ge":
        margin = lhs - rhs
    else:
        margin = -abs(lhs - rhs)
    return VerificationReport(name, lhs, rhs, margin, bool(margin >= -slack), digest,
                              float(slack), seed, "" if P is None else str(P))


def transform(f: QSignal2D, P: ParamPair) -> QQPFTResult:
    """Fast path when the grid allows it, direct quadrature otherwise."""
    return qqpft_fast(f, P) if _is_pow2(f.spec.n) else qqpft_direct(f, P)


def _norm_F(F: QQPFTResult, q: float) -> float:
    m = F.modulus()
    if np.isinf(q):
        return float(m.max())
    top = m.max()
    if top == 0:
        return 0.0
    return float(top * (np.sum((m / top) ** q) * F.cell_measure) ** (1.0 / q))


# ---------------------------------------------------------------------------
# single-transform checks


def check_parseval(f: QSignal2D, P: ParamPair, slack_rel: float = REL_EXACT, seed=None):
    """``|B1 B2| ||Q f||^2 = ||f||^2``."""
    F = transform(f, P)
    lhs = P.b_product * _norm_F(F, 2) ** 2
    rhs = lp_norm(f, 2) ** 2
    return make_report("parseval", lhs, rhs, "eq", slack_rel * abs(rhs), digest_inputs(f, P), P, seed)


def check_parseval_inner(f: QSignal2D, g: QSignal2D, P: ParamPair,
                         slack_rel: float = REL_QUADRATURE, seed=None):
    """``|B1 B2| Sc<Qf, Qg> = Sc<f, g>``; slack is relative to ``||f|| ||g||``."""
    Ff, Fg = transform(f, P), transform(g, P)
    lhs = P.b_product * float(np.sum(Ff.values * Fg.values)) * Ff.cell_measure
    rhs = scalar_inner(f, g)
    scale = lp_norm(f, 2) * lp_norm(g, 2)
    return make_report("parseval-inner", lhs, rhs, "eq", slack_rel * scale, digest_inputs(f, g, P), P, seed)


def _conjugate_exponent(p: float) -> float:
    return math.inf if p == 1 else p / (p - 1)


def hy_constant(p: float, P: ParamPair) -> float:
    """``(2 pi)^(1/q - 1/p) A_p^2 / |B1 B2|^(1/q)`` with ``A_p = (p^(1/p) / q^(1/q))^(1/2)``."""
    q = _conjugate_exponent(p)
    inv_q = 0.0 if math.isinf(q) else 1.0 / q
    qq = 1.0 if math.isinf(q) else q ** inv_q
    ap2 = p ** (1.0 / p) / qq
    return (2 * math.pi) ** (inv_q - 1.0 / p) * ap2 / P.b_product ** inv_q


def check_hausdorff_young(f: QSignal2D, P: ParamPair, p: float,
                          slack_rel: float = REL_QUADRATURE, seed=None):
    if not 1 <= p <= 2:
        raise ValueError(f"Hausdorff-Young needs 1 <= p <= 2, got {p}")
    F = transform(f, P)
    q = _conjugate_exponent(p)
    lhs = _norm_F(F, q)
    rhs = hy_constant(p, P) * lp_norm(f, p)
    return make_report(f"hausdorff-young[p={p:.6g}]", lhs, rhs, "le", slack_rel * rhs,
                   digest_inputs(f, P, p), P, seed)


def _require_unit(f: QSignal2D) -> None:
    nf = lp_norm(f, 2)
    if abs(nf - 1.0) > MASS_TOL:
        raise ValueError(f"signal must have unit L2 norm, got {nf!r}")


def renyi_bound(alpha: float, P: ParamPair) -> float:
    beta = alpha / (2 * alpha - 1)
    return (-math.log(P.b_product) - 2 * math.log(2 * math.pi)
            - (math.log(2 * alpha) / (1 - alpha) + math.log(2 * beta) / (1 - beta)))


def check_renyi_up(f: QSignal2D, P: ParamPair, alpha: float, slack: float = ABS_STRICT, seed=None):
    if not 0.5 < alpha < 1:
        raise ValueError(f"alpha must lie in (1/2, 1), got {alpha}")
    _require_unit(f)
    beta = alpha / (2 * alpha - 1)
    F = transform(f, P)
    lhs = renyi_entropy(signal_density(f), alpha) + renyi_entropy(transform_density(F), beta)
    return make_report(f"renyi[alpha={alpha:.6g}]", lhs, renyi_bound(alpha, P), "ge", slack,
                   digest_inputs(f, P, alpha), P, seed)


def shannon_bound(P: ParamPair) -> float:
    """``log(e^2 / (16 pi^2 |B1 B2|))``."""
    return 2.0 - math.log(16 * math.pi ** 2 * P.b_product)


def check_shannon_up(f: QSignal2D, P: ParamPair, slack: float = ABS_STRICT, seed=None):
    _require_unit(f)
    F = transform(f, P)
    lhs = shannon_entropy(signal_density(f)) + shannon_entropy(transform_density(F))
    return make_report("shannon", lhs, shannon_bound(P), "ge", slack, digest_inputs(f, P), P, seed)


# ---------------------------------------------------------------------------
# time-frequency checks


def _tf(kind: str, f: QSignal2D, g: QSignal2D, P: ParamPair) -> TFGrid4D:
    if kind == "stqqpft":
        return stqqpft(WindowedPair(f, g, P))
    if kind == "qqpaf":
        return qqpaf(f, g, P)
    if kind == "qqpwvd":
        return qqpwvd(f, g, P)
    raise ValueError(f"unknown time-frequency kind {kind!r}; expected one of {TF_KINDS}")


def lieb_bound(q: float, P: ParamPair) -> float:
    """Constant in ``||S||_q <= C ||f|| ||g||``."""
    inv_p = 1.0 - 1.0 / q
    return (2 * math.pi) ** (1.0 / q - inv_p) * (2.0 / q) ** (2.0 / q) / P.b_product ** (1.0 / q)


def check_lieb_inequality(f: QSignal2D, g: QSignal2D, P: ParamPair, q: float,
                          slack_rel: float = REL_QUADRATURE, S: TFGrid4D | None = None, seed=None):
    if not q >= 2:
        raise ValueError(f"Lieb's inequality needs q >= 2, got {q}")
    S = S if S is not None else _tf("stqqpft", f, g, P)
    lhs = lp_norm_4d(S, q)
    rhs = lieb_bound(q, P) * lp_norm(f, 2) * lp_norm(g, 2)
    return make_report(f"lieb[q={q:.6g}]", lhs, rhs, "le", slack_rel * rhs, digest_inputs(f, g, P, q), P, seed)


def check_energy_identity(f: QSignal2D, g: QSignal2D, P: ParamPair,
                          slack_rel: float = REL_QUADRATURE, S: TFGrid4D | None = None, seed=None):
    """``||S||^2 = ||f||^2 ||g||^2 / |B1 B2|``."""
    S = S if S is not None else _tf("stqqpft", f, g, P)
    lhs = lp_norm_4d(S, 2) ** 2
    rhs = (lp_norm(f, 2) * lp_norm(g, 2)) ** 2 / P.b_product
    return make_report("energy", lhs, rhs, "eq", slack_rel * rhs, digest_inputs(f, g, P), P, seed)


def check_inner_product_relation(f1, g1, f2, g2, P: ParamPair, slack_rel: float = REL_QUADRATURE,
                                 periodic: bool = False, seed=None):
    """``|B1 B2| Sc<S_g1 f1, S_g2 f2> = Sc sum f1 M conj(f2) delta^2`` with ``M = sum conj(g1) g2 delta^2``.

    Slack is relative to ``||f1|| ||g1|| ||f2|| ||g2||``.
    """
    S1 = stqqpft(WindowedPair(f1, g1, P), periodic=periodic)
    S2 = stqqpft(WindowedPair(f2, g2, P), periodic=periodic)
    lhs = P.b_product * scalar_inner_4d(S1, S2)
    M = inner_product(g1.conj(), g2.conj()).to_array()
    mid = qmul_array(qmul_array(f1.samples, M), conj_array(f2.samples))
    rhs = float(np.sum(mid[..., 0]) * f1.spec.delta ** 2)
    scale = lp_norm(f1, 2) * lp_norm(g1, 2) * lp_norm(f2, 2) * lp_norm(g2, 2)
    return make_report("inner-product", lhs, rhs, "eq", slack_rel * scale,
                   digest_inputs(f1, g1, f2, g2, P), P, seed)


def essential_support_measure(F: TFGrid4D, epsilon: float) -> float:
    """Smallest lattice measure carrying all but ``epsilon^2`` of the energy.

    Cells are dropped from the weakest upwards while the dropped energy stays
    within ``epsilon^2`` of the total.
    """
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1), got {epsilon}")
    e = np.sort(np.concatenate([(m * m).ravel() for m in F.modulus_rows()]))
    total = float(e.sum())
    if total == 0:
        raise ValueError("field is identically zero")
    dropped = int(np.searchsorted(np.cumsum(e), epsilon ** 2 * total, side="right"))
    return (e.size - dropped) * F.cell_measure


def concentration_bound(kind: str, P: ParamPair, epsilon: float, q: float) -> float:
    if kind not in TF_KINDS:
        raise ValueError(f"unknown time-frequency kind {kind!r}")
    if epsilon == 0:
        base = (2 * math.pi * math.e) ** 2
    else:
        if not q > 2:
            raise ValueError(f"concentration bound needs q > 2, got {q}")
        base = ((2 * math.pi) ** 2 * (1 - epsilon ** 2) ** (q / (q - 2))
                * (q / 2) ** (4 / (q - 2)))
    if kind == "qqpwvd":
        base /= 16
    return base / P.b_product


def check_concentration_up(F: TFGrid4D, kind: str, epsilon: float, q: float = 4.0,
                           slack: float = ABS_STRICT, seed=None):
    if not q > 2:
        raise ValueError(f"q must exceed 2, got {q}")
    if F.params is None:
        raise ValueError("field does not record its parameters")
    lhs = essential_support_measure(F, epsilon)
    rhs = concentration_bound(kind, F.params, epsilon, q)
    return make_report(f"concentration[{kind},eps={epsilon:.6g},q={q:.6g}]", lhs, rhs, "ge", slack,
                   digest_inputs(kind, epsilon, q, F.params, F.shape, F.cell_measure), F.params, seed)


def tf_entropy(F: TFGrid4D) -> float:
    """``-sum |F|^2 log |F|^2 * cell`` over the 4D lattice."""
    acc = 0.0
    for m in F.modulus_rows():
        w = (m * m).ravel()
        w = w[w > 0]
        acc -= float(np.sum(w * np.log(w)))
    return acc * F.cell_measure


def tf_entropy_bound(kind: str, P: ParamPair) -> float:
    if kind not in TF_KINDS:
        raise ValueError(f"unknown time-frequency kind {kind!r}")
    c = 2.0 - math.log(16) if kind == "qqpwvd" else 2.0
    return c / P.b_product


def check_entropy_up_tf(f: QSignal2D, g: QSignal2D, P: ParamPair, kind: str,
                        slack: float = ABS_STRICT, F: TFGrid4D | None = None, seed=None):
    prod = lp_norm(f, 2) * lp_norm(g, 2)
    if abs(prod - 1.0) > MASS_TOL:
        raise ValueError(f"need ||f|| ||g|| = 1, got {prod!r}")
    F = F if F is not None else _tf(kind, f, g, P)
    return make_report(f"entropy-tf[{kind}]", tf_entropy(F), tf_entropy_bound(kind, P), "ge", slack,
                   digest_inputs(f, g, P, kind), P, seed)
