"""Quaternion quadratic-phase Fourier analysis on sampled 2D grids."""

from .analysis import (
    DensityGrid,
    VerificationReport,
    check_concentration_up,
    check_entropy_up_tf,
    check_hausdorff_young,
    check_lieb_inequality,
    check_parseval,
    check_renyi_up,
    check_shannon_up,
    essential_support_measure,
    renyi_entropy,
    shannon_entropy,
)
from .grid_signal import FreqGridSpec, GridSpec, QSignal2D, TFGrid4D, lp_norm, lp_norm_4d
from .params_kernels import ParamPair, ParamSet
from .quaternion_core import Quaternion
from .time_frequency import WindowedPair, qqpaf, qqpwvd, stqqpft, stqqpft_inverse
from .transforms import QQPFTResult, qft_fast, qqpft_direct, qqpft_fast, qqpft_inverse

__version__ = "0.1.0"

__all__ = [
    "DensityGrid",
    "VerificationReport",
    "check_concentration_up",
    "check_entropy_up_tf",
    "check_hausdorff_young",
    "check_lieb_inequality",
    "check_parseval",
    "check_renyi_up",
    "check_shannon_up",
    "essential_support_measure",
    "renyi_entropy",
    "shannon_entropy",
    "FreqGridSpec",
    "GridSpec",
    "QSignal2D",
    "TFGrid4D",
    "lp_norm",
    "lp_norm_4d",
    "ParamPair",
    "ParamSet",
    "Quaternion",
    "WindowedPair",
    "qqpaf",
    "qqpwvd",
    "stqqpft",
    "stqqpft_inverse",
    "QQPFTResult",
    "qft_fast",
    "qqpft_direct",
    "qqpft_fast",
    "qqpft_inverse",
]
