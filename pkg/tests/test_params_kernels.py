import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qqpft.params_kernels import (
    FT_PAIR,
    FT_PARAMS,
    INV_SQRT_2PI,
    ParamPair,
    ParamSet,
    conj_kernel,
    format_pair,
    kernel,
    parse_pair,
    parse_params,
    printed_shift_phase_angle,
    printed_wvd_phase_angle,
    scaled_params,
    shift_offset,
    shift_phase,
    shift_phase_angle,
    wvd_params,
    wvd_phase,
    wvd_phase_angle,
)
from qqpft.quaternion_core import ONE, Quaternion, conj, exp_axis, modulus

from conftest import rand_pair

reals = st.floats(-3, 3, allow_nan=False)
nonzero_b = st.one_of(st.floats(0.5, 2.0), st.floats(-2.0, -0.5))
params = st.builds(ParamSet, st.floats(-1, 1), nonzero_b, st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
axes = st.sampled_from("ij")


def qclose(a: Quaternion, b: Quaternion, tol=1e-10) -> bool:
    return a.isclose(b, atol=tol)


def random_draws(rng, count=1000):
    for _ in range(count):
        L = ParamSet(rng.uniform(-1, 1), rng.uniform(0.5, 2) * rng.choice([-1, 1]),
                     *rng.uniform(-1, 1, size=3))
        yield L, *rng.uniform(-3, 3, size=5)


# --- construction and parsing ----------------------------------------------------

def test_b_zero_rejected_with_constraint_name():
    with pytest.raises(ValueError, match="B ≠ 0"):
        ParamSet(1, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        ParamSet(0, 1e-13)
    ParamSet(0, 1e-12)


def test_non_finite_rejected():
    with pytest.raises(ValueError):
        ParamSet(math.nan, 1.0)


def test_parse_round_trip():
    P = parse_pair("0.3,1.1,0.2,-0.4,0.5;-0.2,0.9,0.1,0.3,-0.6")
    assert P.l1 == ParamSet(0.3, 1.1, 0.2, -0.4, 0.5)
    assert P.l2 == ParamSet(-0.2, 0.9, 0.1, 0.3, -0.6)
    assert parse_pair(format_pair(P)) == P
    assert parse_pair("0,1,0,0,0") == FT_PAIR
    assert abs(P.b_product - 0.99) < 1e-15


@pytest.mark.parametrize("text", ["1,2,3", "a,1,0,0,0", "0,1,0,0,0;0,1,0,0,0;0,1,0,0,0", "1,0,0,0,0"])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_pair(text)


def test_parse_params_single():
    assert parse_params(" 1, 2 ,3,4,5") == ParamSet(1, 2, 3, 4, 5)


# --- kernel ----------------------------------------------------------------------

def test_kernel_at_zero_phase():
    for xi in (-2.0, 0.0, 3.7):
        assert kernel("i", FT_PARAMS, 0.0, xi) == Quaternion(INV_SQRT_2PI)
    assert math.isclose(INV_SQRT_2PI, 0.3989423, rel_tol=1e-7)


def test_kernel_example_phase_two():
    k = kernel("i", ParamSet(1, 1, 1, 1, 1), 1.0, 0.0)
    assert qclose(k, Quaternion(math.cos(2), -math.sin(2)) * INV_SQRT_2PI, 1e-15)


def test_kernel_modulus_1000_draws(rng):
    for L, t, xi, *_ in random_draws(rng):
        for axis in "ij":
            assert abs(modulus(kernel(axis, L, t, xi)) - INV_SQRT_2PI) <= 1e-12


def test_ft_specialisation_is_plain_exponential():
    for t, xi in [(0.3, -1.2), (2.0, 2.5)]:
        k = kernel("i", FT_PARAMS, t, xi)
        assert k == Quaternion(math.cos(t * xi), -math.sin(t * xi)) * INV_SQRT_2PI
        kj = kernel("j", FT_PARAMS, t, xi)
        assert kj == Quaternion(math.cos(t * xi), 0, -math.sin(t * xi)) * INV_SQRT_2PI


def test_conj_kernel_examples(rng):
    L = ParamSet(0.4, -1.3, 0.2, 0.1, -0.7)
    assert qclose(kernel("i", L, 0.7, 1.1) * conj_kernel("i", L, 0.7, 1.1), Quaternion(1 / (2 * math.pi)), 1e-15)
    assert conj_kernel("i", L, 0.0, 0.0) == Quaternion(INV_SQRT_2PI)
    for L, t, xi, *_ in random_draws(rng, 50):
        assert conj_kernel("j", L, t, xi) == conj(kernel("j", L, t, xi))


# --- shift factor --------------------------------------------------------------------

def test_shift_phase_trivial_cases():
    L = ParamSet(0.4, 1.3, 0.2, 0.1, -0.7)
    assert shift_phase("i", L, 0.0, 2.0, 1.0) == ONE
    assert shift_phase("j", L, 0.5, 0.0, 1.0) == ONE


def test_shift_phase_without_quadratic_term():
    L = ParamSet(0.0, 1.3, 0.2, 0.4, -0.7)
    r, k, xi = 0.5, 1.7, -0.9
    assert shift_offset(L, r, k) == 0.0
    expected = exp_axis("j", -(L.d * r * k + L.b * r * k * xi))
    assert qclose(shift_phase("j", L, r, k, xi), expected, 1e-15)


def test_shift_identity_1000_points(rng):
    worst = 0.0
    for L, t, xi, r, k, _ in random_draws(rng):
        for axis in "ij":
            lhs = kernel(axis, L, t + r * k, xi)
            rhs = kernel(axis, L, t, xi + shift_offset(L, r, k)) * shift_phase(axis, L, r, k, xi)
            worst = max(worst, max(abs(a - b) for a, b in zip(lhs, rhs)))
    assert worst <= 1e-10


@given(params, axes, reals, reals, reals, reals, reals)
def test_shift_phase_is_independent_of_t(L, axis, t1, t2, xi, r, k):
    def factor(t):
        return conj(kernel(axis, L, t, xi + shift_offset(L, r, k))) * kernel(axis, L, t + r * k, xi) * (2 * math.pi)
    assert qclose(factor(t1), factor(t2), 1e-9)
    assert qclose(factor(t1), shift_phase(axis, L, r, k, xi), 1e-9)


def test_printed_shift_form_agrees_only_when_a_times_e_minus_one_vanishes():
    r, k, xi = 0.7, -1.3, 0.4
    for L in (ParamSet(0.0, 1.2, 0.3, 0.5, 0.8), ParamSet(0.4, -1.1, 0.3, 0.5, 1.0)):
        assert math.isclose(printed_shift_phase_angle(L, r, k, xi), shift_phase_angle(L, r, k, xi),
                            rel_tol=1e-13, abs_tol=1e-13)
    L = ParamSet(0.4, -1.1, 0.3, 0.5, 0.2)
    gap = printed_shift_phase_angle(L, r, k, xi) - shift_phase_angle(L, r, k, xi)
    # the printed last term uses 1 where the expansion produces E
    assert math.isclose(gap, -2 * r * L.a * k * (1 - L.e) / L.b, rel_tol=1e-12)


def test_printed_shift_form_fails_the_kernel_identity():
    L = ParamSet(0.4, -1.1, 0.3, 0.5, 0.2)
    r, k, t, xi = 0.7, -1.3, 0.25, 0.4
    lhs = kernel("i", L, t + r * k, xi)
    printed = exp_axis("i", -printed_shift_phase_angle(L, r, k, xi))
    rhs = kernel("i", L, t, xi + shift_offset(L, r, k)) * printed
    assert not lhs.isclose(rhs, atol=1e-6)


# --- Wigner factor ------------------------------------------------------------------------

def test_wvd_phase_trivial_and_closed_form():
    L = ParamSet(0.0, 1.4, 0.3, 0.0, 0.6)
    assert wvd_phase("i", L, 0.0, 1.3) == ONE
    x, xi = 0.8, -0.6
    assert qclose(wvd_phase("i", L, x, xi), exp_axis("i", 2 * L.b * x * xi), 1e-15)


def test_wvd_identity_1000_points(rng):
    worst = 0.0
    for L, t, xi, _, _, x in random_draws(rng):
        for axis in "ij":
            lhs = kernel(axis, L, 2 * (t - x), xi)
            rhs = kernel(axis, wvd_params(L), t, xi - 4 * L.a * x / L.b) * wvd_phase(axis, L, x, xi)
            worst = max(worst, max(abs(a - b) for a, b in zip(lhs, rhs)))
    assert worst <= 1e-10


@given(params, axes, reals, reals, reals, reals)
def test_wvd_phase_is_independent_of_t(L, axis, t1, t2, x, xi):
    def factor(t):
        Lp = wvd_params(L)
        return conj(kernel(axis, Lp, t, xi - 4 * L.a * x / L.b)) * kernel(axis, L, 2 * (t - x), xi) * (2 * math.pi)
    assert qclose(factor(t1), factor(t2), 1e-9)


@given(params, reals, reals)
def test_printed_wvd_form_matches(L, x, xi):
    assert math.isclose(printed_wvd_phase_angle(L, x, xi), wvd_phase_angle(L, x, xi),
                        rel_tol=1e-12, abs_tol=1e-10)


@given(params, axes, reals, reals)
def test_phase_factors_have_unit_modulus(L, axis, x, xi):
    assert abs(modulus(shift_phase(axis, L, 0.5, x, xi)) - 1) <= 1e-12
    assert abs(modulus(wvd_phase(axis, L, x, xi)) - 1) <= 1e-12


# --- derived parameter sets ------------------------------------------------------------------

def test_scaled_params_examples():
    L = ParamSet(1, 2, 3, 4, 5)
    assert scaled_params(L, 1) == L
    assert scaled_params(L, 2) == ParamSet(4, 4, 3, 8, 5)
    with pytest.raises(ValueError):
        scaled_params(L, 0)


@given(params, axes, reals, reals, st.floats(0.25, 4))
def test_scaled_kernel_identity(L, axis, t, xi, lam):
    assert qclose(kernel(axis, L, lam * t, xi), kernel(axis, scaled_params(L, lam), t, xi), 1e-12)


def test_wvd_params_examples():
    assert wvd_params(FT_PARAMS) == ParamSet(0, 2, 0, 0, 0)
    assert wvd_params(ParamSet(1, 1, 1, 1, 1)) == ParamSet(4, 2, 1, 2, 1)


@given(params)
def test_wvd_params_is_doubling_on_a_b_d(L):
    w, s = wvd_params(L), scaled_params(L, 2)
    assert (w.a, w.b, w.d) == (s.a, s.b, s.d)
    assert (w.c, w.e) == (L.c, L.e)


def test_pair_helpers(rng):
    P = rand_pair(rng)
    assert list(P) == [P.l1, P.l2]
    assert isinstance(P, ParamPair)
