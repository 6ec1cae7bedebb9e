import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subordlab.errors import LogarithmicTerm, NearZeroConstantTerm, SingularAtOrigin
from subordlab.power_series import (
    SchwarzSeries,
    TaylorSeries,
    ValuedSeries,
    blaschke_schwarz,
    boundary_profile,
    compose,
    divide,
    evaluate,
    exponential,
    integrate_log,
    integrate_valued,
    linear_combine,
    logarithm,
    multiply,
    power_real,
    schwarz_sample,
    tail_estimate,
    z_derivative,
)

from conftest import complex_coeffs

N = 32


def T(c, order=None):
    return TaylorSeries(c, order)


def close(a, b, tol=1e-12):
    a = a.coeffs if isinstance(a, TaylorSeries) else np.asarray(a, dtype=complex)
    b = b.coeffs if isinstance(b, TaylorSeries) else np.asarray(b, dtype=complex)
    n = min(a.size, b.size)
    return np.max(np.abs(a[:n] - b[:n])) <= tol


# --------------------------------------------------------------------------
# worked examples


class TestExamples:
    def test_linear_combine(self):
        assert close(linear_combine(1, T([1, 1]), 1, T([1, -1])), [2, 0])
        f, g = T([1, 2, 3]), T([5, 6])
        out = linear_combine(1, f, 0, g)
        assert out.order == 1 and close(out, [1, 2])
        assert close(linear_combine(2, T([0, 1, 0]), -1, T([0, 0, 1])), [0, 2, -1])

    def test_multiply(self):
        assert close(multiply(T([1, 1], 2), T([1, -1], 2)), [1, 0, -1])
        f = T([1, 2, 3])
        assert close(multiply(f, T([1], 2)), f)
        assert close(multiply(T([1, 1, 1, 1]), T([1, 1, 1, 1])), [1, 2, 3, 4])

    def test_divide(self):
        assert close(divide(T([1], 6), T([1, 1], 6)), [1, -1, 1, -1, 1, -1, 1])
        f = T([2, 1, 3, 4])
        assert close(divide(f, f), [1, 0, 0, 0])
        assert close(divide(T([0, 1], 6), T([1, 1], 6)), [0, 1, -1, 1, -1, 1, -1])

    def test_divide_rejects_small_constant(self):
        with pytest.raises(NearZeroConstantTerm):
            divide(T([1, 1]), T([1e-13, 1]))

    def test_exp_log_power(self):
        assert close(exponential(T([0, 1], 4)), [1, 1, 1 / 2, 1 / 6, 1 / 24])
        assert close(power_real(T([1, 1], 3), 0.5), [1, 1 / 2, -1 / 8, 1 / 16])
        f = T([0.3, 0.2 - 0.1j, 0.05, 0.4j], 8)
        assert close(logarithm(exponential(f)), f, 1e-12)

    def test_log_rejects_small_constant(self):
        with pytest.raises(NearZeroConstantTerm):
            logarithm(T([0, 1]))

    def test_z_derivative(self):
        assert close(z_derivative(T([1, 1, 1])), [0, 1, 2])
        assert close(z_derivative(T([5])), [0])
        assert close(z_derivative(T([0, 1, 0, 3])), [0, 1, 0, 9])

    def test_integrate_log(self):
        assert close(integrate_log(T([0, 2])), [0, 2])
        half_plane_minus_one = T([0] + [2] * 8)
        # -2 log(1 - z)
        assert close(integrate_log(half_plane_minus_one), [0, 2, 1, 2 / 3, 1 / 2, 2 / 5, 1 / 3, 2 / 7], 1e-14)
        assert close(integrate_log(T([0, 0, 3])), [0, 0, 3 / 2])
        with pytest.raises(SingularAtOrigin):
            integrate_log(T([1, 1]))

    def test_integrate_valued(self):
        v = integrate_valued(ValuedSeries(0, T([1])))
        assert v.exponent == 1 and close(v.unit, [1])
        a, b = 0.7, 1.6
        v = integrate_valued(ValuedSeries(a + b - 1, T([1])))
        assert math.isclose(v.exponent, a + b) and close(v.unit, [1 / (a + b)])
        v = integrate_valued(ValuedSeries(1, T([1, 1])))
        assert v.exponent == 2 and close(v.unit, [1 / 2, 1 / 3])

    def test_integrate_valued_log_term(self):
        with pytest.raises(LogarithmicTerm):
            integrate_valued(ValuedSeries(-2, T([1, 1, 1])))

    def test_compose(self):
        w = blaschke_schwarz(0.5, (), 3)
        assert close(compose(exponential(T([0, 1], 3)), w), [1, 1 / 2, 1 / 8, 1 / 48])
        h = T([3, 1, 4, 1, 5])
        assert close(compose(h, T([0], 4)), [3, 0, 0, 0, 0])
        assert close(compose(T([0, 1, 1], 4), T([0, 0, 1], 4)), [0, 0, 1, 0, 1])

    def test_evaluate(self):
        geo = T([1] * 20)
        assert math.isclose(evaluate(geo, 0.5).real, 1.99999809265, rel_tol=1e-11)
        f = T([2 + 1j, 3, 4])
        assert evaluate(f, 0) == 2 + 1j
        pts = boundary_profile(T([0, 1]), 0.9, 8)
        assert close(pts[::2], [0.9, 0.9j, -0.9, -0.9j], 1e-15)
        with pytest.raises(ValueError):
            boundary_profile(T([0, 1]), 0.9, 4)

    def test_tail_estimate(self):
        f = T([1] * 11)
        assert math.isclose(tail_estimate(f, 0.5), 0.5**10 / 0.5)


class TestSchwarz:
    def test_scaled_identity(self):
        w = schwarz_sample(0, 0, 0.5, 8)
        assert close(w.series, [0, 0.5]) and w.margin == pytest.approx(0.5)

    def test_zero_at_origin(self):
        w = blaschke_schwarz(0.7, [0.0], 8)
        assert close(w.series, [0, 0, 0.7]) and w.margin == pytest.approx(0.3)

    @pytest.mark.parametrize("seed", range(20))
    def test_boundary_invariant(self, seed):
        w = schwarz_sample(seed, seed % 4, 0.95, 64)
        peak = np.abs(boundary_profile(w.series, 1.0, 4096)).max()
        assert peak <= 1 - w.margin + 1e-10

    def test_rejects_nonzero_constant(self):
        with pytest.raises(ValueError):
            SchwarzSeries(T([0.1, 0.5]), 0.4)

    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            blaschke_schwarz(0.99, ())
        with pytest.raises(ValueError):
            blaschke_schwarz(0.5, [0.9])


class TestSerialization:
    def test_taylor_round_trip(self):
        f = T([1, 2 - 1j, 0.5j])
        g = TaylorSeries.from_json(json.loads(json.dumps(f.to_json())))
        assert close(f, g, 0) and g.order == f.order

    def test_valued_round_trip(self):
        v = ValuedSeries(1.5, T([1, 0.25j, 3]))
        d = v.to_json()
        assert d["exponent"] == 1.5
        w = ValuedSeries.from_json(json.loads(json.dumps(d)))
        assert w.exponent == v.exponent and close(w.unit, v.unit, 0)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            T([1, float("nan")])


# --------------------------------------------------------------------------
# algebraic laws


def series(n=N, bound=1.0):
    return complex_coeffs(n + 1, bound).map(lambda c: TaylorSeries(c))


def unit_series(n=N, bound=0.5):
    return complex_coeffs(n, bound).map(lambda c: TaylorSeries([1.0] + c))


@given(series(), series())
def test_multiply_commutes(f, g):
    assert close(multiply(f, g), multiply(g, f), 1e-12)


@given(series(bound=0.5), series(bound=0.5), series(bound=0.5))
def test_multiply_associates(f, g, h):
    assert close(multiply(multiply(f, g), h), multiply(f, multiply(g, h)), 1e-11)


@given(series(), series(), series(), st.complex_numbers(max_magnitude=2), st.complex_numbers(max_magnitude=2))
def test_distributes(f, g, h, a, b):
    lhs = multiply(f, linear_combine(a, g, b, h))
    rhs = linear_combine(a, multiply(f, g), b, multiply(f, h))
    assert close(lhs, rhs, 1e-11)


@given(series(), complex_coeffs(N, 0.01), st.complex_numbers(min_magnitude=0.5, max_magnitude=1))
def test_divide_inverts_multiply(f, rest, c0):
    # the constant term dominates, so 1/g has bounded coefficients
    g = TaylorSeries([c0] + rest)
    assert close(divide(multiply(f, g), g), f, 1e-10 * max(1.0, np.abs(f.coeffs).max()))


@given(complex_coeffs(N, 0.5))
def test_exp_log_inverse(rest):
    f = TaylorSeries([0.0] + rest)
    assert close(logarithm(exponential(f)), f, 1e-10)
    u = TaylorSeries([1.0] + rest)
    assert close(exponential(logarithm(u)), u, 1e-10)


@given(unit_series(), st.floats(0.2, 3.0))
def test_power_inverse(u, s):
    assert close(power_real(power_real(u, s), 1 / s), u, 1e-10)


@given(complex_coeffs(N, 1.0))
def test_derivative_undoes_integral(rest):
    f = TaylorSeries([0.0] + rest)
    assert close(z_derivative(integrate_log(f)), f, 1e-15)


@given(st.integers(0, 10_000), st.integers(0, 3), st.floats(0.1, 0.95))
def test_compose_matches_pointwise(seed, m, s):
    w = schwarz_sample(seed, m, s, 64)
    h = exponential(TaylorSeries([0, 1], 64))
    hw = compose(h, w)
    z = 0.7 * np.exp(2j * np.pi * np.arange(16) / 16)
    direct = np.exp(evaluate(w.series, z))
    bound = 10 * max(tail_estimate(hw, 0.7), 1e-14)
    assert np.max(np.abs(evaluate(hw, z) - direct)) <= bound


@given(unit_series(16), st.floats(-2, 2), st.floats(-2, 2))
def test_valued_exponents_add(u, a, b):
    x, y = ValuedSeries(a, u), ValuedSeries(b, u)
    prod, quo = x * y, x / y
    assert prod.exponent == pytest.approx(a + b) and quo.exponent == pytest.approx(a - b)
    assert close(quo.unit, [1] + [0] * 16, 1e-10)
