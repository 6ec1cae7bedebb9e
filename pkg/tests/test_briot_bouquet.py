import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from subordlab.briot_bouquet import (
    BBParams,
    Grid,
    bb_operator,
    bb_solve_from_target,
    boundary_radius_lemma1,
    boundary_radius_lemma2,
    check_inequalities,
    check_thm21,
    classical_bb,
    odl_closed_form,
)
from subordlab.dominants import DominantSpec, evaluate_dominant
from subordlab.errors import DegenerateAngle, DenominatorVanishes, ResonantOrder, UnknownCase
from subordlab.power_series import TaylorSeries, blaschke_schwarz, schwarz_sample
from subordlab.subordination import make_subordinate

H = DominantSpec
P01 = BBParams(0.0, 1.0)
N = 64


def gap(a, b, upto=None):
    n = min(a.order, b.order) if upto is None else upto
    return float(np.max(np.abs(a.coeffs[: n + 1] - b.coeffs[: n + 1])))


def alternating(first, rest, n=N):
    return TaylorSeries([first] + [rest * (-1) ** (k + 1) for k in range(1, n + 1)])


def random_caratheodory(rng, order=N):
    w = schwarz_sample(int(rng.integers(1 << 31)), int(rng.integers(0, 4)), 0.9, order)
    return make_subordinate(H.half_plane(), w)


class TestParams:
    def test_flags(self):
        assert BBParams(0.5, 1.0).real_nonnegative
        assert not BBParams(-0.5, 1.0).real_nonnegative
        assert not BBParams(0.5j, 1.0).real_nonnegative

    def test_rejects(self):
        with pytest.raises(ValueError):
            BBParams(0.0, 0.0)
        with pytest.raises(ValueError):
            BBParams(0.0, 1.0, n=0)

    def test_json(self):
        p = BBParams(0.5 + 1j, 2.0, 3)
        assert BBParams.from_json(p.to_json()) == p


class TestOperator:
    def test_constants(self):
        one = TaylorSeries.constant(1, 8)
        assert bb_operator(one, one, BBParams(0.3, 2.0)).allclose(one)

    def test_one_plus_z(self):
        out = bb_operator(TaylorSeries([1, 1], 8), TaylorSeries.constant(1, 8), P01)
        assert out.allclose(TaylorSeries([1, 2, -1, 1, -1, 1, -1, 1, -1]))

    def test_reciprocal(self):
        p = TaylorSeries([(-1) ** k for k in range(9)])
        out = bb_operator(p, TaylorSeries.constant(1, 8), P01)
        assert out.allclose(alternating(1, -2, 8))

    def test_denominator(self):
        with pytest.raises(DenominatorVanishes):
            bb_operator(TaylorSeries([1, 1], 8), TaylorSeries.constant(1, 8), BBParams(-1.0, 1.0))

    @given(st.integers(0, 1 << 30), st.floats(0, 2), st.floats(0.2, 2))
    def test_classical_reduction(self, seed, a, b):
        p = random_caratheodory(np.random.default_rng(seed))
        one = TaylorSeries.constant(1, N)
        assert gap(bb_operator(p, one, BBParams(a, b)), classical_bb(p, a, b)) < 1e-9


class TestSolve:
    def test_trivial(self):
        one = TaylorSeries.constant(1, 8)
        assert bb_solve_from_target(one, one, P01).allclose(one)

    def test_one_plus_z(self):
        p = bb_solve_from_target(TaylorSeries.constant(1, 12), TaylorSeries([1, 1], 12), P01)
        assert p.allclose(TaylorSeries([(-0.5) ** k for k in range(13)]))

    def test_exp_target(self):
        psi = make_subordinate(H.exp(), blaschke_schwarz(0.5, (), N))
        one = TaylorSeries.constant(1, N)
        p = bb_solve_from_target(psi, one, P01)
        assert gap(bb_operator(p, one, P01), psi, N - 2) < 1e-9

    def test_resonant(self):
        # denominator k + Q0 (2 beta p0 + alpha) - beta Psi0 vanishes at k = 1
        one = TaylorSeries.constant(1, 8)
        with pytest.raises(ResonantOrder):
            bb_solve_from_target(one, one, BBParams(-2.0, 1.0))

    def test_plug_back_residual(self):
        rng = np.random.default_rng(3)
        worst = 0.0
        for _ in range(200):
            Q = random_caratheodory(rng)
            w = schwarz_sample(int(rng.integers(1 << 31)), int(rng.integers(0, 4)), 0.9, N)
            psi = make_subordinate(H.exp(), w)
            params = BBParams(rng.uniform(0, 2), rng.uniform(0.2, 2))
            p = bb_solve_from_target(psi, Q, params)
            worst = max(worst, gap(bb_operator(p, Q, params), psi, N - 2))
        assert worst < 1e-9


class TestClosedForm:
    def test_trivial(self):
        assert odl_closed_form(TaylorSeries.constant(1, 16), P01).allclose(TaylorSeries.constant(1, 16))

    def test_one_plus_z(self):
        p = odl_closed_form(TaylorSeries([1, 1], 16), P01)
        assert p.allclose(TaylorSeries([(-0.5) ** k for k in range(17)]))

    def test_rejects(self):
        with pytest.raises(ValueError):
            odl_closed_form(TaylorSeries([2, 1], 8), P01)
        with pytest.raises(ValueError):
            odl_closed_form(TaylorSeries([1, 1], 8), BBParams(-0.5, 1.0))

    def test_agrees_with_recursion(self):
        rng = np.random.default_rng(4)
        one = TaylorSeries.constant(1, N)
        worst = 0.0
        for i in range(100):
            Q = random_caratheodory(rng)
            params = BBParams([0.0, 0.5, 1.0][i % 3], [0.5, 1.0, 2.0][(i // 3) % 3])
            a = odl_closed_form(Q, params)
            b = bb_solve_from_target(one, Q, params)
            worst = max(worst, gap(a, b, N - 2))
        assert worst < 1e-9


class TestThm21:
    def test_half_plane_constant_Q(self):
        r = check_thm21(H.half_plane(), TaylorSeries.constant(1, N), P01)
        assert r.holds and r.margin > 0

    def test_exp_negative_alpha(self):
        r = check_thm21(H.exp(), TaylorSeries.constant(1, N), BBParams(-2.0, 1.0))
        assert not r.holds and r.witness["i"] <= -1 + 1e-9

    def test_exp_small_Q(self):
        r = check_thm21(H.exp(), TaylorSeries([1, 0.05], N), P01)
        assert r.holds and r.margin > 0

    def test_exp_large_Q_fails(self):
        assert not check_thm21(H.exp(), TaylorSeries([1, 0.9], N), P01).holds


class TestInequalities:
    def test_eq09_constant_Q(self):
        kw = dict(h=H.half_plane(), Q=TaylorSeries.constant(1, N), params=P01)
        r = check_inequalities("eq09", **kw)
        assert r.holds and r.witness["rhs"] == pytest.approx(0)
        assert r.witness["k"] == 5

    def test_eq6M(self):
        r = check_inequalities("eq6M", h=H.exp(), params=P01, M=1)
        assert not r.holds and r.witness["rhs"] == 12
        # even the largest value of Re(1/e^zeta) on the circle is below 12
        assert r.witness["lhs"] == pytest.approx(math.exp(-0.999), rel=1e-4)

    def test_eq17(self):
        r = check_inequalities("eq17", A=0.5, B=-0.5, D=1.0, E=-0.5, alpha=0.0, beta=1.0, M=1.0)
        assert r.witness["lhs"] == pytest.approx(0.25)
        assert r.witness["rhs"] == pytest.approx(7.3125)
        assert not r.holds

    def test_ez(self):
        assert check_inequalities("ez", Q=TaylorSeries([1, 0.3], N), params=P01).holds
        assert not check_inequalities("ez", Q=TaylorSeries([1, 0.4], N), params=P01).holds

    def test_unknown(self):
        with pytest.raises(UnknownCase):
            check_inequalities("eq99")


class TestBoundaryRadii:
    def test_lemma1_examples(self):
        assert boundary_radius_lemma1(math.pi / 2, P01) == pytest.approx(math.sqrt(5))
        for n, b in [(1, 1.0), (2, 0.5), (3, 2.0)]:
            assert boundary_radius_lemma1(math.pi, BBParams(0.7, b, n)) == pytest.approx(n / b)

    def test_lemma2_alpha_zero(self):
        t, n, b = 1.1, 2, 0.8
        g = 1 / math.tan(t / 2)
        expect = math.sqrt(g * g + n * n / (math.sin(t) ** 2 * (b / g) ** 2))
        assert boundary_radius_lemma2(t, BBParams(0.0, b, n)) == pytest.approx(expect)

    def test_lemma2_degenerate(self):
        with pytest.raises(DegenerateAngle):
            boundary_radius_lemma2(0.0, P01)
        with pytest.raises(DegenerateAngle):
            boundary_radius_lemma2(math.pi, P01)

    @pytest.mark.parametrize("a,b,n", [(0.0, 1.0, 1), (0.5, 1.0, 2), (1.0, 2.0, 1), (0.3, 0.7, 3)])
    def test_match_dominants(self, a, b, n):
        params = BBParams(a, b, n)
        thetas = 2 * math.pi * (np.arange(64) + 0.5) / 64 - math.pi
        z = 0.99999 * np.exp(1j * thetas)
        r1 = np.abs(evaluate_dominant(H.opendoor_a(n, a, b), z))
        r2 = np.abs(evaluate_dominant(H.opendoor_b(n, a, b), z))
        f1 = np.array([boundary_radius_lemma1(t, params) for t in thetas])
        f2 = np.array([boundary_radius_lemma2(t, params) for t in thetas])
        assert np.max(np.abs(f1 - r1)) < 1e-3
        # the second dominant is unbounded near theta = 0, so compare relatively
        assert np.max(np.abs(f2 - r2) / f2) < 1e-3
