import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compwave.errors import NoSignChange, SingularPivot, StepUnderflow, ValidationError
from compwave.numerics import (
    Grid1D,
    Profile,
    RootBracket,
    bisect_root,
    integrate_ivp,
    one_sided_derivative,
    solve_tridiagonal,
)


class TestGrid:
    def test_spacing(self):
        g = Grid1D(0.0, 1.0, 11)
        assert g.spacing == pytest.approx(0.1)
        assert len(g.points) == 11
        assert g.points[0] == 0.0 and g.points[-1] == 1.0

    def test_invalid(self):
        with pytest.raises(ValidationError):
            Grid1D(1.0, 0.0, 11)
        with pytest.raises(ValidationError):
            Grid1D(0.0, 1.0, 2)

    def test_profile_checks_shape_and_finiteness(self):
        g = Grid1D(0.0, 1.0, 5)
        with pytest.raises(ValidationError):
            Profile(g, np.zeros(4))
        with pytest.raises(ValidationError):
            Profile(g, np.array([0.0, 1.0, np.nan, 0.0, 0.0]))
        p = Profile(g, np.linspace(0, 2, 5))
        assert not p.values.flags.writeable


class TestIntegrateIvp:
    def test_constant_field(self):
        res = integrate_ivp(lambda t, y: (0.0,), (1.0,), (0.0, 10.0))
        assert res.terminal[0] == 1.0

    def test_exponential(self):
        res = integrate_ivp(lambda t, y: (y[0],), (1.0,), (0.0, 1.0), tol=1e-10)
        assert res.terminal[0] == pytest.approx(math.e, abs=1e-8)

    def test_harmonic_oscillator_period(self):
        res = integrate_ivp(lambda t, y: (y[1], -y[0]), (1.0, 0.0),
                            (0.0, 2.0 * math.pi), tol=1e-10)
        assert res.terminal[0] == pytest.approx(1.0, abs=1e-6)
        assert res.terminal[1] == pytest.approx(0.0, abs=1e-6)

    def test_tolerance_halving_shrinks_error(self):
        # achieved error should roughly halve with tol, within a factor of 4
        def err(tol):
            res = integrate_ivp(lambda t, y: (y[0],), (1.0,), (0.0, 1.0), tol=tol)
            return abs(res.terminal[0] - math.e)

        e1, e2 = err(2e-7), err(1e-7)
        assert e2 <= e1  # tighter tol never hurts
        assert 0.5 / 4 <= e2 / e1 <= 0.5 * 4

    def test_blow_up_raises_step_underflow(self):
        with pytest.raises(StepUnderflow):
            integrate_ivp(lambda t, y: (y[0] ** 2,), (1.0,), (0.0, 2.0))

    def test_t_eval_sampling(self):
        ts = np.linspace(0.1, 0.9, 9)
        res = integrate_ivp(lambda t, y: (y[0],), (1.0,), (0.0, 1.0), t_eval=ts)
        assert np.allclose(res.t, ts)
        assert np.allclose(res.y[:, 0], np.exp(ts), atol=1e-8)

    def test_degenerate_span_rejected(self):
        with pytest.raises(ValidationError):
            integrate_ivp(lambda t, y: (0.0,), (1.0,), (1.0, 1.0))


class TestBisectRoot:
    def test_linear(self):
        br = RootBracket(0.0, 2.0, -1.0, 1.0)
        assert bisect_root(lambda x: x - 1.0, br) == pytest.approx(1.0, abs=1e-12)

    def test_sqrt2(self):
        f = lambda x: x * x - 2.0
        br = RootBracket(1.0, 2.0, f(1.0), f(2.0))
        assert bisect_root(f, br) == pytest.approx(math.sqrt(2.0), abs=1e-11)

    def test_cosine(self):
        br = RootBracket(1.0, 2.0, math.cos(1.0), math.cos(2.0))
        assert bisect_root(math.cos, br) == pytest.approx(math.pi / 2, abs=1e-11)

    def test_invalid_bracket(self):
        with pytest.raises(NoSignChange):
            RootBracket(0.0, 1.0, 1.0, 2.0)

    @given(root=st.floats(-0.9, 0.9), scale=st.floats(0.1, 5.0))
    @settings(max_examples=50, deadline=None)
    def test_never_evaluates_outside_bracket(self, root, scale):
        lo, hi = -1.0, 1.0
        seen = []

        def f(x):
            seen.append(x)
            return scale * (x - root)

        br = RootBracket(lo, hi, f(lo), f(hi))
        x = bisect_root(f, br, x_tol=1e-9, f_tol=0.0)
        assert all(lo <= s <= hi for s in seen)
        assert abs(x - root) <= 1e-9


class TestTridiagonal:
    def test_identity(self):
        rhs = np.array([3.0, -1.0, 2.0])
        x = solve_tridiagonal(np.zeros(2), np.ones(3), np.zeros(2), rhs)
        assert np.array_equal(x, rhs)

    def test_three_by_three(self):
        # 2x1 - x2 = 1; -x1 + 2x2 - x3 = 1; -x2 + 2x3 = 1 -> (1.5, 2, 1.5)
        x = solve_tridiagonal([-1.0, -1.0], [2.0, 2.0, 2.0], [-1.0, -1.0],
                              [1.0, 1.0, 1.0])
        assert np.allclose(x, [1.5, 2.0, 1.5], atol=1e-14)

    def test_back_substitution(self):
        # x1 + x2 = 2; x2 = 1 -> (1, 1)
        x = solve_tridiagonal([0.0], [1.0, 1.0], [1.0], [2.0, 1.0])
        assert np.allclose(x, [1.0, 1.0], atol=1e-15)

    def test_singular_pivot(self):
        with pytest.raises(SingularPivot):
            solve_tridiagonal([0.0], [0.0, 1.0], [0.0], [1.0, 1.0])

    @given(
        n=st.integers(2, 50),
        seed=st.integers(0, 2 ** 31 - 1),
    )
    @settings(max_examples=60, deadline=None)
    def test_matches_dense_solve_on_diagonally_dominant(self, n, seed):
        rng = np.random.default_rng(seed)
        sub = rng.uniform(-1.0, 1.0, n - 1)
        sup = rng.uniform(-1.0, 1.0, n - 1)
        diag = 2.0 + rng.uniform(0.0, 1.0, n)
        rhs = rng.uniform(-5.0, 5.0, n)
        dense = np.diag(diag) + np.diag(sub, -1) + np.diag(sup, 1)
        expected = np.linalg.solve(dense, rhs)
        x = solve_tridiagonal(sub, diag, sup, rhs)
        assert np.allclose(x, expected, atol=1e-10, rtol=1e-10)
        assert np.abs(dense @ x - rhs).max() <= 1e-10 * max(1.0, np.abs(rhs).max())


class TestStencils:
    def test_one_sided_fourth_order(self):
        xs = np.linspace(0.0, 1.0, 101)
        vals = np.sin(xs)
        h = xs[1] - xs[0]
        assert one_sided_derivative(vals, h, "left") == pytest.approx(1.0, abs=1e-8)
        assert one_sided_derivative(vals, h, "right") == pytest.approx(
            math.cos(1.0), abs=1e-8)
