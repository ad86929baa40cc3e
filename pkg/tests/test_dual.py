"""Forward-mode dual-number arithmetic and the derivative helpers."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from affconn import dual
from affconn.dual import Dual, derivative, epsilon_part, seed_axis, value
from affconn.errors import OrderUnsupported


def f_scalar(x):
    return dual.sin(x[0]) * dual.exp(x[1]) + x[0] * x[0] * x[1]


def df_dx0(x):
    return np.cos(x[0]) * np.exp(x[1]) + 2.0 * x[0] * x[1]


def d2f_dx0dx1(x):
    return np.cos(x[0]) * np.exp(x[1]) + 2.0 * x[0]


class TestArithmetic:
    def test_sum_and_product_rules(self):
        z, lvl = seed_axis([0.7, -0.2], 0)
        out = (z[0] + 3.0) * (2.0 * z[0] - z[1])
        # d/dx0 [(x0+3)(2x0 - x1)] = 2x0 - x1 + 2(x0+3)
        assert epsilon_part(out, lvl) == pytest.approx(2 * 0.7 + 0.2 + 2 * 3.7)

    def test_division(self):
        z, lvl = seed_axis([2.0], 0)
        out = 1.0 / z[0]
        assert epsilon_part(out, lvl) == pytest.approx(-0.25)

    def test_mixed_levels_do_not_collide(self):
        # Two simultaneous independent seeds must keep their directions apart.
        x = [0.3, 0.5]
        z0, l0 = seed_axis(x, 0)
        z1, l1 = seed_axis(z0, 1)
        out = z1[0] * z1[1]
        inner = epsilon_part(out, l1)      # d/dx1 = x0 (still dual in l0)
        assert value(inner) == pytest.approx(0.3)
        assert epsilon_part(inner, l0) == pytest.approx(1.0)

    def test_value_strips_all_layers(self):
        z0, _ = seed_axis([1.5], 0)
        z1, _ = seed_axis(z0, 0)
        assert value(dual.cos(z1[0])) == pytest.approx(np.cos(1.5))

    @given(st.floats(-2, 2), st.floats(-2, 2))
    @settings(max_examples=50, deadline=None)
    def test_first_derivative_matches_closed_form(self, a, b):
        got = derivative(f_scalar, [a, b], (0,))
        assert got == pytest.approx(df_dx0([a, b]), abs=1e-9)


class TestDerivative:
    @pytest.mark.parametrize("mode,tol", [("dual", 1e-9), ("fd", 1e-6)])
    def test_mixed_second_derivative(self, mode, tol):
        x = [0.4, -0.3]
        got = derivative(f_scalar, x, (0, 1), mode=mode)
        assert got == pytest.approx(d2f_dx0dx1(x), abs=tol)

    def test_third_derivative(self):
        # d^3/dx^3 sin(x) = -cos(x)
        got = derivative(lambda z: dual.sin(z[0]), [0.9], (0, 0, 0))
        assert got == pytest.approx(-np.cos(0.9), abs=1e-8)

    def test_dual_and_fd_agree(self):
        x = [0.25, 0.75]
        d1 = derivative(f_scalar, x, (1, 1), mode="dual")
        d2 = derivative(f_scalar, x, (1, 1), mode="fd")
        assert d1 == pytest.approx(d2, abs=1e-6)

    def test_order_cap(self):
        with pytest.raises(OrderUnsupported):
            derivative(f_scalar, [0.0, 0.0], (0, 0, 0, 0))

    def test_array_components_vectorize(self):
        xs = np.linspace(0.1, 1.0, 7)
        z, lvl = seed_axis([xs], 0)
        out = epsilon_part(dual.exp(z[0]) * z[0], lvl)
        assert np.allclose(out, np.exp(xs) * (1 + xs))


class TestFunctions:
    @pytest.mark.parametrize("fn,deriv", [
        (dual.sin, np.cos),
        (dual.exp, np.exp),
        (dual.sqrt, lambda t: 0.5 / np.sqrt(t)),
        (dual.log, lambda t: 1.0 / t),
        (dual.cosh, np.sinh),
        (dual.tan, lambda t: 1.0 / np.cos(t) ** 2),
    ])
    def test_elementary_derivatives(self, fn, deriv):
        t = 0.6
        z, lvl = seed_axis([t], 0)
        assert epsilon_part(fn(z[0]), lvl) == pytest.approx(deriv(t), abs=1e-12)

    def test_plain_floats_pass_through(self):
        assert dual.sin(0.5) == pytest.approx(np.sin(0.5))
        assert not isinstance(dual.sqrt(4.0), Dual)
