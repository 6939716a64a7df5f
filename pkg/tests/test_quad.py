"""Panel quadrature: exactness, additivity, and the error gate."""

import math

import numpy as np
import pytest

from zetalab import PrecisionError
from zetalab.quad import (
    critical_panel_width,
    gauss_panels,
    integrate_checked,
    integrate_panels,
    panel_edges,
)


def test_polynomial_exactness():
    # GL8 on halved panels integrates degree-15 polynomials exactly
    val, err = integrate_panels(lambda x: x ** 9, 0.0, 2.0, width=0.5, order=8)
    assert val == pytest.approx(2.0 ** 10 / 10.0, rel=1e-14)
    assert err <= 1e-12


def test_oscillatory_accuracy():
    val, err = integrate_panels(np.sin, 0.0, 20.0, width=0.25, order=8)
    assert val == pytest.approx(1.0 - math.cos(20.0), abs=1e-12)


def test_additivity():
    f = lambda x: np.cos(3.0 * x) ** 2
    v1, _ = integrate_panels(f, 0.0, 7.0, width=0.1, order=8)
    v2a, _ = integrate_panels(f, 0.0, 3.0, width=0.1, order=8)
    v2b, _ = integrate_panels(f, 3.0, 7.0, width=0.1, order=8)
    assert v1 == pytest.approx(v2a + v2b, rel=1e-12)


def test_degenerate_interval():
    assert integrate_panels(np.sin, 2.0, 2.0, width=0.1) == (0.0, 0.0)


def test_error_gate_raises():
    # oscillation far below the panel scale must trip the halving gate
    f = lambda x: np.cos(200.0 * x) ** 2 * np.exp(np.sin(37.0 * x))
    with pytest.raises(PrecisionError):
        integrate_checked(f, 0.0, 1.0, width=0.5, order=2, rel_gate=1e-6)


def test_panel_width_rule():
    # cap binds at desk heights; the zero-gap term takes over only when
    # ln(t/2pi) > 4 / step_cap * pi / 2... just pin the two regimes
    assert critical_panel_width(1e4) == 0.1
    assert critical_panel_width(25.0) == 0.1


def test_gauss_panels_weights_sum():
    nodes, weights = gauss_panels(1.0, 4.0, width=0.3, order=6)
    assert np.sum(weights) == pytest.approx(3.0, rel=1e-13)
    assert nodes.min() > 1.0 and nodes.max() < 4.0


def test_edges_cover_interval():
    e = panel_edges(0.0, 1.05, 0.1)
    assert e[0] == 0.0 and e[-1] == 1.05 and len(e) == 12
