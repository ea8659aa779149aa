import math

import numpy as np
import pytest
from scipy.integrate import quad

from lib.calculus import ManifoldSpec
from lib.exceptions import NonIntegrable, QuadratureNotConverged
from lib.expressions import add, power, sin
from lib.quadrature import SingularFactor, integrate_box, integrate_pieces, line_roots, split_segments

LINE = ManifoldSpec(['x'])


def test_integrate_box_on_a_product():
    result = integrate_box(lambda p: np.exp(p[:, 0]) * np.cos(p[:, 1]), [0.0, 0.0], [1.0, 2.0])
    assert result.value[0] == pytest.approx((math.e - 1.0) * math.sin(2.0), rel=1e-8)
    assert result.error[0] < 1e-8
    assert result.cells >= 4


def test_integrate_box_matches_scipy_on_oscillating_integrand():
    expected, _ = quad(lambda t: math.sin(t * t), 0.0, 3.0, epsabs=1e-13)
    result = integrate_box(lambda p: np.sin(p[:, 0] ** 2), [0.0], [3.0])
    assert result.value[0] == pytest.approx(expected, rel=1e-8)


def test_integrate_box_is_vector_valued():
    result = integrate_box(lambda p: np.stack([np.ones(len(p)), p[:, 0]], axis=1),
                           [0.0, 0.0], [1.0, 1.0])
    assert np.allclose(result.value, [1.0, 0.5])


def test_empty_box_integrates_to_zero():
    result = integrate_box(lambda p: np.ones(len(p)), [1.0], [1.0])
    assert np.all(result.value == 0.0)


def test_quadrature_budget():
    with pytest.raises(QuadratureNotConverged) as info:
        integrate_box(lambda p: 1.0 / np.sqrt(np.abs(p[:, 0] - 0.3)), [0.0], [1.0],
                      rel_tol=1e-12, max_cells=4)
    partial = info.value.partial
    assert partial.cells == 4
    assert np.isfinite(partial.value[0]) and partial.value[0] > 0.0
    assert partial.error[0] > 1e-12 * partial.value[0]


def test_only_controlled_channels_drive_refinement():
    def channels(points):
        x = points[:, 0]
        return np.stack([np.cos(20.0 * x), np.abs(x - 0.3)], axis=1)

    steered = integrate_box(channels, [0.0], [1.0], rel_tol=1e-12, controlled=1)
    assert steered.value[0] == pytest.approx(math.sin(20.0) / 20.0, rel=1e-10)
    # the kinked channel rides on the cells of the smooth one
    assert steered.value[1] == pytest.approx(0.29, rel=1e-2)
    full = integrate_box(channels, [0.0], [1.0], rel_tol=1e-12)
    assert steered.cells < full.cells


def test_cells_split_along_the_varying_axis():
    line = integrate_box(lambda p: np.sin(30.0 * p[:, 0]), [0.0], [1.0], rel_tol=1e-10)
    square = integrate_box(lambda p: np.sin(30.0 * p[:, 0]), [0.0, 0.0], [1.0, 1.0], rel_tol=1e-10)
    assert square.value[0] == pytest.approx((1.0 - math.cos(30.0)) / 30.0, rel=1e-9)
    assert square.cells <= 3 * line.cells


def test_line_roots_with_sign_change():
    x = LINE.coordinate('x')
    assert line_roots(sin(x), 0, 1, -1.0, 4.0) == pytest.approx([0.0, math.pi], abs=1e-12)


def test_line_roots_finds_even_order_zeros():
    x = LINE.coordinate('x')
    roots = line_roots(power(add(x, -0.3), 2.0), 0, 1, 0.0, 1.0)
    assert roots == pytest.approx([0.3], abs=1e-6)


def _weighted(factor, func):
    def integrand(points, segments):
        segment = segments[0]
        if segment.substituted:
            weight = factor.regularized_weight(points, segment.root)
        else:
            weight = factor.weight(points)
        return func(points[:, 0]) * weight
    return integrand


def test_singular_factor_integral_matches_scipy():
    x = LINE.coordinate('x')
    factor = SingularFactor(x, -0.5, 1)
    segments = split_segments(-1.0, 1.0, [factor])
    assert [s.substituted for s in segments] == [True, True]

    result = integrate_pieces(_weighted(factor, np.cos), [segments])
    half, _ = quad(math.cos, 0.0, 1.0, weight='alg', wvar=(-0.5, 0.0))
    assert result.value[0] == pytest.approx(2.0 * half, rel=1e-8)


def test_singular_factor_with_higher_order_zero():
    x = LINE.coordinate('x')
    factor = SingularFactor(power(x, 3.0), -0.2, 1)
    assert factor.effective_exponent(0.0) == pytest.approx(-0.6)

    segments = split_segments(0.0, 2.0, [factor])
    result = integrate_pieces(_weighted(factor, np.ones_like), [segments])
    # int_0^2 s^-0.6 ds
    assert result.value[0] == pytest.approx(2.0 ** 0.4 / 0.4, rel=1e-8)


@pytest.mark.parametrize("zeta_power, exponent", [(1.0, -1.5), (2.0, -0.5), (1.0, -1.0)])
def test_non_integrable_factors(zeta_power, exponent):
    x = LINE.coordinate('x')
    factor = SingularFactor(power(x, zeta_power), exponent, 1)
    with pytest.raises(NonIntegrable):
        split_segments(-1.0, 1.0, [factor])


def test_singular_factor_needs_one_coordinate(plane):
    x, y = plane.coordinates()
    with pytest.raises(ValueError):
        SingularFactor(add(x, y), -0.5, 2)


def test_pieces_report_their_summed_partial():
    x = LINE.coordinate('x')
    factor = SingularFactor(x, -0.5, 1)
    segments = split_segments(-1.0, 1.0, [factor])
    with pytest.raises(QuadratureNotConverged) as info:
        integrate_pieces(_weighted(factor, lambda s: np.cos(40.0 * s)), [segments],
                         rel_tol=1e-14, max_cells=2)
    assert info.value.partial.cells == 4


@pytest.mark.parametrize("rel_tol", [1e-6, 1e-8, 1e-10])
def test_reported_error_covers_a_tighter_estimate(rel_tol):
    def oscillating(points):
        x, y = points[:, 0], points[:, 1]
        return np.sin(12.0 * x * y) * np.exp(-x) + np.cos(7.0 * y)

    coarse = integrate_box(oscillating, [0.0, 0.0], [1.0, 1.0], rel_tol=rel_tol)
    fine = integrate_box(oscillating, [0.0, 0.0], [1.0, 1.0], rel_tol=rel_tol / 2.0)
    assert abs(coarse.value[0] - fine.value[0]) <= coarse.error[0]
