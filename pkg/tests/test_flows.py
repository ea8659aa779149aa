import math

import numpy as np
import pytest

from lib.calculus import ManifoldSpec, basis_vector, vector_field
from lib.exceptions import FlowEscaped
from lib.expressions import mul, power
from lib.flows import Flow, flow, flowed_box, line_integral, simpson_weights

CYLINDER = ManifoldSpec(['x', 'theta'], ['theta'])


def test_translation_along_an_angle_wraps():
    psi = Flow(basis_vector(CYLINDER, 'theta'))
    assert psi.is_closed_form
    moved = psi(1.0, [[0.5, 6.0]])
    assert moved[0] == pytest.approx([0.5, 7.0 - 2.0 * math.pi])
    assert psi(1.0, [[0.5, 6.0]], wrap=False)[0] == pytest.approx([0.5, 7.0])


def test_linear_field_grows_exponentially():
    x, _ = CYLINDER.coordinates()
    field = vector_field(CYLINDER, {'x': x, 'theta': 1.0})
    point = flow(field, 0.7, [0.3, 0.0])
    assert point == pytest.approx([0.3 * math.exp(0.7), 0.7])
    assert flow(field, -0.7, point) == pytest.approx([0.3, 0.0])


def test_rotation_field_matches_closed_form(plane):
    x, y = plane.coordinates()
    rotation = vector_field(plane, {'x': y, 'y': mul(-1.0, x)})
    psi = Flow(rotation)
    assert not psi.is_closed_form

    start = np.array([[1.0, 0.5], [-0.3, 2.0]])
    t = 2.0
    moved = psi(t, start)
    expected = np.column_stack([start[:, 0] * math.cos(t) + start[:, 1] * math.sin(t),
                                -start[:, 0] * math.sin(t) + start[:, 1] * math.cos(t)])
    assert np.allclose(moved, expected, atol=1e-7)


def test_flow_escapes_the_box(plane):
    x, _ = plane.coordinates()
    with pytest.raises(FlowEscaped):
        flow(vector_field(plane, {'x': x}), 5.0, [1.0, 0.0], box=10.0)
    with pytest.raises(FlowEscaped):
        flow(vector_field(plane, {'x': power(x, 2.0)}), 2.0, [1.0, 0.0])


def test_simpson_weights():
    weights = simpson_weights(5, 2.0)
    assert weights.sum() == pytest.approx(2.0)
    assert weights == pytest.approx([1 / 6, 4 / 6, 2 / 6, 4 / 6, 1 / 6])
    with pytest.raises(ValueError):
        simpson_weights(4, 1.0)


def test_line_integral_along_translation(plane):
    x, _ = plane.coordinates()
    psi = Flow(basis_vector(plane, 'x'))
    values = line_integral(psi, power(x, 2.0), 2.0, np.array([[1.0, 0.0], [0.0, 3.0]]))
    # int_0^2 (x0 + s)^2 ds
    assert values == pytest.approx([26.0 / 3.0, 8.0 / 3.0])
    assert np.all(line_integral(psi, x, 0.0, np.array([[1.0, 0.0]])) == 0.0)


def test_flowed_box(plane):
    x, _ = plane.coordinates()
    psi = Flow(vector_field(plane, {'x': x}))
    box = flowed_box(psi, math.log(2.0), [(1.0, 2.0), (0.0, 1.0)], plane)
    assert box[0] == pytest.approx((1.8, 4.2), abs=1e-6)
    assert box[1] == pytest.approx((-0.1, 1.1), abs=1e-6)


def test_flowed_box_covers_the_circle():
    psi = Flow(basis_vector(CYLINDER, 'theta'))
    box = flowed_box(psi, 1.0, [(0.0, 1.0), (0.0, 6.0)], CYLINDER)
    assert box[1] == (0.0, 2.0 * math.pi)
