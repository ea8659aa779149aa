import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lib.calculus import ManifoldSpec
from lib.exceptions import SingularEvaluation
from lib.expressions import (ONE, ZERO, TestFunction, absval, add, bump, cos, derive, eval_at,
                             evaluate, evaluate_many, exp, free_coords, is_periodic, logabs, mul,
                             parse_sexpr, power, sin, step, support_box, to_sexpr)

PLANE = ManifoldSpec(['x', 'y'])
CIRCLE = ManifoldSpec(['theta'], ['theta'])

coordinate = st.floats(min_value=-1.5, max_value=1.5, allow_nan=False, allow_infinity=False)


@given(coordinate, coordinate)
@settings(max_examples=60, deadline=None)
def test_derive_matches_central_difference(x0, y0):
    x, y = PLANE.coordinates()
    expr = mul(sin(x), exp(y), add(x, y))
    step = 1e-6
    for index in (0, 1):
        shift = np.zeros(2)
        shift[index] = step
        point = np.array([x0, y0])
        numeric = (eval_at(expr, point + shift) - eval_at(expr, point - shift)) / (2 * step)
        assert eval_at(derive(expr, index), point) == pytest.approx(numeric, rel=1e-6, abs=1e-6)


@given(st.floats(min_value=-0.95, max_value=0.95))
@settings(max_examples=60, deadline=None)
def test_bump_derivative_matches_central_difference(t):
    base = bump(0, 0.0, 1.0)
    step = 1e-5
    numeric = (eval_at(base, [t + step]) - eval_at(base, [t - step])) / (2 * step)
    assert eval_at(derive(base, 0), [t]) == pytest.approx(numeric, abs=1e-6)


def test_mul_combines_powers():
    x, y = PLANE.coordinates()
    assert mul(power(x, -1.0), x) is ONE
    assert mul(x, x) is power(x, 2.0)
    assert mul(x, 0.0) is ZERO


def test_add_collapses_pythagoras():
    x, _ = PLANE.coordinates()
    assert add(power(sin(x), 2.0), power(cos(x), 2.0)) is ONE


def test_nodes_are_interned():
    x, y = PLANE.coordinates()
    assert mul(x, y) is mul(y, x)
    assert add(x, 1.0) is add(1.0, x)
    assert sin(0.0) is ZERO


def test_support_box_of_product():
    box = support_box(mul(bump(0, 0.5, 0.2), bump(1, 1.0, 0.3)), 2, [False, False])
    assert box[0] == pytest.approx((0.3, 0.7))
    assert box[1] == pytest.approx((0.7, 1.3))


def test_support_box_of_disjoint_bumps_is_empty():
    assert support_box(mul(bump(0, 0.0, 0.5), bump(0, 3.0, 0.5)), 2, [False, False]) is None


def test_support_box_of_sum_is_hull():
    box = support_box(add(bump(0, 0.0, 0.5), bump(0, 3.0, 0.5)), 1, [False])
    assert box[0] == pytest.approx((-0.5, 3.5))


def test_plateau_equals_one_on_inner_box(rng):
    plateau = TestFunction(PLANE, [0.0, 0.0], [1.0, 1.0], kind='plateau')
    inner = rng.uniform(-0.5, 0.5, (50, 2))
    assert np.allclose(evaluate(plateau.expr, inner), 1.0)
    outer = np.column_stack([rng.uniform(1.01, 2.0, 50), rng.uniform(-2.0, 2.0, 50)])
    assert np.allclose(evaluate(plateau.expr, outer), 0.0)
    assert plateau.box() == [(-1.0, 1.0), (-1.0, 1.0)]


def test_bump_wraps_on_angles():
    theta_bump = bump(0, 0.1, 0.5, periodic=True)
    assert eval_at(theta_bump, [2.0 * math.pi - 0.1]) == pytest.approx(eval_at(theta_bump, [-0.1]))
    assert eval_at(theta_bump, [2.0 * math.pi - 0.1]) > 0.0


def test_matched_plateau_covers_the_bump(rng):
    shape = TestFunction(PLANE, [0.2, -0.3], [0.4, 0.6])
    cutoff = shape.matched_plateau()
    points = rng.uniform(-1.0, 1.0, (200, 2))
    inside = evaluate(shape.expr, points) != 0.0
    assert np.allclose(evaluate(cutoff.expr, points[inside]), 1.0)


def test_parse_sexpr_evaluates(torus, rng):
    expr = parse_sexpr("(sin (add theta2 theta3))", torus)
    points = rng.uniform(0.0, 2.0 * math.pi, (20, 3))
    assert np.allclose(evaluate(expr, points), np.sin(points[:, 1] + points[:, 2]))


def test_printed_expression_parses_to_the_same_node():
    expr = parse_sexpr("(mul x (pow (add 1.0 (mul y y)) -1.0))", PLANE)
    assert parse_sexpr(to_sexpr(expr, PLANE.coord_names), PLANE) is expr


def test_symbolic_constants():
    assert eval_at(parse_sexpr("(mul 2 pi)", PLANE), [0.0, 0.0]) == pytest.approx(2.0 * math.pi)
    assert eval_at(parse_sexpr("sqrt2", PLANE), [0.0, 0.0]) == pytest.approx(math.sqrt(2.0))


@pytest.mark.parametrize("text", ["(frobnicate x)", "(add x", "w", ")", "(add x) y", ""])
def test_parse_errors(text):
    with pytest.raises(ValueError):
        parse_sexpr(text, PLANE)


def test_logabs_at_zero_raises():
    x, _ = PLANE.coordinates()
    with pytest.raises(SingularEvaluation):
        evaluate(logabs(x), [[0.0, 1.0]])


def test_derivative_of_abs_is_undefined_at_the_kink():
    x, y = PLANE.coordinates()
    slope = derive(absval(add(x, y)), 0)
    assert np.allclose(evaluate(slope, [[0.5, 0.0], [-0.5, 0.0]]), [1.0, -1.0])
    with pytest.raises(SingularEvaluation):
        evaluate(slope, [[0.0, 0.0]])
    with pytest.raises(SingularEvaluation):
        evaluate(derive(absval(x), 0), [[1.0, 1.0], [0.0, 1.0]])
    assert parse_sexpr(to_sexpr(slope, PLANE.coord_names), PLANE) is slope


def test_evaluate_many_shares_subexpressions():
    x, y = PLANE.coordinates()
    shared = exp(mul(x, y))
    points = np.array([[0.5, 1.0], [-1.0, 2.0]])
    values = evaluate_many([shared, mul(shared, x), ONE], points)
    assert values.shape == (2, 3)
    assert np.allclose(values[:, 0], np.exp(points[:, 0] * points[:, 1]))
    assert np.allclose(values[:, 1], values[:, 0] * points[:, 0])
    assert np.allclose(values[:, 2], 1.0)
    with pytest.raises(SingularEvaluation):
        evaluate_many([x, logabs(y)], [[1.0, 0.0]])


def test_periodicity():
    theta = CIRCLE.coordinate('theta')
    assert is_periodic(sin(theta))
    assert is_periodic(cos(mul(3.0, theta)))
    assert not is_periodic(theta)
    assert not is_periodic(sin(mul(0.5, theta)))
    assert is_periodic(bump(0, 1.0, 0.5, 0, True), CIRCLE.angle_mask)
    assert not is_periodic(bump(0, 1.0, 0.5), CIRCLE.angle_mask)
    assert not is_periodic(step(0, 1.0, 2.0), CIRCLE.angle_mask)


def test_parsed_angle_expressions_must_be_periodic(torus):
    with pytest.raises(ValueError):
        parse_sexpr("(sin (mul 0.5 theta1))", torus)
    with pytest.raises(ValueError):
        parse_sexpr("(mul 0.5 theta1)", torus)
    hamiltonian = parse_sexpr("(mul 0.5 theta1)", torus, multivalued=True)
    assert eval_at(hamiltonian, [1.0, 0.0, 0.0]) == pytest.approx(0.5)
    assert eval_at(parse_sexpr("(cos (mul 2 theta1))", torus), [0.0, 0.0, 0.0]) == pytest.approx(1.0)


def test_free_coords():
    x, y = PLANE.coordinates()
    assert free_coords(mul(sin(x), bump(1, 0.0, 1.0))) == {0, 1}
    assert free_coords(exp(x)) == {0}
