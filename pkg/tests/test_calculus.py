import numpy as np
import pytest

from lib.calculus import (BForm, DiffForm, ManifoldSpec, MultiVector, b_exterior_d, basis_vector,
                          check_volume, contract, divergence, exterior_d, function, lie_bracket,
                          lie_derivative, one_form, top_power, vector_field, volume_form, wedge)
from lib.exceptions import DegenerateVolume, DegreeMismatch
from lib.expressions import ONE, add, eval_at, mul, power, sin


def value(field, key):
    return eval_at(field.component(key), np.zeros(field.manifold.dim))


def test_contraction_pairs_the_first_slots(space):
    volume = volume_form(space)
    assert value(contract(MultiVector(space, 2, {('x', 'y'): ONE}), volume), (2,)) == 1.0
    assert value(contract(MultiVector(space, 2, {('y', 'x'): ONE}), volume), (2,)) == -1.0
    assert value(contract(basis_vector(space, 'x'), volume), (1, 2)) == 1.0
    assert value(contract(basis_vector(space, 'y'), volume), (0, 2)) == -1.0


def test_contract_into_smaller_form_raises(plane):
    with pytest.raises(DegreeMismatch):
        contract(MultiVector(plane, 2, {('x', 'y'): ONE}), one_form(plane, {'x': ONE}))


def test_d_squared_vanishes(space, rng):
    x, y, z = space.coordinates()
    alpha = one_form(space, {'x': sin(mul(y, z)), 'y': mul(x, x, z), 'z': mul(x, y)})
    points = space.sample(rng, 50)
    assert exterior_d(exterior_d(alpha)).max_abs(points) < 1e-12


def test_wedge_of_one_forms_is_antisymmetric(space, rng):
    x, y, z = space.coordinates()
    a = one_form(space, {'x': y, 'z': sin(x)})
    b = one_form(space, {'y': mul(x, z), 'z': ONE})
    assert (wedge(a, b) + wedge(b, a)).max_abs(space.sample(rng, 50)) < 1e-12


def test_cartan_formula_on_one_forms(space, rng):
    x, y, z = space.coordinates()
    field = vector_field(space, {'x': mul(y, z), 'y': sin(x), 'z': ONE})
    alpha = one_form(space, {'x': mul(x, y), 'y': z, 'z': sin(y)})
    cartan = contract(field, exterior_d(alpha)) + exterior_d(contract(field, alpha))
    residual = lie_derivative(field, alpha) - cartan
    assert residual.max_abs(space.sample(rng, 50)) < 1e-10


def test_lie_bracket(plane):
    x, _ = plane.coordinates()
    bracket = lie_bracket(basis_vector(plane, 'x'), vector_field(plane, {'y': x}))
    assert value(bracket, (1,)) == 1.0
    assert bracket.component((0,)).is_zero()


def test_divergence_of_euler_field(plane, rng):
    x, y = plane.coordinates()
    euler = vector_field(plane, {'x': x, 'y': y})
    div = divergence(euler, volume_form(plane))
    assert eval_at(div, [0.3, -1.2]) == pytest.approx(2.0)


def test_degenerate_volume_raises(plane):
    x, _ = plane.coordinates()
    with pytest.raises(DegenerateVolume):
        check_volume(volume_form(plane, x))


def test_volume_vanishing_without_a_sign_change_raises(plane):
    x, y = plane.coordinates()
    with pytest.raises(DegenerateVolume):
        check_volume(volume_form(plane, power(add(x, -0.5), 2.0)))
    rho = check_volume(volume_form(plane, add(2.0, sin(y))))
    assert eval_at(rho, [0.0, 0.0]) == pytest.approx(2.0)


def test_top_power_is_normalized():
    manifold = ManifoldSpec(['x', 'y', 'z', 'w'])
    pi = MultiVector(manifold, 2, {('x', 'y'): ONE, ('z', 'w'): ONE})
    assert value(top_power(pi), (0, 1, 2, 3)) == 1.0


def test_degree_above_dimension_is_zero(plane):
    assert MultiVector(plane, 3, {}).is_zero()
    assert wedge(volume_form(plane), one_form(plane, {'x': ONE})).is_zero()


def test_dense_supports_low_degrees_only(space):
    with pytest.raises(DegreeMismatch):
        volume_form(space).dense(np.zeros((1, 3)))


def test_manifold_spec():
    with pytest.raises(ValueError):
        ManifoldSpec(['x', 'x'])
    with pytest.raises(ValueError):
        ManifoldSpec(['x'], ['theta'])
    cylinder = ManifoldSpec(['x']).extend('theta')
    assert cylinder.coord_names == ['x', 'theta']
    assert cylinder.angle_mask == [False, True]
    assert cylinder.linear_dims == 1 and cylinder.angle_dims == 1


def test_b_forms(plane):
    x, y = plane.coordinates()
    bform = BForm(x, function(plane, y), one_form(plane, {'y': x}))
    points = np.array([[2.0, 3.0], [-1.0, 0.5]])
    assert b_exterior_d(b_exterior_d(bform)).max_abs(points) == 0.0

    ordinary = bform.on_complement()
    assert value_at(ordinary, (0,), [2.0, 3.0]) == pytest.approx(1.5)
    assert value_at(ordinary, (1,), [2.0, 3.0]) == pytest.approx(2.0)


def test_b_form_degrees_must_match(plane):
    x, _ = plane.coordinates()
    with pytest.raises(DegreeMismatch):
        BForm(x, one_form(plane, {'x': ONE}), one_form(plane, {'y': ONE}))


def test_forms_of_different_degree_do_not_add(plane):
    with pytest.raises(DegreeMismatch):
        one_form(plane, {'x': ONE}) + DiffForm(plane, 2, {('x', 'y'): power(plane.coordinate('x'), 2.0)})


def value_at(field, key, point):
    return eval_at(field.component(key), point)
