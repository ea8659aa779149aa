import numpy as np
import pytest

from lib.calculus import (DiffForm, ManifoldSpec, MultiVector, contract, field_components, function,
                          one_form, vector_field, volume_form)
from lib.exceptions import DegreeTooHigh, NotCosymplectic, ZetaDegenerate
from lib.expressions import ONE, eval_at, mul, power, sin
from lib.poisson import (BStructure, CosymplecticStructure, PoissonStructure, b_check, sample_points,
                         symplectic_poisson)


@pytest.fixture
def so3(space):
    x, y, z = space.coordinates()
    pi = MultiVector(space, 2, {('x', 'y'): z, ('y', 'z'): x, ('z', 'x'): y})
    return PoissonStructure(space, pi)


@pytest.fixture
def cylinder():
    manifold = ManifoldSpec(['x', 'theta'], ['theta'])
    pi = MultiVector(manifold, 2, {('x', 'theta'): manifold.coordinate('x')})
    return PoissonStructure(manifold, pi)


def test_bracket_sign_convention(plane):
    x, y = plane.coordinates()
    poisson = symplectic_poisson(plane, DiffForm(plane, 2, {('x', 'y'): ONE}))
    assert eval_at(poisson.bracket(x, y), [0.0, 0.0]) == 1.0

    x_field = field_components(poisson.hamiltonian_field(x))
    y_field = field_components(poisson.hamiltonian_field(y))
    assert [eval_at(c, [0.0, 0.0]) for c in x_field] == [0.0, -1.0]
    assert [eval_at(c, [0.0, 0.0]) for c in y_field] == [1.0, 0.0]


def test_jacobi_holds_for_linear_structure(so3):
    assert so3.jacobi_check() < 1e-12


def test_jacobi_fails_for_non_poisson_bivector(space):
    _, y, _ = space.coordinates()
    pi = MultiVector(space, 2, {('x', 'y'): ONE, ('y', 'z'): y})
    assert PoissonStructure(space, pi).jacobi_check() == pytest.approx(1.0)


def test_jacobi_is_trivial_in_two_dimensions(plane):
    x, _ = plane.coordinates()
    assert PoissonStructure(plane, MultiVector(plane, 2, {('x', 'y'): sin(x)})).jacobi_check() == 0.0


def test_linear_structure_is_unimodular(so3):
    points = sample_points(so3.manifold)
    assert so3.modular_field(volume_form(so3.manifold)).max_abs(points) < 1e-12


def test_modular_field_of_cylinder(cylinder):
    modular = cylinder.modular_field(volume_form(cylinder.manifold))
    x_comp, theta_comp = field_components(modular)
    assert x_comp.is_zero()
    assert eval_at(theta_comp, [0.7, 1.0]) == 1.0
    assert cylinder.is_poisson_field(modular) < 1e-12


def test_poisson_fields_are_derivations(cylinder):
    x, theta = cylinder.manifold.coordinates()
    field = vector_field(cylinder.manifold, {'x': x, 'theta': ONE})
    assert cylinder.is_poisson_field(field) < 1e-12
    assert cylinder.derivation_residual(field, mul(x, x), sin(theta)) < 1e-10


def test_non_poisson_field_is_detected(cylinder):
    x, _ = cylinder.manifold.coordinates()
    field = vector_field(cylinder.manifold, {'x': mul(x, x)})
    assert cylinder.is_poisson_field(field) > 0.1


def test_lichnerowicz_differential_squares_to_zero(so3):
    x, y, _ = so3.manifold.coordinates()
    points = sample_points(so3.manifold)
    once = so3.schouten_d(function(so3.manifold, mul(x, y), kind=MultiVector))
    assert so3.schouten_d(once).max_abs(points) < 1e-10


def test_schouten_square_of_pi_measures_jacobi(so3, space):
    points = sample_points(space)
    assert so3.schouten_d(so3.pi).max_abs(points) < 1e-10

    _, y, _ = space.coordinates()
    bad = PoissonStructure(space, MultiVector(space, 2, {('x', 'y'): ONE, ('y', 'z'): y}))
    assert bad.schouten_d(bad.pi).max_abs(points) == pytest.approx(2.0)


def test_schouten_rejects_high_degrees(so3, space):
    with pytest.raises(DegreeTooHigh):
        so3.schouten_d(MultiVector(space, 3, {('x', 'y', 'z'): ONE}))


def test_rank_of_cylinder_drops_on_z(cylinder):
    ranks = cylinder.rank_at(np.array([[0.0, 1.0], [0.5, 1.0]]))
    assert list(ranks) == [0, 2]


def test_cosymplectic_reeb_field():
    manifold = ManifoldSpec(['x', 'theta', 'y'], ['theta'])
    eta = one_form(manifold, {'x': ONE})
    omega = DiffForm(manifold, 2, {('y', 'theta'): ONE})
    cosymplectic = CosymplecticStructure(manifold, eta, omega)
    reeb = cosymplectic.reeb()
    points = sample_points(manifold)

    assert eval_at(reeb.component((0,)), [0.0, 0.0, 0.0]) == pytest.approx(1.0)
    assert contract(reeb, omega).max_abs(points) < 1e-12
    assert cosymplectic.anchor_residual(one_form(manifold, {'y': ONE, 'theta': sin(manifold.coordinate('theta'))})) < 1e-12
    assert cosymplectic.poisson().jacobi_check() < 1e-12


def test_flat_inverse_agrees_with_pointwise_solve():
    manifold = ManifoldSpec(['x', 'theta', 'y'], ['theta'])
    x = manifold.coordinate('x')
    eta = one_form(manifold, {'x': ONE})
    omega = DiffForm(manifold, 2, {('theta', 'y'): ONE})
    cosymplectic = CosymplecticStructure(manifold, eta, omega)
    alpha = one_form(manifold, {'x': x, 'y': ONE, 'theta': mul(x, x)})
    points = sample_points(manifold, count=20)
    exact = cosymplectic.flat_inverse(alpha).dense(points)
    assert np.allclose(exact, cosymplectic.flat_inverse_at(alpha, points))


def test_symplectization_is_poisson():
    manifold = ManifoldSpec(['x', 'theta', 'y'], ['theta'])
    cosymplectic = CosymplecticStructure(manifold, one_form(manifold, {'x': ONE}),
                                         DiffForm(manifold, 2, {('theta', 'y'): ONE}))
    extended = cosymplectic.symplectify()
    assert extended.manifold.coord_names == ['x', 'theta', 'y', 's']
    assert extended.jacobi_check() < 1e-12


def test_cosymplectic_rejections(plane, space):
    x = space.coordinate('x')
    with pytest.raises(NotCosymplectic):
        CosymplecticStructure(plane, one_form(plane, {'x': ONE}), DiffForm(plane, 2, {('x', 'y'): ONE}))
    with pytest.raises(NotCosymplectic):
        CosymplecticStructure(space, one_form(space, {'y': x}), DiffForm(space, 2, {('x', 'z'): ONE}))
    with pytest.raises(NotCosymplectic):
        CosymplecticStructure(space, one_form(space, {'x': ONE}), DiffForm(space, 2, {('x', 'y'): ONE}))


def test_b_check_on_cylinder(cylinder):
    volume = volume_form(cylinder.manifold)
    zeta = cylinder.zeta_of(volume)
    result = b_check(cylinder, BStructure(cylinder.manifold, zeta, volume))
    assert result.is_b_poisson
    assert result.zeta_residual == 0.0
    assert np.allclose(result.z_samples[:, 0], 0.0)
    assert result.to_json()['isBPoisson'] is True


def test_b_check_rejects_degenerate_zeta():
    manifold = ManifoldSpec(['z', 'y'])
    z = manifold.coordinate('z')
    poisson = PoissonStructure(manifold, MultiVector(manifold, 2, {('z', 'y'): power(z, 2.0)}))
    volume = volume_form(manifold)
    with pytest.raises(ZetaDegenerate):
        b_check(poisson, BStructure(manifold, power(z, 2.0), volume))
