import pytest

from lib.calculus import (DiffForm, ManifoldSpec, MultiVector, basis_vector, function, one_form,
                          vector_field, volume_form)
from lib.complexes import (TwistData, d_beta, d_squared_residual, delta_beta,
                           delta_squared_residual, intertwining_residual, intertwining_sign)
from lib.exceptions import DegreeMismatch, DegreeTooHigh
from lib.expressions import ONE, add, cos, eval_at, mul, power, sin
from lib.poisson import PoissonStructure, sample_points


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


def test_negative_beta_is_rejected(so3):
    with pytest.raises(ValueError):
        TwistData(so3, basis_vector(so3.manifold, 'x'), -0.5)


def test_hamiltonian_twist_is_a_poisson_field(so3):
    x = so3.manifold.coordinate('x')
    twist = TwistData(so3, so3.hamiltonian_field(x), 1.0)
    assert twist.check_poisson_field() < 1e-12


def test_delta_beta_on_top_forms_is_the_differential(plane):
    x, y = plane.coordinates()
    poisson = PoissonStructure(plane, MultiVector(plane, 2, {('x', 'y'): ONE}))
    twist = TwistData(poisson, basis_vector(plane, 'x'), 0.0)
    result = delta_beta(twist, volume_form(plane, mul(x, y)))
    assert result.degree == 1
    assert eval_at(result.component((0,)), [2.0, 3.0]) == pytest.approx(3.0)
    assert eval_at(result.component((1,)), [2.0, 3.0]) == pytest.approx(2.0)


def test_delta_beta_twist_term(plane):
    _, y = plane.coordinates()
    poisson = PoissonStructure(plane, MultiVector(plane, 2, {('x', 'y'): ONE}))
    twist = TwistData(poisson, vector_field(plane, {'x': y}), 2.0)
    result = delta_beta(twist, one_form(plane, {'x': ONE}))
    assert result.degree == 0
    assert eval_at(result.component(()), [0.0, 1.5]) == pytest.approx(-3.0)


def test_delta_beta_rejects_functions(plane):
    poisson = PoissonStructure(plane, MultiVector(plane, 2, {('x', 'y'): ONE}))
    twist = TwistData(poisson, basis_vector(plane, 'x'), 1.0)
    with pytest.raises(DegreeMismatch):
        delta_beta(twist, function(plane, ONE))


def test_d_beta_rejects_high_degrees(so3, space):
    twist = TwistData(so3, so3.hamiltonian_field(space.coordinate('x')), 1.0)
    with pytest.raises(DegreeTooHigh):
        d_beta(twist, MultiVector(space, 3, {('x', 'y', 'z'): ONE}))


@pytest.mark.parametrize("beta", [0.0, 0.5, 2.0])
def test_delta_beta_squares_to_zero(cylinder, beta):
    x, theta = cylinder.manifold.coordinates()
    twist = TwistData(cylinder, basis_vector(cylinder.manifold, 'theta'), beta)
    form = DiffForm(cylinder.manifold, 2, {('x', 'theta'): mul(power(x, 2.0), sin(theta))})
    assert delta_squared_residual(twist, form) < 1e-10


@pytest.mark.parametrize("beta", [0.0, 1.0, 3.0])
def test_delta_beta_squares_to_zero_on_linear_structure(so3, beta):
    x, y, z = so3.manifold.coordinates()
    twist = TwistData(so3, so3.hamiltonian_field(y), beta)
    form = DiffForm(so3.manifold, 2, {('x', 'y'): mul(x, z), ('y', 'z'): sin(y), ('x', 'z'): ONE})
    assert delta_squared_residual(twist, form) < 1e-10


@pytest.mark.parametrize("beta", [0.0, 1.0, 2.5])
def test_d_beta_squares_to_zero(so3, beta):
    x, y, z = so3.manifold.coordinates()
    twist = TwistData(so3, so3.hamiltonian_field(x), beta)
    assert d_squared_residual(twist, function(so3.manifold, mul(y, z), kind=MultiVector)) < 1e-10
    field = vector_field(so3.manifold, {'x': mul(y, y), 'z': sin(x)})
    assert d_squared_residual(twist, field) < 1e-10


def test_d_beta_on_functions_twists_the_hamiltonian_field(plane):
    x, y = plane.coordinates()
    poisson = PoissonStructure(plane, MultiVector(plane, 2, {('x', 'y'): ONE}))
    hamiltonian = mul(0.5, add(power(x, 2.0), power(y, 2.0)))
    field = poisson.hamiltonian_field(hamiltonian)
    twist = TwistData(poisson, field, 1.0)
    points = sample_points(plane)

    # d_beta h = X_h - beta h X_h
    expected = (poisson.hamiltonian_field(hamiltonian) - field.scale(hamiltonian))
    result = d_beta(twist, function(plane, hamiltonian, kind=MultiVector))
    assert (result - expected).max_abs(points) < 1e-12


def test_intertwining_sign():
    assert [intertwining_sign(k) for k in range(4)] == [1, -1, 1, -1]


@pytest.mark.parametrize("beta", [0.0, 1.0, 2.0])
def test_volume_pairing_intertwines(so3, beta):
    x, y, z = so3.manifold.coordinates()
    volume = volume_form(so3.manifold)
    twist = TwistData(so3, so3.hamiltonian_field(z), beta)
    points = sample_points(so3.manifold)

    scalar = function(so3.manifold, mul(x, sin(y)), kind=MultiVector)
    field = vector_field(so3.manifold, {'x': mul(y, z), 'y': ONE, 'z': power(x, 2.0)})
    bivector = MultiVector(so3.manifold, 2, {('x', 'z'): y, ('y', 'z'): sin(x)})
    for multivector in (scalar, field, bivector):
        assert intertwining_residual(twist, multivector, volume, points) < 1e-10


CATALOG = [('symplectic-plane', {}), ('half-cylinder', {}), ('b-generic', {}), ('plane-cosymplectic', {}),
           ('torus3', {}), ('torus3', {'c': 'sqrt2'}), ('btorus', {}), ('bfourd', {}), ('bk', {}),
           ('spiral', {})]


def _generic_two_form(manifold):
    coords = manifold.coordinates()
    components = {}
    for i in range(manifold.dim):
        for j in range(i + 1, manifold.dim):
            components[(i, j)] = mul(sin(add(coords[i], 0.3 * (i + j + 1))),
                                     add(ONE, mul(0.5, cos(coords[j]))))
    return DiffForm(manifold, 2, components)


@pytest.mark.parametrize("name, kwargs", CATALOG)
def test_twisted_differentials_square_to_zero_on_the_catalog(catalog, name, kwargs):
    example = catalog(name, **kwargs)
    manifold = example.manifold
    twist = TwistData(example.poisson, example.representative(example.grid()[-1].coords), 1.0)
    points = sample_points(manifold, count=200)
    coords = manifold.coordinates()

    assert delta_squared_residual(twist, _generic_two_form(manifold), points) < 1e-9
    scalar = function(manifold, mul(sin(coords[0]), cos(coords[-1])), kind=MultiVector)
    assert d_squared_residual(twist, scalar, points) < 1e-9
    if manifold.dim >= 3:
        field = vector_field(manifold, {manifold.coord_names[0]: cos(coords[1]),
                                        manifold.coord_names[-1]: sin(coords[0])})
        assert d_squared_residual(twist, field, points) < 1e-9
