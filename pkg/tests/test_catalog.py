import math
from os.path import dirname, join, realpath

import pytest

from lib.calculus import vector_field
from lib.catalog import HALF_LINE, MEASURES_ON_LINE, QUADRANT, ZERO, CertificateResult, ConeDescription
from lib.cohomology import TrigPoly
from lib.exceptions import EmptyCone, NotCosymplectic, ScenarioError, UnknownCell
from lib.expressions import ONE, add, bump, cos, mul, power, sin
from lib.functional import RegularDensity, flow_invariance_residual, kms_residual, perturb
from lib.poisson import sample_points
from manifolds import get_manifold

FIXTURES = join(dirname(dirname(realpath(__file__))), 'fixtures')

TABLES = [
    ('symplectic-plane', {}, 'symplectic-plane.md'),
    ('half-cylinder', {}, 'half-cylinder.md'),
    ('b-generic', {}, 'b-generic.md'),
    ('plane-cosymplectic', {}, 'plane-cosymplectic.md'),
    ('torus3', {}, 'torus3.md'),
    ('torus3', {'c': 'sqrt2'}, 'torus3-sqrt2.md'),
    ('btorus', {}, 'btorus.md'),
    ('bfourd', {}, 'bfourd.md'),
    ('bk', {}, 'bk.md'),
    ('spiral', {}, 'spiral.md'),
]


@pytest.mark.parametrize("name, kwargs, fixture", TABLES)
def test_table_matches_fixture(catalog, name, kwargs, fixture):
    with open(join(FIXTURES, fixture), 'r') as fixture_file:
        expected = fixture_file.read()
    assert catalog(name, **kwargs).table().to_markdown() == expected


def test_unknown_example():
    with pytest.raises(ScenarioError):
        get_manifold('klein-bottle')


def test_normalize_coords(catalog):
    btorus = catalog('btorus')
    assert btorus.normalize_coords([1, -1, 0]) == {'b0': 1.0, 'bpi': -1.0, 'c': 0.0}
    assert btorus.normalize_coords({'c': 2.0}) == {'b0': 0.0, 'bpi': 0.0, 'c': 2.0}
    assert btorus.normalize_coords(None) == {'b0': 0.0, 'bpi': 0.0, 'c': 0.0}
    with pytest.raises(UnknownCell):
        btorus.normalize_coords([1.0, 2.0])
    with pytest.raises(UnknownCell):
        btorus.normalize_coords({'a': 1.0})
    with pytest.raises(UnknownCell):
        btorus.normalize_coords([float('nan'), 0.0, 0.0])


def test_non_constant_torus_coordinates_are_outside_the_table(catalog, torus):
    example = catalog('torus3')
    casimir_dependent = TrigPoly.from_expr(sin(torus.coordinate('theta1')), torus)
    with pytest.raises(UnknownCell):
        example.normalize_coords({'t1': casimir_dependent})


@pytest.mark.parametrize("beta", [0.0, -1.0, float('inf')])
def test_classify_needs_positive_beta(catalog, beta):
    with pytest.raises(UnknownCell):
        catalog('btorus').classify([1.0, -1.0, 0.0], beta)


def test_btorus_cells(catalog):
    btorus = catalog('btorus')
    assert btorus.classify([1.0, -1.0, 0.0], 1.0).iso_class == QUADRANT
    resting = btorus.classify([0.0, 0.0, 1.0], 1.0)
    assert resting.iso_class == MEASURES_ON_LINE
    assert resting.extremal_flags.count(False) == 2

    empty = btorus.classify([-1.0, 1.0, 0.0], 1.0)
    assert empty.is_zero
    assert empty.certified
    with pytest.raises(EmptyCone):
        btorus.generators([-1.0, 1.0, 0.0], 1.0)


def test_resting_lines_have_exact_zero_weights(catalog):
    btorus = catalog('btorus')
    weights = btorus.local_weights(btorus.normalize_coords([0.0, 0.0, 1.0]))
    assert weights == [(0.0, 1), (0.0, 1)]
    assert all(math.copysign(1.0, weight) == 1.0 for weight, _ in weights)
    labels = [generator.label for generator in btorus.classify([0.0, 0.0, 1.0], 1.0).generators]
    assert sum(label.startswith('lebesgue on') for label in labels) == 2


def test_btorus_verification(catalog):
    report = catalog('btorus').verify([1.0, -1.0, 0.0], 1.0, pairs=2)
    assert report.verified
    assert len(report.generator_reports) == 2
    assert report.to_json()['cone']['isoClass'] == QUADRANT


def test_structural_checks(catalog):
    checks = catalog('btorus').bundle.structural_checks()
    assert checks['jacobi'] < 1e-12
    assert checks['isBPoisson']
    assert checks['lieDerivative:modular'] < 1e-10


def test_symplectic_plane_has_no_reeb_field(catalog):
    plane = catalog('symplectic-plane')
    with pytest.raises(NotCosymplectic):
        plane.reeb_field()
    assert plane.table().table.loc['0', '0'] == HALF_LINE


def test_sweep_covers_every_cell(catalog):
    spiral = catalog('spiral')
    results = spiral.sweep(betas=(0.5, 2.0))
    assert len(results) == 2 * len(spiral.grid())
    assert all(cone.iso_class == ZERO for cell, _, cone in results if cell.coords['B'] < 0)


def test_cone_description_validation():
    with pytest.raises(ValueError):
        ConeDescription('Torus')
    with pytest.raises(ValueError):
        ConeDescription(QUADRANT, generators=['a', 'b'], extremal_flags=[True])
    assert not ConeDescription(ZERO).certified
    with pytest.raises(ValueError):
        CertificateResult('Hunch', True)


@pytest.mark.parametrize("name, kwargs, coords", [
    ('torus3', {'c': 'sqrt2'}, {}),
    ('torus3', {}, {}),
    ('plane-cosymplectic', {}, {'a': 0.0, 'b': 0.0}),
    ('spiral', {}, {'A': 0.0, 'B': 1.0}),
])
def test_three_dimensional_cells_verify_without_raising(catalog, name, kwargs, coords):
    report = catalog(name, **kwargs).verify(coords, 1.0, pairs=1)
    assert len(report.generator_reports) == len(report.cone.generators)
    assert all(generator.verdict != 'fail' for generator in report.generator_reports)


@pytest.mark.parametrize("name, pairs", [
    ('symplectic-plane', 2),
    ('half-cylinder', 2),
    ('b-generic', 2),
    ('btorus', 2),
    ('bk', 2),
    ('spiral', 1),
])
def test_lebesgue_measure_is_kms_for_the_modular_field(catalog, name, pairs):
    example = catalog(name)
    report = kms_residual(RegularDensity(example.manifold), example.poisson,
                          example.bundle.fields['modular'], 1.0, example.test_pairs(pairs),
                          example.kms_tolerance)
    assert report.verdict == 'pass'


def test_spiral_modular_field_is_the_y_translation(catalog):
    spiral = catalog('spiral')
    points = sample_points(spiral.manifold)
    translation = vector_field(spiral.manifold, {'y': ONE})
    assert (spiral.bundle.fields['modular'] - translation).max_abs(points) < 1e-12


def _potentials(manifold):
    line, other = manifold.coordinates()
    if manifold.angle_mask[0]:
        line, other = other, line
    if manifold.angle_dims:
        return [line, sin(other), mul(0.5, line, cos(other)), mul(0.3, power(line, 2.0)),
                add(line, mul(-1.0, sin(other)))]
    return [line, mul(0.5, other), sin(line), mul(0.3, line, other), add(line, mul(-1.0, other))]


@pytest.mark.parametrize("name", ['symplectic-plane', 'half-cylinder', 'btorus'])
def test_perturbed_lebesgue_measure_is_kms_for_the_shifted_field(catalog, name):
    example = catalog(name)
    modular = example.bundle.fields['modular']
    for potential in _potentials(example.manifold):
        perturbed = perturb(RegularDensity(example.manifold), potential, 1.0)
        field = modular - example.poisson.hamiltonian_field(potential)
        report = kms_residual(perturbed, example.poisson, field, 1.0, example.test_pairs(1),
                              example.kms_tolerance)
        assert report.verdict == 'pass', str(potential)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_spiral_leaf_measures_are_kms(catalog, beta):
    spiral = catalog('spiral')
    coords = {'A': 0.0, 'B': 1.0}
    field = spiral.representative(coords)
    cone = spiral.classify(coords, beta)
    for generator in cone.extremal_generators():
        report = kms_residual(generator, spiral.poisson, field, beta, spiral.test_pairs(1),
                              spiral.kms_tolerance)
        assert report.verdict != 'fail'
        assert report.max_residual < spiral.kms_tolerance


def test_spiral_leaf_measures_break_the_rotation_symmetry(catalog):
    spiral = catalog('spiral')
    rotation = spiral.bundle.fields['rotation']
    f = mul(bump(0, 1.0, 0.3), bump(1, 0.0, 0.4, 0, True), bump(2, 0.0, 0.5))

    leaf = spiral.spiral_generator(1.0, 0.0, 1.0)
    assert leaf.pair(f)[0] > 0.0
    assert flow_invariance_residual(leaf, rotation, [math.pi], f) > 0.01

    mixture = spiral.invariant_density(1.0)
    assert flow_invariance_residual(mixture, rotation, [0.5, math.pi], f) < 1e-5
