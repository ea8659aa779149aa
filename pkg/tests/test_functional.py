import math

import numpy as np
import pytest

from lib.calculus import DiffForm, ManifoldSpec
from lib.exceptions import QuadratureNotConverged
from lib.expressions import ONE, ZERO, add, bump, exp, mul, power, sin
from lib.functional import (AtomicMixture, Functional, Integrand, LeafPushforward, RegularDensity, SumFunctional,
                            TestPairFamily, decay_bounds, extension_divergence_probe,
                            flow_invariance_residual, gibbs_density, global_kms_residual,
                            integrability_scan, kms_residual, leaf_decay_ratio, perturb, window_mass)
from lib.poisson import symplectic_poisson
from lib.quadrature import QuadResult

LINE = ManifoldSpec(['z'])


def ones(box):
    return Integrand(LINE, func=lambda p: np.ones(len(p)), box=box)


@pytest.fixture
def oscillator(plane):
    x, y = plane.coordinates()
    poisson = symplectic_poisson(plane, DiffForm(plane, 2, {('x', 'y'): ONE}))
    hamiltonian = mul(0.5, add(power(x, 2.0), power(y, 2.0)))
    return poisson, hamiltonian, poisson.hamiltonian_field(hamiltonian)


@pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
def test_gibbs_state_is_kms(plane, oscillator, beta):
    poisson, hamiltonian, field = oscillator
    gibbs = gibbs_density(plane, hamiltonian, beta)
    report = kms_residual(gibbs, poisson, field, beta, TestPairFamily(plane, count=4, seed=1))
    assert report.verdict == 'pass'
    assert report.max_residual < 1e-6
    assert len(report.pairs) == 4


def test_gibbs_state_fails_at_the_wrong_temperature(plane, oscillator):
    poisson, hamiltonian, field = oscillator
    gibbs = gibbs_density(plane, hamiltonian, 1.0)
    report = kms_residual(gibbs, poisson, field, 2.0, TestPairFamily(plane, count=4, seed=1))
    assert report.verdict == 'fail'
    assert not report.passed


def test_global_kms_identity_along_a_translation(plane, oscillator):
    poisson, hamiltonian, field = oscillator
    x, _ = plane.coordinates()
    gibbs = gibbs_density(plane, hamiltonian, 1.0)
    f = mul(bump(0, 0.2, 0.6), bump(1, -0.1, 0.5), add(ONE, x))
    assert global_kms_residual(gibbs, poisson, field, 1.0, x, 0.5, f) < 1e-6
    assert global_kms_residual(gibbs, poisson, field, 1.0, x, 0.0, f) == 0.0


def test_lebesgue_measure_is_flow_invariant(plane, oscillator):
    _, _, field = oscillator
    lebesgue = RegularDensity(plane)
    f = mul(bump(0, 0.3, 0.5), bump(1, 0.0, 0.7))
    assert flow_invariance_residual(lebesgue, field, [0.0, 0.5, 1.0], f) < 1e-6


def test_perturbation_shifts_the_hamiltonian(plane, oscillator):
    _, hamiltonian, _ = oscillator
    x, _ = plane.coordinates()
    gibbs = gibbs_density(plane, hamiltonian, 2.0)
    f = mul(bump(0, 0.0, 1.0), bump(1, 0.4, 0.8))

    perturbed = perturb(gibbs, x, 2.0)
    shifted = gibbs_density(plane, add(hamiltonian, mul(-1.0, x)), 2.0)
    assert perturbed.pair(f)[0] == pytest.approx(shifted.pair(f)[0], rel=1e-8)
    assert perturb(gibbs, ZERO, 2.0) is gibbs


def test_singular_density_pairing():
    z = LINE.coordinate('z')
    density = RegularDensity(LINE, singular_factors=[(z, -0.5)])
    box = [(-1.0, 1.0)]
    # int_{-1}^{1} |z|^-1/2 dz
    assert density.pair(ones(box))[0] == pytest.approx(4.0, rel=1e-8)


def test_region_restricts_the_density():
    z = LINE.coordinate('z')
    density = RegularDensity(LINE, region=[(z, 1)])
    assert density.pair(ones([(-1.0, 1.0)]))[0] == pytest.approx(1.0, rel=1e-10)
    with pytest.raises(ValueError):
        RegularDensity(ManifoldSpec(['x', 'y']), region=[(ONE, 1)])


def test_positivity_check():
    z = LINE.coordinate('z')
    assert RegularDensity(LINE, base=power(z, 2.0)).check_positive()
    assert not RegularDensity(LINE, base=z).check_positive()


@pytest.mark.parametrize("exponent, integrable", [(-0.5, True), (-1.0, False), (-1.5, False)])
def test_integrability_scan(exponent, integrable):
    z = LINE.coordinate('z')
    scan = integrability_scan(RegularDensity(LINE, singular_factors=[(z, exponent)]))
    assert scan.integrable is integrable
    assert len(scan.checked) == 1
    root = scan.checked[0][1]
    assert root == pytest.approx(0.0, abs=1e-12)
    assert scan.to_json()['integrable'] is integrable


def test_extension_probe_grows_exponentially_above_zero():
    result = extension_divergence_probe(0.5)
    assert result.growth == 'exponential'
    assert result.exponent == pytest.approx(0.5, abs=0.1)
    assert result.kappa == 0
    assert result.passed


def test_extension_probe_grows_linearly_at_zero():
    result = extension_divergence_probe(0.0)
    assert result.growth == 'linear'
    assert result.passed
    assert result.to_json()['tag'] == 'NoPositiveExtension'


def test_decay_bounds():
    lower, dropped = decay_bounds(2.0, 0.0)
    assert lower == pytest.approx(math.log(1e-12) / 2.0)
    assert dropped == pytest.approx(0.5e-12)
    with pytest.raises(ValueError):
        decay_bounds(0.0, 1.0)


def test_atomic_mixture(plane):
    atoms = AtomicMixture(plane, atoms=[([0.0, 0.0], 2.0), ([1.0, 0.0], 0.5), ([0.0, 1.0], 1e-14)])
    assert len(atoms.atoms) == 2
    shifted_x = Integrand(plane, func=lambda p: p[:, 0] + 1.0, box=[(-2.0, 2.0), (-2.0, 2.0)])
    assert atoms.pair(shifted_x)[0] == pytest.approx(3.0)


def test_sum_functional(plane):
    first = AtomicMixture(plane, atoms=[([0.0, 0.0], 1.0)])
    second = AtomicMixture(plane, atoms=[([1.0, 1.0], 1.0)])
    total = SumFunctional([(first, 2.0), (second, -1.0)])
    linear = Integrand(plane, func=lambda p: p[:, 0] + 2.0 * p[:, 1] + 1.0, box=[(-2.0, 2.0), (-2.0, 2.0)])
    assert total.pair(linear)[0] == pytest.approx(2.0 * 1.0 - 4.0)
    with pytest.raises(ValueError):
        SumFunctional([])
    with pytest.raises(ValueError):
        SumFunctional([(first, 0.0)])


def test_leaf_pushforward(plane):
    params = ManifoldSpec(['x'])
    leaf = LeafPushforward(plane, params, [params.coordinate('x'), 0.0])
    square = Integrand(plane, func=lambda p: p[:, 0] ** 2 + p[:, 1], box=[(-1.0, 1.0), (-1.0, 1.0)])
    assert leaf.pair(square)[0] == pytest.approx(2.0 / 3.0)
    with pytest.raises(ValueError):
        LeafPushforward(plane, params, [params.coordinate('x')])


def test_window_mass_of_lebesgue_measure(plane):
    mass = window_mass(RegularDensity(plane), [0.0, 0.0], [1.0, 1.0])
    assert 1.0 < mass < 4.0


def test_integrand_needs_exactly_one_source(plane):
    with pytest.raises(ValueError):
        Integrand(plane)
    with pytest.raises(ValueError):
        Integrand(plane, expr=ONE, func=lambda p: p[:, 0])


def test_test_pairs_are_seeded(plane):
    first = TestPairFamily(plane, count=6, seed=3)
    again = TestPairFamily(plane, count=6, seed=3)
    other = TestPairFamily(plane, count=6, seed=4)
    assert len(first) == 6
    assert all(f is g for pair, twin in zip(first.pairs, again.pairs) for f, g in zip(pair, twin))
    assert any(f is not g for pair, twin in zip(first.pairs, other.pairs) for f, g in zip(pair, twin))
    assert first.to_json()['seed'] == 3


class Stalled(Functional):
    """
    Pairs everything to zero with a unit error bound and never converges
    """

    def _integrate(self, func, box, quad):
        channels = np.asarray(func(np.zeros((1, self._manifold.dim)))).shape[1]
        raise QuadratureNotConverged("stalled", QuadResult(np.zeros(channels), np.ones(channels)))


def test_partial_quadrature_is_kept_on_request():
    stalled = SumFunctional([(Stalled(LINE), 2.0), (RegularDensity(LINE), 1.0)])
    with pytest.raises(QuadratureNotConverged):
        stalled.integrate([ones([(0.0, 1.0)])])
    values, abs_values, errors = stalled.integrate([ones([(0.0, 1.0)])], allow_partial=True)
    assert values[0] == pytest.approx(1.0)
    assert abs_values[0] == pytest.approx(1.0)
    assert errors[0] >= 2.0


def test_unconverged_pairs_are_inconclusive(plane, oscillator):
    poisson, _, field = oscillator
    report = kms_residual(Stalled(plane), poisson, field, 1.0, TestPairFamily(plane, count=2, seed=1))
    assert report.verdict == 'inconclusive'
    assert report.max_quad_err > 1.0


def test_integrands_must_be_periodic_in_angles(torus):
    theta = torus.coordinate('theta1')
    Integrand(torus, expr=sin(theta))
    with pytest.raises(ValueError):
        Integrand(torus, expr=sin(mul(0.5, theta)))
    lifted = Integrand(torus, expr=mul(theta, bump(0, 1.0, 0.5, 0, True)), multivalued=True)
    assert lifted.expr is not None
    with pytest.raises(ValueError):
        RegularDensity(torus, base=exp(theta))
    slit = RegularDensity(torus, base=exp(theta), angle_windows={'theta1': (0.0, math.pi)})
    assert slit.base is exp(theta)


def test_perturbation_by_several_potentials(plane, oscillator):
    _, hamiltonian, _ = oscillator
    x, y = plane.coordinates()
    gibbs = gibbs_density(plane, hamiltonian, 1.5)
    f = mul(bump(0, 0.1, 0.9), bump(1, -0.2, 0.8))
    for potential in (x, y, mul(0.5, x, y), power(x, 2.0), add(x, mul(-2.0, y))):
        perturbed = perturb(gibbs, potential, 1.5)
        shifted = gibbs_density(plane, add(hamiltonian, mul(-1.0, potential)), 1.5)
        assert perturbed.pair(f)[0] == pytest.approx(shifted.pair(f)[0], rel=1e-7)


@pytest.mark.parametrize("beta", [0.5, 2.0])
def test_window_mass_rescales_along_the_flow(plane, beta):
    x, y = plane.coordinates()
    poisson = symplectic_poisson(plane, DiffForm(plane, 2, {('x', 'y'): ONE}))
    gibbs = gibbs_density(plane, x, beta)
    ratios = leaf_decay_ratio(gibbs, poisson, y, [0.0, 0.0], [0.5, 0.5], 1.0, steps=5)
    times = [0.2 * k for k in range(1, 6)]

    direction = 1.0 if ratios[0] > 1.0 else -1.0
    expected = [math.exp(direction * beta * t) for t in times]
    assert ratios == pytest.approx(expected, rel=1e-6)
    # |X(g)| = 1, so no window loses more than e^{-beta t}
    assert all(r >= math.exp(-beta * t) * (1.0 - 1e-6) for r, t in zip(ratios, times))
