#!/usr/bin/env python3
'''
        FILE:  poisson.py
 DESCRIPTION:  Poisson bivectors and their brackets, Hamiltonian and modular
               vector fields, the Lichnerowicz differential, and the
               cosymplectic and b-Poisson structure classes.

        BUGS:
       NOTES:  Sign conventions used everywhere in kmscone:
                 {f,g}   = sum_ij Pi^ij d_i f d_j g
                 X_g(f)  = {f,g}        so X_g^i = sum_j Pi^ij d_j g
                 a^#(f)  = Pi(df, a)
                 d_Pi f  = X_f,  d_Pi X = -L_X Pi
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-02
    REVISION:  2021-06-18

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import logging
from itertools import combinations

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from lib.calculus import (TWO_PI, SAMPLE_WINDOW, DiffForm, MultiVector, wedge,
                          contract, exterior_d, lie_derivative, divergence,
                          top_power, power_of, determinant, field_components,
                          apply_field, check_volume, top_density)
from lib.exceptions import (DegreeTooHigh, FlatNotInvertible, ZetaDegenerate,
                            NotCosymplectic)
from lib.expressions import ZERO, ONE, add, mul, neg, power, derive, evaluate, free_coords

IDENTITY_TOLERANCE = 1e-9
IDENTITY_SAMPLES = 200
IDENTITY_SEED = 0

ZETA_DEGENERATE_TOLERANCE = 1e-8
ZERO_TOLERANCE = 1e-10

# root scan along one coordinate line of zeta
Z_SCAN_POINTS = 400
Z_SCAN_LINES = 6


def sample_points(manifold, count=IDENTITY_SAMPLES, seed=IDENTITY_SEED, window=SAMPLE_WINDOW):
    """
    Seeded sample points used by every pointwise identity check
    """
    return manifold.sample(np.random.default_rng(seed), count, window)


def sampled_sup(expr, points):
    return float(np.max(np.abs(evaluate(expr, points))))


################################################################################
# Small Expr matrices
################################################################################
def matrix_of(field):
    """
    Antisymmetric Expr matrix of a 2-form or bivector
    """
    dim = field.manifold.dim
    return [[field.component((i, j)) for j in range(dim)] for i in range(dim)]


def matrix_inverse(rows):
    """
    Adjugate over determinant; returns (inverse, determinant)
    """
    size = len(rows)
    det = determinant(rows)
    inv_det = power(det, -1.0) if not det.is_zero() else None
    if inv_det is None:
        raise FlatNotInvertible("matrix is identically singular")

    inverse = [[ZERO] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(rows) if k != i]
            cofactor = determinant(minor) if minor else ONE
            # adj(A)[j][i] is the (i, j) cofactor
            inverse[j][i] = mul((-1.0) ** (i + j), cofactor, inv_det)
    return inverse, det


def require_nonvanishing(det, manifold, error, label):
    points = sample_points(manifold)
    values = evaluate(det, points)
    if np.min(np.abs(values)) < ZERO_TOLERANCE:
        worst = points[int(np.argmin(np.abs(values)))]
        logging.error("%s is singular near %s", label, worst)
        raise error("%s is singular near %s" % (label, worst))


################################################################################
class PoissonStructure():
    """
    A bivector field Pi on a product manifold together with the operations
    built from its bracket.
    """

    def __init__(self, manifold, pi, symplectic_form=None):
        if pi.degree != 2:
            raise ValueError("a Poisson tensor is a bivector")
        self._manifold = manifold
        self._pi = pi
        self._symplectic_form = symplectic_form


    @property
    def manifold(self):
        '''
        Getter function for self._manifold
        '''
        return self._manifold


    @property
    def pi(self):
        '''
        Getter function for self._pi
        '''
        return self._pi


    @property
    def symplectic_form(self):
        '''
        Getter function for self._symplectic_form
        '''
        return self._symplectic_form


    def bracket(self, f, g):
        """
        {f,g} = Pi(df, dg)
        """
        terms = []
        for (i, j), coefficient in self._pi.components.items():
            cross = add(mul(derive(f, i), derive(g, j)), neg(mul(derive(f, j), derive(g, i))))
            terms.append(mul(coefficient, cross))
        return add(*terms)


    def hamiltonian_field(self, g):
        """
        X_g with X_g(f) = {f,g}
        """
        dim = self._manifold.dim
        partials = [derive(g, j) for j in range(dim)]
        return MultiVector(self._manifold, 1, {
            (i,): add(*[mul(self._pi.component((i, j)), partials[j]) for j in range(dim)])
            for i in range(dim)
        })


    def sharp(self, alpha):
        """
        Anchor map a -> a^# with a^#(f) = Pi(df, a)
        """
        dim = self._manifold.dim
        return MultiVector(self._manifold, 1, {
            (i,): add(*[mul(self._pi.component((i, j)), alpha.component((j,))) for j in range(dim)])
            for i in range(dim)
        })


    def jacobi_residual(self, f, g, h, points=None):
        """
        Sampled sup of the cyclic sum {f,{g,h}} + {g,{h,f}} + {h,{f,g}}
        """
        points = sample_points(self._manifold) if points is None else points
        cyclic = add(self.bracket(f, self.bracket(g, h)),
                     self.bracket(g, self.bracket(h, f)),
                     self.bracket(h, self.bracket(f, g)))
        return sampled_sup(cyclic, points)


    def jacobi_check(self, points=None):
        """
        Largest Jacobi residual over all coordinate triples
        """
        coords = self._manifold.coordinates()
        if len(coords) < 3:
            return 0.0
        points = sample_points(self._manifold) if points is None else points
        return max(self.jacobi_residual(f, g, h, points) for f, g, h in combinations(coords, 3))


    def is_poisson_field(self, field, points=None):
        """
        Sampled sup-norm of L_X Pi; zero exactly when X is a Poisson vector
        field
        """
        points = sample_points(self._manifold) if points is None else points
        return lie_derivative(field, self._pi).max_abs(points)


    def derivation_residual(self, field, f, h, points=None):
        """
        X({f,h}) - {X(f),h} - {f,X(h)} sampled
        """
        points = sample_points(self._manifold) if points is None else points
        residual = add(apply_field(field, self.bracket(f, h)),
                       neg(self.bracket(apply_field(field, f), h)),
                       neg(self.bracket(f, apply_field(field, h))))
        return sampled_sup(residual, points)


    def modular_field(self, volume):
        """
        Y_mu with Y_mu(f) = div_mu(X_f); component j is div_mu(X_{x_j})
        """
        check_volume(volume)
        coords = self._manifold.coordinates()
        return MultiVector(self._manifold, 1, {
            (j,): divergence(self.hamiltonian_field(x_j), volume, check=False)
            for j, x_j in enumerate(coords)
        })


    def schouten_d(self, field):
        """
        Lichnerowicz differential on multivectors of degree <= 2
        """
        if field.degree == 0:
            return self.hamiltonian_field(field.component(()))
        if field.degree == 1:
            return -lie_derivative(field, self._pi)
        if field.degree == 2:
            return self._schouten_bivector(field)
        raise DegreeTooHigh("schouten_d supports degrees 0..2, got %d" % field.degree)


    def _anchor(self, a, expr):
        # {x^a, h}
        return add(*[mul(self._pi.component((a, j)), derive(expr, j))
                     for j in range(self._manifold.dim)])


    def _bracket_pair(self, bivector, a, b, c):
        # B(d Pi^ab, dx^c)
        pi_ab = self._pi.component((a, b))
        return add(*[mul(derive(pi_ab, m), bivector.component((m, c)))
                     for m in free_coords(pi_ab)])


    def _schouten_bivector(self, bivector):
        components = {}
        for a, b, c in combinations(range(self._manifold.dim), 3):
            value = add(self._anchor(a, bivector.component((b, c))),
                        neg(self._anchor(b, bivector.component((a, c)))),
                        self._anchor(c, bivector.component((a, b))),
                        neg(self._bracket_pair(bivector, a, b, c)),
                        self._bracket_pair(bivector, a, c, b),
                        neg(self._bracket_pair(bivector, b, c, a)))
            if not value.is_zero():
                components[(a, b, c)] = value
        return MultiVector(self._manifold, 3, components)


    def rank_at(self, points):
        """
        Rank of Pi at each point
        """
        return np.linalg.matrix_rank(self._pi.dense(points), tol=1e-9)


    def top_power(self):
        return top_power(self._pi)


    def zeta_of(self, volume):
        """
        zeta_mu = i_{Pi^n} mu
        """
        return contract(self.top_power(), volume).component(())


def symplectic_poisson(manifold, omega):
    """
    Poisson tensor of a symplectic form: Pi = -Omega^{-1}, normalized so that
    Pi^n/n! contracted into omega^n/n! is 1
    """
    inverse, det = matrix_inverse(matrix_of(omega))
    require_nonvanishing(det, manifold, FlatNotInvertible, "symplectic form")
    dim = manifold.dim
    pi = MultiVector(manifold, 2, {
        (i, j): neg(inverse[i][j]) for i in range(dim) for j in range(i + 1, dim)
    })
    return PoissonStructure(manifold, pi, symplectic_form=omega)


################################################################################
class CosymplecticStructure():
    """
    (M^{2n+1}, eta, omega) with d eta = 0, d omega = 0 and eta ^ omega^n a
    volume form.
    """

    def __init__(self, manifold, eta, omega):
        if manifold.dim % 2 != 1:
            raise NotCosymplectic("cosymplectic manifolds are odd dimensional")
        if eta.degree != 1 or omega.degree != 2:
            raise NotCosymplectic("need a 1-form eta and a 2-form omega")

        self._manifold = manifold
        self._eta = eta
        self._omega = omega
        self._inverse = None

        points = sample_points(manifold)
        if exterior_d(eta).max_abs(points) > IDENTITY_TOLERANCE:
            raise NotCosymplectic("eta is not closed")
        if exterior_d(omega).max_abs(points) > IDENTITY_TOLERANCE:
            raise NotCosymplectic("omega is not closed")
        try:
            check_volume(self.volume())
        except Exception as err:
            logging.error("eta ^ omega^n is not a volume form")
            logging.error(str(err))
            raise NotCosymplectic(str(err)) from err


    @property
    def manifold(self):
        '''
        Getter function for self._manifold
        '''
        return self._manifold


    @property
    def eta(self):
        '''
        Getter function for self._eta
        '''
        return self._eta


    @property
    def omega(self):
        '''
        Getter function for self._omega
        '''
        return self._omega


    def volume(self):
        """
        eta ^ omega^n
        """
        return wedge(self._eta, power_of(self._omega, self._manifold.dim // 2))


    def flat(self, field):
        """
        flat(X) = i_X omega + eta(X) eta
        """
        eta_x = add(*[mul(self._eta.component((i,)), c) for i, c in enumerate(field_components(field))])
        return contract(field, self._omega) + self._eta.scale(eta_x)


    def flat_matrix(self):
        """
        Expr matrix F with flat(X)_j = sum_i F[j][i] X^i
        """
        dim = self._manifold.dim
        eta = [self._eta.component((i,)) for i in range(dim)]
        return [[add(self._omega.component((i, j)), mul(eta[i], eta[j])) for i in range(dim)]
                for j in range(dim)]


    def _flat_inverse_matrix(self):
        if self._inverse is None:
            inverse, det = matrix_inverse(self.flat_matrix())
            require_nonvanishing(det, self._manifold, FlatNotInvertible, "flat map")
            self._inverse = inverse
        return self._inverse


    def flat_inverse(self, alpha):
        """
        flat^{-1}(alpha) as an exact vector field
        """
        inverse = self._flat_inverse_matrix()
        dim = self._manifold.dim
        return MultiVector(self._manifold, 1, {
            (i,): add(*[mul(inverse[i][j], alpha.component((j,))) for j in range(dim)])
            for i in range(dim)
        })


    def flat_inverse_at(self, alpha, points):
        """
        flat^{-1}(alpha) by pointwise linear solves; returns (N, dim)
        """
        dim = self._manifold.dim
        points = np.atleast_2d(points)
        matrices = np.empty((points.shape[0], dim, dim))
        for j, row in enumerate(self.flat_matrix()):
            for i, entry in enumerate(row):
                matrices[:, j, i] = evaluate(entry, points)
        rhs = alpha.dense(points)
        try:
            return np.linalg.solve(matrices, rhs[..., None])[..., 0]
        except np.linalg.LinAlgError as err:
            logging.error("flat map is singular at a sampled point")
            raise FlatNotInvertible(str(err)) from err


    def reeb(self):
        """
        xi = flat^{-1}(eta): eta(xi) = 1, i_xi omega = 0
        """
        return self.flat_inverse(self._eta)


    def poisson(self):
        """
        Pi(a, s) = omega(flat^{-1} a, flat^{-1} s)
        """
        inverse = self._flat_inverse_matrix()
        dim = self._manifold.dim
        components = {}
        for a in range(dim):
            for b in range(a + 1, dim):
                value = add(*[mul(coefficient, inverse[i][a], inverse[j][b])
                              for (i, j), coefficient in self._omega.components.items()]
                            + [mul(-1.0, coefficient, inverse[j][a], inverse[i][b])
                               for (i, j), coefficient in self._omega.components.items()])
                components[(a, b)] = value
        return PoissonStructure(self._manifold, MultiVector(self._manifold, 2, components))


    def anchor_residual(self, alpha, points=None):
        """
        Sampled sup of a^# - (flat^{-1} a - a(xi) xi)
        """
        points = sample_points(self._manifold) if points is None else points
        xi = self.reeb()
        alpha_xi = add(*[mul(alpha.component((i,)), c) for i, c in enumerate(field_components(xi))])
        expected = self.flat_inverse(alpha) - xi.scale(alpha_xi)
        return (self.poisson().sharp(alpha) - expected).max_abs(points)


    def symplectify(self, name='s'):
        """
        Symplectic form omega + eta ^ ds on M x T and its Poisson tensor
        """
        extended = self._manifold.extend(name, angle=True)
        ds = DiffForm(extended, 1, {(extended.dim - 1,): ONE})
        eta = DiffForm(extended, 1, self._eta.components)
        omega = DiffForm(extended, 2, self._omega.components)
        omega_hat = omega + wedge(eta, ds)
        logging.debug("Symplectified form: %s", omega_hat)
        return symplectic_poisson(extended, omega_hat)


################################################################################
class BStructure():
    """
    Global Z-defining function zeta with the volume form mu it was built from
    """

    def __init__(self, manifold, zeta, volume):
        self._manifold = manifold
        self._zeta = zeta
        self._volume = volume


    @property
    def manifold(self):
        '''
        Getter function for self._manifold
        '''
        return self._manifold


    @property
    def zeta(self):
        '''
        Getter function for self._zeta
        '''
        return self._zeta


    @property
    def volume(self):
        '''
        Getter function for self._volume
        '''
        return self._volume


    def density(self):
        return top_density(self._volume)


class BCheck():
    """
    Outcome of a b-Poisson transversality check
    """

    def __init__(self, is_b_poisson, z_samples, zeta_residual):
        self._is_b_poisson = is_b_poisson
        self._z_samples = z_samples
        self._zeta_residual = zeta_residual


    @property
    def is_b_poisson(self):
        '''
        Getter function for self._is_b_poisson
        '''
        return self._is_b_poisson


    @property
    def z_samples(self):
        '''
        Getter function for self._z_samples
        '''
        return self._z_samples


    @property
    def zeta_residual(self):
        '''
        Getter function for self._zeta_residual
        '''
        return self._zeta_residual


    def to_json(self):
        return {
            'isBPoisson': self._is_b_poisson,
            'zSamples': np.asarray(self._z_samples).tolist(),
            'zetaResidual': self._zeta_residual
        }


def _scan_line(zeta, base, index, lower, upper, periodic):
    """
    Zeros of zeta along one coordinate line through `base`
    """
    grid = np.linspace(lower, upper, Z_SCAN_POINTS, endpoint=not periodic)
    points = np.repeat(base[None, :], grid.size, axis=0)
    points[:, index] = grid
    values = evaluate(zeta, points)

    def along(t):
        point = base.copy()
        point[index] = t
        return float(evaluate(zeta, point[None, :])[0])

    roots = []
    for k in range(grid.size - 1):
        if values[k] == 0.0:
            roots.append(grid[k])
        elif values[k] * values[k + 1] < 0.0:
            roots.append(brentq(along, grid[k], grid[k + 1], xtol=1e-14))

    # even-order zeros show up as near-zero local minima of |zeta|
    magnitude = np.abs(values)
    for k in range(1, grid.size - 1):
        if magnitude[k] <= magnitude[k - 1] and magnitude[k] <= magnitude[k + 1] and values[k] != 0.0:
            if values[k - 1] * values[k + 1] < 0.0:
                continue
            found = minimize_scalar(lambda t: abs(along(t)), bounds=(grid[k - 1], grid[k + 1]),
                                    method='bounded', options={'xatol': 1e-12})
            if abs(found.fun) < ZERO_TOLERANCE:
                roots.append(found.x)

    out = []
    for root in roots:
        point = base.copy()
        point[index] = np.mod(root, TWO_PI) if periodic else root
        out.append(point)
    return out


def zero_set_samples(manifold, zeta, seed=IDENTITY_SEED):
    """
    Points of {zeta = 0} found by scanning coordinate lines
    """
    rng = np.random.default_rng(seed)
    bases = manifold.sample(rng, Z_SCAN_LINES)
    found = []
    for index in sorted(free_coords(zeta)):
        periodic = manifold.is_angle(index)
        lower, upper = (0.0, TWO_PI) if periodic else (-SAMPLE_WINDOW, SAMPLE_WINDOW)
        for base in bases:
            try:
                found.extend(_scan_line(zeta, base, index, lower, upper, periodic))
            except Exception as err:
                logging.error("Root scan of %s failed along coordinate %d", zeta, index)
                logging.error(str(err))
                raise err

    unique = []
    for point in found:
        if not any(np.allclose(point, other, atol=1e-9) for other in unique):
            unique.append(point)
    return np.array(unique).reshape(-1, manifold.dim)


def b_check(poisson, bstructure):
    """
    Confirm zeta = i_{Pi^n} mu and that d zeta does not vanish on Z
    """
    manifold = poisson.manifold
    if manifold.dim % 2:
        raise ValueError("b-Poisson manifolds are even dimensional")

    points = sample_points(manifold)
    residual = sampled_sup(add(poisson.zeta_of(bstructure.volume), neg(bstructure.zeta)), points)

    z_samples = zero_set_samples(manifold, bstructure.zeta)
    logging.debug("Found %d Z samples", len(z_samples))
    if len(z_samples):
        gradient = np.stack([evaluate(derive(bstructure.zeta, i), z_samples)
                             for i in range(manifold.dim)], axis=1)
        norms = np.linalg.norm(gradient, axis=1)
        if np.min(norms) < ZETA_DEGENERATE_TOLERANCE:
            worst = z_samples[int(np.argmin(norms))]
            logging.error("d zeta vanishes on Z near %s", worst)
            raise ZetaDegenerate("d zeta vanishes on Z near %s" % worst)

    is_b = residual <= IDENTITY_TOLERANCE and len(z_samples) > 0
    return BCheck(is_b, z_samples, residual)
