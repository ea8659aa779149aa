#!/usr/bin/env python3
'''
        FILE:  calculus.py
 DESCRIPTION:  Product manifolds R^a x T^b, differential forms, multivector
               fields, b-forms and the graded exterior calculus used by every
               other kmscone module.

        BUGS:
       NOTES:  Components are stored on strictly increasing index tuples only.
               Contraction pairs the first slots of the form with the
               multivector: i_{d_a ^ d_b} w = w(d_a, d_b, .).  A worked example
               is in Docs/conventions.txt.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-01
    REVISION:  2021-06-14

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import math
import logging
from itertools import combinations

import numpy as np

from lib.exceptions import DegreeMismatch, DegenerateVolume
from lib.expressions import (ZERO, ONE, as_expr, add, mul, power, coord,
                             derive, evaluate, free_coords, is_periodic)
from lib.quadrature import line_roots

TWO_PI = 2.0 * math.pi

# half-width of the sampling window along linear coordinates
SAMPLE_WINDOW = 2.0


def perm_sign(indices):
    """
    Sign of the permutation sorting `indices`; 0 when an index repeats
    """
    indices = list(indices)
    if len(set(indices)) != len(indices):
        return 0

    sign = 1
    for i in range(len(indices)):
        for j in range(i + 1, len(indices)):
            if indices[i] > indices[j]:
                sign = -sign
    return sign


################################################################################
class ManifoldSpec():
    """
    R^a x T^b with named coordinates; angle coordinates have period 2 pi.
    """

    def __init__(self, coord_names, angle_names=()):
        coord_names = [str(name) for name in coord_names]
        if len(coord_names) < 1:
            raise ValueError("a manifold needs at least one coordinate")
        if len(set(coord_names)) != len(coord_names):
            raise ValueError("coordinate names must be unique: %s" % coord_names)
        unknown = set(angle_names) - set(coord_names)
        if unknown:
            raise ValueError("unknown angle coordinates: %s" % sorted(unknown))

        self._coord_names = coord_names
        self._angles = [name in angle_names for name in coord_names]
        self._coords = [coord(i, name, self._angles[i]) for i, name in enumerate(coord_names)]


    @property
    def coord_names(self):
        '''
        Getter function for self._coord_names
        '''
        return list(self._coord_names)


    @property
    def dim(self):
        return len(self._coord_names)


    @property
    def linear_dims(self):
        return self._angles.count(False)


    @property
    def angle_dims(self):
        return self._angles.count(True)


    @property
    def angle_mask(self):
        return list(self._angles)


    def __str__(self):
        factors = ['T' if angle else 'R' for angle in self._angles]
        return 'x'.join(factors) + ' (' + ', '.join(self._coord_names) + ')'


    def is_angle(self, index):
        return self._angles[index]


    def has_coord(self, name):
        return name in self._coord_names


    def index(self, name):
        if isinstance(name, int):
            return name
        try:
            return self._coord_names.index(name)
        except ValueError as err:
            raise ValueError("unknown coordinate '%s'" % name) from err


    def coordinate(self, name):
        """
        The coordinate function as an Expr
        """
        return self._coords[self.index(name)]


    def coordinates(self):
        return list(self._coords)


    def extend(self, name, angle=True):
        """
        M x R or M x T with one more coordinate appended
        """
        names = self._coord_names + [name]
        angles = [n for n, a in zip(self._coord_names, self._angles) if a]
        if angle:
            angles.append(name)
        return ManifoldSpec(names, angles)


    def sample(self, rng, count, window=SAMPLE_WINDOW):
        """
        Uniform random points: linear coordinates in [-window, window], angles
        in [0, 2 pi)
        """
        points = np.empty((count, self.dim))
        for i, angle in enumerate(self._angles):
            if angle:
                points[:, i] = rng.uniform(0.0, TWO_PI, count)
            else:
                points[:, i] = rng.uniform(-window, window, count)
        return points


    def require_periodic(self, expr, label='expression'):
        if self.angle_dims and not is_periodic(expr, self.angle_mask):
            raise ValueError("%s is not 2 pi periodic in the angle coordinates" % label)


################################################################################
class GradedField():
    """
    Common storage for k-forms and k-vector fields: a map from strictly
    increasing index tuples to Expr coefficients.
    """

    kind = 'graded'

    def __init__(self, manifold, degree, components=None):
        # degrees above dim are allowed and always zero
        if degree < 0:
            raise DegreeMismatch("negative degree %d" % degree)
        self._manifold = manifold
        self._degree = degree
        self._components = {}

        for indices, value in (components or {}).items():
            indices = tuple(manifold.index(i) for i in indices)
            if len(indices) != degree:
                raise DegreeMismatch("component %s does not have degree %d" % (indices, degree))
            sign = perm_sign(indices)
            if sign == 0:
                continue
            key = tuple(sorted(indices))
            self._components[key] = add(self._components.get(key, ZERO), mul(sign, as_expr(value)))

        self._components = {k: v for k, v in self._components.items() if not v.is_zero()}


    @property
    def manifold(self):
        '''
        Getter function for self._manifold
        '''
        return self._manifold


    @property
    def degree(self):
        '''
        Getter function for self._degree
        '''
        return self._degree


    @property
    def components(self):
        '''
        Getter function for self._components
        '''
        return dict(self._components)


    def _like(self, degree, components):
        return type(self)(self._manifold, degree, components)


    def component(self, indices):
        """
        Coefficient on an arbitrary (possibly unsorted) index tuple
        """
        indices = tuple(indices)
        sign = perm_sign(indices)
        if sign == 0:
            return ZERO
        value = self._components.get(tuple(sorted(indices)), ZERO)
        return mul(sign, value)


    def is_zero(self):
        return not self._components


    def __add__(self, other):
        self._check_same(other)
        merged = dict(self._components)
        for key, value in other.components.items():
            merged[key] = add(merged.get(key, ZERO), value)
        return self._like(self._degree, merged)


    def __sub__(self, other):
        return self + other.scale(-1.0)


    def __neg__(self):
        return self.scale(-1.0)


    def scale(self, factor):
        """
        Multiply every coefficient by a scalar or an Expr
        """
        return self._like(self._degree, {k: mul(factor, v) for k, v in self._components.items()})


    def map(self, func):
        return self._like(self._degree, {k: func(v) for k, v in self._components.items()})


    def _check_same(self, other):
        if type(other) is not type(self) or other.degree != self._degree:
            raise DegreeMismatch("cannot combine %s of degree %d with %s of degree %d"
                                 % (self.kind, self._degree, other.kind, other.degree))


    def evaluate(self, points):
        """
        Coefficient arrays at points, keyed by index tuple
        """
        return {k: evaluate(v, points) for k, v in self._components.items()}


    def max_abs(self, points):
        """
        Sampled sup-norm of all coefficients
        """
        values = self.evaluate(points)
        if not values:
            return 0.0
        return float(max(np.max(np.abs(v)) for v in values.values()))


    def dense(self, points):
        """
        Degree-1: array (N, dim).  Degree-2: antisymmetric array (N, dim, dim).
        """
        n_points = np.atleast_2d(points).shape[0]
        dim = self._manifold.dim
        values = self.evaluate(points)
        if self._degree == 1:
            out = np.zeros((n_points, dim))
            for (i,), v in values.items():
                out[:, i] = v
            return out
        if self._degree == 2:
            out = np.zeros((n_points, dim, dim))
            for (i, j), v in values.items():
                out[:, i, j] = v
                out[:, j, i] = -v
            return out
        raise DegreeMismatch("dense() supports degrees 1 and 2 only")


    def __str__(self):
        names = self._manifold.coord_names
        if not self._components:
            return "0"
        parts = []
        for key in sorted(self._components):
            label = self._basis_label(key, names)
            parts.append("%s %s" % (repr(self._components[key]), label))
        return " + ".join(parts)


    def _basis_label(self, key, names):
        return "[" + ",".join(names[i] for i in key) + "]"


class DiffForm(GradedField):
    """
    k-form sum_I w_I dx^I
    """

    kind = 'form'

    def _basis_label(self, key, names):
        return "^".join("d" + names[i] for i in key) if key else ""


class MultiVector(GradedField):
    """
    k-vector field sum_I V^I d_I
    """

    kind = 'multivector'

    def _basis_label(self, key, names):
        return "^".join("d_" + names[i] for i in key) if key else ""

    def __call__(self, *forms):
        """
        Evaluate on k one-forms: V(a_1, ..., a_k)
        """
        if len(forms) != self._degree:
            raise DegreeMismatch("need %d one-forms" % self._degree)
        if self._degree == 0:
            return self.component(())
        total = ZERO
        for key, value in self._components.items():
            rows = [[form.component((i,)) for i in key] for form in forms]
            total = add(total, mul(value, determinant(rows)))
        return total


def determinant(rows):
    """
    Expr determinant by cofactor expansion (small sizes only)
    """
    size = len(rows)
    if size == 1:
        return rows[0][0]
    if size == 2:
        return add(mul(rows[0][0], rows[1][1]), mul(-1.0, rows[0][1], rows[1][0]))
    total = ZERO
    for col in range(size):
        minor = [row[:col] + row[col + 1:] for row in rows[1:]]
        total = add(total, mul((-1.0) ** col, rows[0][col], determinant(minor)))
    return total


################################################################################
# Convenience constructors
################################################################################
def function(manifold, expr, kind=DiffForm):
    return kind(manifold, 0, {(): as_expr(expr)})


def one_form(manifold, coefficients):
    """
    coefficients: dict coordinate name -> Expr
    """
    return DiffForm(manifold, 1, {(name,): value for name, value in coefficients.items()})


def vector_field(manifold, coefficients):
    """
    coefficients: dict coordinate name -> Expr
    """
    return MultiVector(manifold, 1, {(name,): value for name, value in coefficients.items()})


def basis_vector(manifold, name):
    return vector_field(manifold, {name: ONE})


def coordinate_differential(manifold, name):
    return one_form(manifold, {name: ONE})


def volume_form(manifold, density=ONE):
    return DiffForm(manifold, manifold.dim, {tuple(range(manifold.dim)): as_expr(density)})


def field_components(field):
    """
    Vector field coefficients as a list of Expr indexed by coordinate
    """
    return [field.component((i,)) for i in range(field.manifold.dim)]


def apply_field(field, expr):
    """
    X(f) = sum_i X^i d_i f
    """
    return add(*[mul(field.component((i,)), derive(expr, i))
                 for i in range(field.manifold.dim) if (i,) in field.components])


################################################################################
# Exterior algebra
################################################################################
def wedge(first, second):
    """
    Wedge product of two forms or of two multivectors
    """
    if type(first) is not type(second):
        raise DegreeMismatch("wedge needs two forms or two multivectors")
    degree = first.degree + second.degree
    manifold = first.manifold

    out = {}
    for left, a in first.components.items():
        for right, b in second.components.items():
            joined = left + right
            sign = perm_sign(joined)
            if sign == 0:
                continue
            key = tuple(sorted(joined))
            out[key] = add(out.get(key, ZERO), mul(sign, a, b))
    return type(first)(manifold, degree, out)


def contract(vector, form):
    """
    Interior product i_V w of a k-vector V into an l-form w, l >= k, pairing
    the first k slots of w with V.
    """
    if not isinstance(vector, MultiVector) or not isinstance(form, DiffForm):
        raise DegreeMismatch("contract needs a multivector and a form")
    if vector.degree > form.degree:
        raise DegreeMismatch("cannot contract a %d-vector into a %d-form" % (vector.degree, form.degree))

    out = {}
    for inner, v in vector.components.items():
        for outer, w in form.components.items():
            if not set(inner) <= set(outer):
                continue
            rest = tuple(i for i in outer if i not in inner)
            sign = perm_sign(inner + rest)
            out[rest] = add(out.get(rest, ZERO), mul(sign, v, w))
    return DiffForm(form.manifold, form.degree - vector.degree, out)


def exterior_d(form):
    """
    Exterior derivative
    """
    manifold = form.manifold

    out = {}
    for indices, value in form.components.items():
        for j in range(manifold.dim):
            if j in indices:
                continue
            d_value = derive(value, j)
            if d_value.is_zero():
                continue
            joined = (j,) + indices
            key = tuple(sorted(joined))
            out[key] = add(out.get(key, ZERO), mul(perm_sign(joined), d_value))
    return DiffForm(manifold, form.degree + 1, out)


def d(manifold, expr):
    """
    df as a one-form
    """
    return exterior_d(function(manifold, expr))


def lie_derivative(field, tensor):
    """
    L_X of a form or multivector field in coordinates
    """
    manifold = tensor.manifold
    dim = manifold.dim
    x_comp = field_components(field)
    out = {}

    for indices in combinations(range(dim), tensor.degree):
        total = apply_field(field, tensor.component(indices))
        for slot, i_r in enumerate(indices):
            for l in range(dim):
                swapped = indices[:slot] + (l,) + indices[slot + 1:]
                coefficient = tensor.component(swapped)
                if coefficient.is_zero():
                    continue
                if isinstance(tensor, DiffForm):
                    total = add(total, mul(coefficient, derive(x_comp[l], i_r)))
                else:
                    total = add(total, mul(-1.0, coefficient, derive(x_comp[i_r], l)))
        if not total.is_zero():
            out[indices] = total

    return type(tensor)(manifold, tensor.degree, out)


def lie_bracket(first, second):
    """
    [X, Y] = L_X Y for vector fields
    """
    return lie_derivative(first, second)


def top_density(volume):
    """
    The coefficient rho of a top form rho dx^1 ^ ... ^ dx^m
    """
    manifold = volume.manifold
    if volume.degree != manifold.dim:
        raise DegreeMismatch("expected a top-degree form")
    return volume.component(tuple(range(manifold.dim)))


def check_volume(volume, rng=None, count=200):
    """
    Raise DegenerateVolume if the density vanishes at a sampled point, changes
    sign across the samples, or (for densities of one coordinate) has a root
    inside the sampling window
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    manifold = volume.manifold
    rho = top_density(volume)
    points = manifold.sample(rng, count)
    values = evaluate(rho, points)
    if np.min(np.abs(values)) < 1e-12:
        worst = points[int(np.argmin(np.abs(values)))]
        logging.error("Volume form vanishes near %s", worst)
        raise DegenerateVolume("volume form vanishes near %s" % worst)
    if np.min(values) < 0.0 < np.max(values):
        logging.error("Volume form changes sign between sampled points")
        raise DegenerateVolume("volume form changes sign")

    coords = free_coords(rho)
    if len(coords) == 1:
        index = coords.pop()
        lower, upper = (0.0, TWO_PI) if manifold.is_angle(index) else (-SAMPLE_WINDOW, SAMPLE_WINDOW)
        roots = line_roots(rho, index, manifold.dim, lower, upper)
        if roots:
            logging.error("Volume form vanishes at %s = %g", manifold.coord_names[index], roots[0])
            raise DegenerateVolume("volume form vanishes at %s = %g"
                                   % (manifold.coord_names[index], roots[0]))
    return rho


def divergence(field, volume, check=True):
    """
    div_mu X with L_X mu = div_mu(X) mu; mu = rho dx^1..dx^m gives
    (1/rho) sum_i d_i(rho X^i)
    """
    rho = check_volume(volume) if check else top_density(volume)
    total = add(*[derive(mul(rho, c), i) for i, c in enumerate(field_components(field)) if not c.is_zero()])
    return mul(total, power(rho, -1.0))


def top_power(bivector):
    """
    Pi^n / n! for a bivector on a 2n-dimensional manifold
    """
    manifold = bivector.manifold
    if manifold.dim % 2:
        raise DegreeMismatch("top power needs an even dimension")
    n = manifold.dim // 2
    result = bivector
    for _ in range(n - 1):
        result = wedge(result, bivector)
    return result.scale(1.0 / math.factorial(n))


def power_of(form, count):
    """
    form^count (wedge power) for forms of even degree
    """
    if count == 0:
        return function(form.manifold, ONE, kind=type(form))
    result = form
    for _ in range(count - 1):
        result = wedge(result, form)
    return result


################################################################################
class BForm():
    """
    b-form alpha ^ (d zeta / zeta) + sigma of degree k, with alpha of degree
    k-1 and sigma of degree k.
    """

    def __init__(self, zeta, alpha, sigma):
        if alpha.degree + 1 != sigma.degree:
            raise DegreeMismatch("alpha must have degree deg(sigma) - 1")
        self._zeta = as_expr(zeta)
        self._alpha = alpha
        self._sigma = sigma


    @property
    def zeta(self):
        '''
        Getter function for self._zeta
        '''
        return self._zeta


    @property
    def alpha(self):
        '''
        Getter function for self._alpha
        '''
        return self._alpha


    @property
    def sigma(self):
        '''
        Getter function for self._sigma
        '''
        return self._sigma


    @property
    def degree(self):
        return self._sigma.degree


    def is_zero(self):
        return self._alpha.is_zero() and self._sigma.is_zero()


    def on_complement(self):
        """
        The ordinary form on M minus Z: alpha ^ d zeta / zeta + sigma
        """
        manifold = self._sigma.manifold
        log_d = d(manifold, self._zeta).scale(power(self._zeta, -1.0))
        return wedge(self._alpha, log_d) + self._sigma


    def max_abs(self, points):
        return max(self._alpha.max_abs(points), self._sigma.max_abs(points))


def b_exterior_d(bform):
    """
    b-de Rham differential: d alpha ^ (d zeta / zeta) + d sigma
    """
    return BForm(bform.zeta, exterior_d(bform.alpha), exterior_d(bform.sigma))
