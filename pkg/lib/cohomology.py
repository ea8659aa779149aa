#!/usr/bin/env python3
'''
        FILE:  cohomology.py
 DESCRIPTION:  Solvers for the first Poisson cohomology of the catalog
               manifolds: Fourier transport on the 3-torus with small-divisor
               control, Diophantine approximation, the spiral D_beta equation
               and the class-coordinate maps (Torus3, Spiral, BTorus), plus
               the residue form of the Hamiltonian solve dH = theta on the
               complement of Z.

        BUGS:  TrigPoly coefficients are constants; polynomial dependence on
               linear coordinates is not supported.
       NOTES:  Exact parameters (sympy numbers such as sqrt(2) or 1/2) decide
               resonance; mpmath evaluates the divisors p + c q.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-10
    REVISION:  2021-06-24

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import math
import logging

import mpmath
import numpy as np
import sympy
from numpy.polynomial.legendre import leggauss

from lib.calculus import TWO_PI, ManifoldSpec, field_components, lie_derivative
from lib.exceptions import NonConstantBoundary, NonPoissonInput, SmallDivisorGuard
from lib.expressions import (ONE, ZERO, add, const, cos, derive, evaluate, free_coords, mul, sin,
                             support_box)
from lib.functional import decay_bounds
from lib.poisson import IDENTITY_TOLERANCE, sample_points, sampled_sup
from lib.quadrature import integrate_box, line_function
from lib.utils import parse_constant

DEFAULT_DEGREE = 16
COEFFICIENT_CUTOFF = 1e-13
RESONANT_TOLERANCE = 1e-12
DIVISOR_GUARD = 1e-12
EXTENDED_DPS = 40

TRANSPORT_TOLERANCE = 1e-9
RESIDUAL_GRID = 32

RANGE_TOLERANCE = 1e-8
SOLVE_TOLERANCE = 1e-6
THETA_GRID = 64
SOLVE_REL_TOL = 1e-12
SOLVE_ABS_TOL = 1e-12
CIRCLE_NODES = 256

# residues and boundary values below this are exact zeros
RESIDUE_SNAP = 1e-12

# the plane (x, theta) on which D_beta acts
SPIRAL_PLANE = ManifoldSpec(['x', 'theta'], ['theta'])


################################################################################
# Exact parameters
################################################################################
def exact_constant(value):
    """
    sympy number for a float, string or sympy input
    """
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, str):
        return parse_constant(value)
    return sympy.nsimplify(value, [sympy.sqrt(2)], rational=False)


def extended(value):
    with mpmath.workdps(EXTENDED_DPS):
        return mpmath.mpf(str(sympy.N(value, EXTENDED_DPS)))


def is_rational(value):
    return bool(exact_constant(value).is_rational)


################################################################################
# Trigonometric polynomials
################################################################################
class TrigPoly():
    """
    Finite Fourier series sum_k c_k exp(i k.theta) over the angle coordinates
    at manifold positions `angles`.  Real polynomials satisfy
    c_{-k} = conj(c_k).
    """

    def __init__(self, angles, coefficients=None, degree=DEFAULT_DEGREE):
        self._angles = tuple(int(i) for i in angles)
        self._degree = int(degree)
        self._coefficients = {}
        for key, value in (coefficients or {}).items():
            value = complex(value)
            if abs(value) > COEFFICIENT_CUTOFF:
                self._coefficients[tuple(int(k) for k in key)] = value


    @classmethod
    def from_expr(cls, expr, manifold, angles=None, degree=DEFAULT_DEGREE):
        """
        Sample expr on a uniform grid and keep the modes with |k_i| <= degree
        """
        angles = tuple(i for i in range(manifold.dim) if manifold.is_angle(i)) \
            if angles is None else tuple(angles)
        if free_coords(expr) - set(angles):
            raise ValueError("%s depends on non-angle coordinates" % expr)

        size = 2 * degree + 2
        axis = TWO_PI * np.arange(size) / size
        grid = np.stack(np.meshgrid(*[axis] * len(angles), indexing='ij'), axis=-1)
        points = np.zeros((grid.size // len(angles), manifold.dim))
        points[:, list(angles)] = grid.reshape(-1, len(angles))

        values = evaluate(expr, points).reshape((size,) * len(angles))
        spectrum = np.fft.fftn(values) / values.size
        frequencies = np.rint(np.fft.fftfreq(size, 1.0 / size)).astype(int)

        coefficients = {}
        for index in np.ndindex(spectrum.shape):
            key = tuple(int(frequencies[i]) for i in index)
            if max(abs(k) for k in key) <= degree:
                coefficients[key] = spectrum[index]

        poly = cls(angles, coefficients, degree)
        aliasing = float(np.max(np.abs(poly.evaluate(points) - values.reshape(-1))))
        if aliasing > TRANSPORT_TOLERANCE:
            logging.warning("%s is not resolved by modes <= %d (grid error %g)", expr, degree, aliasing)
        return poly


    @property
    def angles(self):
        '''
        Getter function for self._angles
        '''
        return self._angles


    @property
    def degree(self):
        '''
        Getter function for self._degree
        '''
        return self._degree


    @property
    def coefficients(self):
        '''
        Getter function for self._coefficients
        '''
        return dict(self._coefficients)


    def is_zero(self, tolerance=0.0):
        return all(abs(v) <= tolerance for v in self._coefficients.values())


    def is_constant(self):
        return all(not any(key) for key in self._coefficients)


    def mean(self):
        return self._coefficients.get((0,) * len(self._angles), 0j).real


    def max_coefficient(self):
        return max([abs(v) for v in self._coefficients.values()] or [0.0])


    def _like(self, coefficients):
        return TrigPoly(self._angles, coefficients, self._degree)


    def __add__(self, other):
        out = dict(self._coefficients)
        for key, value in other.coefficients.items():
            out[key] = out.get(key, 0j) + value
        return self._like(out)


    def __sub__(self, other):
        return self + other.scale(-1.0)


    def __neg__(self):
        return self.scale(-1.0)


    def scale(self, factor):
        return self._like({k: factor * v for k, v in self._coefficients.items()})


    def project(self, keep):
        """
        Keep the modes k with keep(k) true
        """
        return self._like({k: v for k, v in self._coefficients.items() if keep(k)})


    def derivative(self, position):
        """
        d/d theta for the angle at `position` in self.angles
        """
        return self._like({k: 1j * k[position] * v for k, v in self._coefficients.items()})


    def directional(self, weights):
        """
        sum_j w_j d/d theta_j
        """
        return self._like({k: 1j * float(np.dot(k, weights)) * v for k, v in self._coefficients.items()})


    def evaluate(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if not self._coefficients:
            return np.zeros(points.shape[0])
        keys = np.array(list(self._coefficients.keys()), dtype=float)
        values = np.array(list(self._coefficients.values()))
        phase = points[:, list(self._angles)] @ keys.T
        return np.real(np.exp(1j * phase) @ values)


    def grid_points(self, manifold, size=RESIDUAL_GRID):
        axis = TWO_PI * np.arange(size) / size
        grid = np.stack(np.meshgrid(*[axis] * len(self._angles), indexing='ij'), axis=-1)
        points = np.zeros((grid.size // len(self._angles), manifold.dim))
        points[:, list(self._angles)] = grid.reshape(-1, len(self._angles))
        return points


    def sup_norm(self, manifold, size=RESIDUAL_GRID):
        return float(np.max(np.abs(self.evaluate(self.grid_points(manifold, size)))))


    def to_expr(self, manifold):
        """
        Real Expr 2 Re(c_k e^{i k.theta}) summed over half the modes
        """
        terms = []
        for key in sorted(self._coefficients):
            value = self._coefficients[key]
            if not any(key):
                terms.append(const(value.real))
                continue
            first = next(k for k in key if k != 0)
            if first < 0 and tuple(-k for k in key) in self._coefficients:
                continue
            if first < 0:
                key, value = tuple(-k for k in key), value.conjugate()
            phase = add(*[mul(const(k), manifold.coordinate(self._angles[pos]))
                          for pos, k in enumerate(key) if k != 0])
            terms.append(add(mul(const(2.0 * value.real), cos(phase)),
                             mul(const(-2.0 * value.imag), sin(phase))))
        return add(*terms) if terms else ZERO


    def __str__(self):
        return "TrigPoly(%d modes, degree %d)" % (len(self._coefficients), self._degree)


    def to_json(self):
        return {"angles": list(self._angles), "degree": self._degree,
                "coefficients": {",".join(str(k) for k in key): [value.real, value.imag]
                                 for key, value in sorted(self._coefficients.items())}}


################################################################################
# Result objects
################################################################################
class Obstructed():
    """
    A consistency relation failed: `projection` is the part of the source
    the operator cannot reach
    """

    obstructed = True

    def __init__(self, reason, projection):
        self._reason = reason
        self._projection = projection


    @property
    def reason(self):
        '''
        Getter function for self._reason
        '''
        return self._reason


    @property
    def projection(self):
        '''
        Getter function for self._projection
        '''
        return self._projection


    def __str__(self):
        return "Obstructed: %s" % self._reason


    def to_json(self):
        return {"obstructed": True, "reason": self._reason, "projection": self._projection}


class NotInRange():
    """
    _{sign}psi_theta(f) is nonzero, so f is not D_beta of a compactly
    supported function
    """

    obstructed = True

    def __init__(self, theta, sign, value):
        self._theta = float(theta)
        self._sign = int(sign)
        self._value = float(value)


    @property
    def theta(self):
        '''
        Getter function for self._theta
        '''
        return self._theta


    @property
    def sign(self):
        '''
        Getter function for self._sign
        '''
        return self._sign


    @property
    def value(self):
        '''
        Getter function for self._value
        '''
        return self._value


    def __str__(self):
        return "NotInRange: psi(x=%+d, theta=%.6g) = %.6g" % (self._sign, self._theta, self._value)


    def to_json(self):
        return {"obstructed": True, "witnessTheta": self._theta, "witnessSign": self._sign,
                "psi": self._value}


class CohomCoords():
    """
    Coordinates of a class [X] in H^1_Pi for one catalog example
    """

    def __init__(self, example, values, notes=None):
        self._example = example
        self._values = dict(values)
        self._notes = list(notes or [])


    @property
    def example(self):
        '''
        Getter function for self._example
        '''
        return self._example


    @property
    def values(self):
        '''
        Getter function for self._values
        '''
        return dict(self._values)


    @property
    def notes(self):
        '''
        Getter function for self._notes
        '''
        return self._notes


    def __getitem__(self, key):
        return self._values[key]


    def as_tuple(self):
        return tuple(self._values.values())


    def is_zero(self, tolerance=1e-8):
        for value in self._values.values():
            if isinstance(value, TrigPoly):
                if not value.is_zero(tolerance):
                    return False
            elif abs(value) > tolerance:
                return False
        return True


    def __str__(self):
        return "%s%s" % (self._example, tuple(self._values.values()))


    def to_json(self):
        return {"example": self._example, "coords": self._values, "notes": self._notes}


################################################################################
# Diophantine approximation
################################################################################
def best_rational_approx(c, n):
    """
    (p, q) with 1 <= q <= n minimizing |p - c q|, found by scanning the
    fractional parts {j c} for j <= n.  Dirichlet's pigeonhole argument
    guarantees |p - c q| <= 1/n.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    c = exact_constant(c)

    best = None
    with mpmath.workdps(EXTENDED_DPS):
        value = extended(c)
        for q in range(1, int(n) + 1):
            p = int(mpmath.nint(value * q))
            gap = abs(p - value * q)
            if best is None or gap < best[2]:
                best = (p, q, gap)

    p, q, gap = best
    logging.debug("Best approximation of %s with q <= %d: %d/%d (gap %s)", c, n, p, q,
                  mpmath.nstr(gap, 6))
    return p, q


################################################################################
# 3-torus transport
################################################################################
def _divisor(c, key, mode):
    """
    (exact divisor, float value) of the Fourier multiplier for mode `key`
    """
    if mode == 'theta1':
        return sympy.Integer(key[0]), float(key[0])
    exact = sympy.Integer(key[1]) + c * sympy.Integer(key[2])
    with mpmath.workdps(EXTENDED_DPS):
        value = float(key[1] + extended(c) * key[2])
    return exact, value


def torus_solve_transport(c, tau, mode='leafwise'):
    """
    Solve d_theta1 g = tau (mode 'theta1') or (d_theta2 + c d_theta3) g = tau
    (mode 'leafwise') by Fourier division.  Returns the TrigPoly g with zero
    resonant part, or Obstructed when tau has resonant modes.
    """
    if mode not in ('theta1', 'leafwise'):
        raise ValueError("unknown transport mode '%s'" % mode)
    c = exact_constant(c)

    solved = {}
    resonant = {}
    for key, value in tau.coefficients.items():
        exact, divisor = _divisor(c, key, mode)
        if exact.is_zero:
            resonant[key] = value
            continue
        if abs(divisor) < DIVISOR_GUARD * (1 + sum(abs(k) for k in key)):
            logging.error("Divisor for mode %s is %g with c = %s", key, divisor, c)
            raise SmallDivisorGuard("mode %s has divisor %g" % (key, divisor))
        solved[key] = value / (1j * divisor)

    residue = TrigPoly(tau.angles, resonant, tau.degree)
    if residue.max_coefficient() > RESONANT_TOLERANCE:
        logging.info("Transport (%s) obstructed: resonant part with %d modes", mode, len(resonant))
        return Obstructed("%s consistency relation fails" % mode, residue)

    return TrigPoly(tau.angles, solved, tau.degree)


def transport_operator(c, g, mode):
    if mode == 'theta1':
        return g.derivative(0)
    return g.directional([0.0, 1.0, float(exact_constant(c))])


def transport_residual(c, g, tau, mode, manifold, size=RESIDUAL_GRID):
    """
    Sup norm of (operator g - tau) on a size^3 grid
    """
    return (transport_operator(c, g, mode) - tau).sup_norm(manifold, size)


def resonant_modes(c):
    """
    Predicate for the modes fixed by the leaf average P_c: k1 = 0 and
    k2 + c k3 = 0 exactly
    """
    c = exact_constant(c)

    def keep(key):
        return key[0] == 0 and (sympy.Integer(key[1]) + c * sympy.Integer(key[2])).is_zero

    return keep


class TorusDecomposition():
    """
    f = d_theta1 g1 + (d_theta2 + c d_theta3) g2 + remainder, the remainder
    being the leaf average of f (the mean when c is irrational)
    """

    def __init__(self, c, g1, g2, remainder):
        self._c = c
        self._g1 = g1
        self._g2 = g2
        self._remainder = remainder


    @property
    def g1(self):
        '''
        Getter function for self._g1
        '''
        return self._g1


    @property
    def g2(self):
        '''
        Getter function for self._g2
        '''
        return self._g2


    @property
    def remainder(self):
        '''
        Getter function for self._remainder
        '''
        return self._remainder


    def reconstruct(self):
        return transport_operator(self._c, self._g1, 'theta1') \
            + transport_operator(self._c, self._g2, 'leafwise') + self._remainder


    def to_json(self):
        return {"c": str(self._c), "g1": self._g1, "g2": self._g2, "remainder": self._remainder}


def torus_decompose(c, f):
    """
    Split a trigonometric polynomial on T^3 along the leafwise operators
    """
    c = exact_constant(c)
    keep = resonant_modes(c)
    transverse = f.project(lambda k: k[0] != 0)
    leafwise = f.project(lambda k: k[0] == 0 and not keep(k))
    remainder = f.project(keep)

    g1 = torus_solve_transport(c, transverse, 'theta1')
    g2 = torus_solve_transport(c, leafwise, 'leafwise')
    return TorusDecomposition(c, g1, g2, remainder)


def leaf_average(c, expr, point, manifold, panels=4, order=8):
    """
    P_c: average of expr over the closed leaf through `point` for rational
    c = p/q, parametrized by (theta1, theta2 + q u, theta3 + p u) with
    theta1, u in [0, 2 pi)
    """
    c = exact_constant(c)
    if not c.is_rational:
        raise ValueError("leaf averages need rational c, got %s" % c)
    p, q = int(c.p), int(c.q)

    nodes, weights = leggauss(order)
    count_u = panels * max(abs(p), q)
    count_t = panels

    def composite(count):
        edges = np.linspace(0.0, TWO_PI, count + 1)
        half = 0.5 * (edges[1] - edges[0])
        centers = 0.5 * (edges[:-1] + edges[1:])
        points = (centers[:, None] + half * nodes[None, :]).reshape(-1)
        mass = np.tile(weights * half, count)
        return points, mass

    u, u_weights = composite(count_u)
    t, t_weights = composite(count_t)
    grid_t, grid_u = np.meshgrid(t, u, indexing='ij')
    mass = np.outer(t_weights, u_weights).reshape(-1)

    point = np.asarray(point, dtype=float)
    samples = np.tile(point, (grid_t.size, 1))
    samples[:, 0] = grid_t.reshape(-1)
    samples[:, 1] = point[1] + q * grid_u.reshape(-1)
    samples[:, 2] = point[2] + p * grid_u.reshape(-1)
    return float(mass @ evaluate(expr, samples)) / (TWO_PI * TWO_PI)


def _torus_components(field, degree):
    manifold = field.manifold
    angles = (0, 1, 2)
    return [TrigPoly.from_expr(comp, manifold, angles, degree) for comp in field_components(field)]


def torus_class_coords(c, field, degree=DEFAULT_DEGREE):
    """
    Class of a Poisson field X = a d1 + b (d2 + c d3) + e d3 on
    (T^3, d1 ^ (d2 + c d3)): (t1, t2, t3) = leaf averages of (a, b, e).
    Scalars for irrational c, Casimir TrigPolys for rational c.  The
    difference X - representative is checked to be Hamiltonian.
    """
    c = exact_constant(c)
    manifold = field.manifold
    tau1, tau2, tau3 = _torus_components(field, degree)
    a, b = tau1, tau2
    e = tau3 - tau2.scale(float(c))

    keep = resonant_modes(c)
    poisson_defect = max(e.project(lambda k: not keep(k)).max_coefficient(),
                         (a.derivative(0) + b.directional([0.0, 1.0, float(c)])).max_coefficient())
    if poisson_defect > TRANSPORT_TOLERANCE:
        logging.error("Field is not Poisson for Pi_c (Fourier defect %g)", poisson_defect)
        raise NonPoissonInput("L_X Pi_c has Fourier defect %g" % poisson_defect)

    parts = [a.project(keep), b.project(keep), e.project(keep)]
    values = {}
    for name, part in zip(('t1', 't2', 't3'), parts):
        values[name] = part.mean() if part.is_constant() else part

    notes = []
    primitive = torus_hamiltonian(c, a - parts[0], b - parts[1])
    if isinstance(primitive, Obstructed):
        logging.error("X minus its representative is not Hamiltonian: %s", primitive.reason)
        raise NonPoissonInput(primitive.reason)
    residual = max((primitive.directional([0.0, 1.0, float(c)]) - (a - parts[0])).sup_norm(manifold),
                   (primitive.derivative(0) + (b - parts[1])).sup_norm(manifold))
    notes.append("hamiltonian residual %.3e" % residual)
    return CohomCoords('torus3', values, notes)


def torus_hamiltonian(c, a, b):
    """
    f with X_f = a d1 + b (d2 + c d3): (d2 + c d3) f = a and -d1 f = b
    """
    transverse = torus_solve_transport(c, -b, 'theta1')
    if isinstance(transverse, Obstructed):
        return transverse
    rest = (a - transport_operator(c, transverse, 'leafwise')).project(lambda k: k[0] == 0)
    leafwise = torus_solve_transport(c, rest, 'leafwise')
    if isinstance(leafwise, Obstructed):
        return leafwise
    return transverse + leafwise


################################################################################
# Spiral: the D_beta equation on the (x, theta) plane
################################################################################
def _radial_extent(f):
    """
    (inner, outer) radii of supp f on each side of x = 0; inner is 0 when the
    support touches the axis, None when that side is empty
    """
    box = support_box(f, 2, SPIRAL_PLANE.angle_mask)
    if box is None:
        return {1: None, -1: None}
    lo, hi = box[0]
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise ValueError("spiral integrands need compact support in x")
    extent = {}
    extent[1] = None if hi <= 0.0 else (max(lo, 0.0), hi)
    extent[-1] = None if lo >= 0.0 else (max(-hi, 0.0), -lo)
    return extent


def spiral_psi(x, theta, beta, f):
    """
    _x psi_theta(f) = int_R f(x e^u, theta + u) e^{beta u} du for a scalar
    or an array of theta values
    """
    if beta <= 0:
        raise ValueError("spiral_psi needs beta > 0")
    if x == 0.0:
        raise ValueError("spiral_psi is defined for x != 0")

    thetas = np.atleast_1d(np.asarray(theta, dtype=float))
    scalar = np.ndim(theta) == 0
    side = 1 if x > 0 else -1
    extent = _radial_extent(f)[side]
    if extent is None:
        return 0.0 if scalar else np.zeros(thetas.size)

    inner, outer = extent
    radius = abs(x)
    upper = math.log(outer / radius)
    if inner > 0.0:
        lower, tail = math.log(inner / radius), 0.0
    else:
        lower, tail = decay_bounds(beta, upper)

    def integrand(u):
        u = u[:, 0]
        points = np.empty((u.size * thetas.size, 2))
        points[:, 0] = np.repeat(x * np.exp(u), thetas.size)
        points[:, 1] = (u[:, None] + thetas[None, :]).reshape(-1)
        values = evaluate(f, points).reshape(u.size, thetas.size)
        return values * np.exp(beta * u)[:, None]

    result = integrate_box(integrand, [lower], [upper], rel_tol=SOLVE_REL_TOL,
                           abs_tol=SOLVE_ABS_TOL)
    if tail:
        logging.debug("spiral_psi tail bound %g", tail)
    values = result.value
    return float(values[0]) if scalar else values


def d_beta_expr(beta, g):
    """
    D_beta g = x g_x + g_theta + beta g on the (x, theta) plane
    """
    x = SPIRAL_PLANE.coordinate('x')
    return add(mul(x, derive(g, 0)), derive(g, 1), mul(const(beta), g))


class SpiralSolution():
    """
    g(x, theta) = int_{-inf}^0 f(x e^v, theta + v) e^{beta v} dv, evaluated
    on demand
    """

    def __init__(self, beta, f):
        self._beta = float(beta)
        self._f = f
        self._extent = _radial_extent(f)


    @property
    def beta(self):
        '''
        Getter function for self._beta
        '''
        return self._beta


    @property
    def source(self):
        '''
        Getter function for self._f
        '''
        return self._f


    def outer_radius(self):
        return max([e[1] for e in self._extent.values() if e is not None] or [0.0])


    def __call__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.outer_radius() == 0.0:
            return np.zeros(points.shape[0])

        lower, _ = decay_bounds(self._beta, 0.0, 1e-13)
        inners = [e[0] for e in self._extent.values() if e is not None]
        largest = float(np.max(np.abs(points[:, 0])))
        if min(inners) > 0.0 and largest > 0.0:
            lower = max(lower, math.log(min(inners) / largest))
        if lower >= 0.0:
            return np.zeros(points.shape[0])

        count = points.shape[0]

        def integrand(v):
            v = v[:, 0]
            moved = np.empty((v.size * count, 2))
            moved[:, 0] = (np.exp(v)[:, None] * points[None, :, 0]).reshape(-1)
            moved[:, 1] = (v[:, None] + points[None, :, 1]).reshape(-1)
            values = evaluate(self._f, moved).reshape(v.size, count)
            return values * np.exp(self._beta * v)[:, None]

        return integrate_box(integrand, [lower], [0.0], rel_tol=SOLVE_REL_TOL,
                             abs_tol=SOLVE_ABS_TOL).value


    def residual(self, points, step=5e-3):
        """
        sup |D_beta g - f| at points; the flow derivative x g_x + g_theta is a
        fourth-order central difference along (x e^s, theta + s)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))

        def shifted(s):
            moved = points.copy()
            moved[:, 0] *= math.exp(s)
            moved[:, 1] += s
            return self(moved)

        flow_derivative = (-shifted(2 * step) + 8 * shifted(step) - 8 * shifted(-step)
                           + shifted(-2 * step)) / (12 * step)
        value = flow_derivative + self._beta * self(points) - evaluate(self._f, points)
        return float(np.max(np.abs(value)))


    def support_residual(self, thetas=THETA_GRID):
        """
        sup |g| just outside the radial extent of supp f
        """
        radius = 1.5 * self.outer_radius()
        if radius == 0.0:
            return 0.0
        angles = TWO_PI * np.arange(thetas) / thetas
        points = np.array([(sign * radius, t) for sign in (1, -1) for t in angles])
        return float(np.max(np.abs(self(points))))


    def to_json(self):
        return {"beta": self._beta, "outerRadius": self.outer_radius()}


def spiral_solve_Dbeta(beta, f):
    """
    Solve D_beta g = f with g compactly supported, or return NotInRange with
    a witness angle where _{+-1}psi_theta(f) does not vanish
    """
    if beta <= 0:
        raise ValueError("spiral_solve_Dbeta needs beta > 0")
    thetas = TWO_PI * np.arange(THETA_GRID) / THETA_GRID

    for sign in (1, -1):
        values = spiral_psi(float(sign), thetas, beta, f)
        worst = int(np.argmax(np.abs(values)))
        if abs(values[worst]) > RANGE_TOLERANCE:
            logging.info("f is not in the range of D_beta: psi(%+d, %.4f) = %g",
                         sign, thetas[worst], values[worst])
            return NotInRange(thetas[worst], sign, values[worst])

    return SpiralSolution(beta, f)


################################################################################
# Class coordinates
################################################################################
def _require_poisson(poisson, field, points):
    defect = lie_derivative(field, poisson.pi).max_abs(points)
    if defect > IDENTITY_TOLERANCE:
        logging.error("Field is not Poisson (|L_X Pi| = %g)", defect)
        raise NonPoissonInput("|L_X Pi| = %g" % defect)


def _circle_points(manifold, fixed, angle, count=CIRCLE_NODES):
    points = np.zeros((count, manifold.dim))
    for index, value in fixed.items():
        points[:, index] = value
    points[:, angle] = TWO_PI * np.arange(count) / count
    return points


def circle_average(expr, manifold, fixed, angle, count=CIRCLE_NODES):
    """
    Mean of expr over one angle coordinate with the coordinates in `fixed`
    (name -> value) held; unnamed coordinates sit at 0
    """
    fixed = {manifold.index(name): value for name, value in fixed.items()}
    points = _circle_points(manifold, fixed, manifold.index(angle), count)
    return float(np.mean(evaluate(expr, points)))


def spiral_class_coords(poisson, field, y_values=(0.0, 0.7)):
    """
    (A, B) for a Poisson field on (x, theta, y) with Pi = (x d_x + d_theta) ^ d_y:
    A = X^theta - d_x X^x on {x = 0}, B = the circle average of X^y on {x = 0}
    """
    manifold = poisson.manifold
    _require_poisson(poisson, field, sample_points(manifold))
    x_i, theta_i, y_i = (manifold.index(n) for n in ('x', 'theta', 'y'))
    comps = field_components(field)
    a_expr = add(comps[theta_i], mul(const(-1.0), derive(comps[x_i], x_i)))

    a_values, b_values = [], []
    for y in y_values:
        points = _circle_points(manifold, {x_i: 0.0, y_i: y}, theta_i)
        a_values.append(evaluate(a_expr, points))
        b_values.append(float(np.mean(evaluate(comps[y_i], points))))

    a_values = np.concatenate(a_values)
    if float(np.ptp(a_values)) > 1e-8 or float(np.ptp(b_values)) > 1e-8:
        raise NonPoissonInput("spiral class coordinates vary on {x = 0}")
    return CohomCoords('spiral', {"A": float(np.mean(a_values)), "B": float(np.mean(b_values))})


def psi_zero(manifold, angle='theta'):
    """
    (1 + cos theta)/2, equal to 1 at theta = 0 and 0 at pi
    """
    return mul(const(0.5), add(ONE, cos(manifold.coordinate(angle))))


def psi_pi(manifold, angle='theta'):
    """
    (1 - cos theta)/2, equal to 1 at theta = pi and 0 at 0
    """
    return mul(const(0.5), add(ONE, mul(const(-1.0), cos(manifold.coordinate(angle)))))


def btorus_class_coords(poisson, field, y_values=(-1.0, 0.0, 1.3)):
    """
    (b0, bpi, c) for X = a d_theta + b d_y on (T x R, sin(theta) d_theta ^ d_y):
    b0 = b(0, y), bpi = b(pi, y), and c the circle average of
    -(b - b0 psi0 - bpi psipi)/sin(theta)
    """
    manifold = poisson.manifold
    _require_poisson(poisson, field, sample_points(manifold))
    theta_i, y_i = manifold.index('theta'), manifold.index('y')
    b = field_components(field)[y_i]

    boundary = {}
    for label, angle in (('b0', 0.0), ('bpi', math.pi)):
        points = np.zeros((len(y_values), manifold.dim))
        points[:, theta_i] = angle
        points[:, y_i] = y_values
        values = evaluate(b, points)
        if float(np.ptp(values)) > IDENTITY_TOLERANCE:
            logging.error("b(%g, y) varies by %g", angle, float(np.ptp(values)))
            raise NonConstantBoundary("b(%s, y) is not constant" % label)
        boundary[label] = float(values[0])

    reduced = add(b, mul(const(-boundary['b0']), psi_zero(manifold)),
                  mul(const(-boundary['bpi']), psi_pi(manifold)))
    sine = sin(manifold.coordinate('theta'))

    def integrand(theta):
        points = np.zeros((theta.shape[0], manifold.dim))
        points[:, theta_i] = theta[:, 0]
        points[:, y_i] = y_values[0]
        return -evaluate(reduced, points) / evaluate(sine, points)

    # Gauss nodes never hit the removable zeros at 0 and pi
    total = integrate_box(integrand, [0.0], [math.pi]).value + \
        integrate_box(integrand, [math.pi], [TWO_PI]).value
    c_value = total.item() / TWO_PI
    return CohomCoords('btorus', {"b0": boundary['b0'], "bpi": boundary['bpi'], "c": c_value})


################################################################################
# Hamiltonian solve on the complement of Z
################################################################################
def _vanishing_order(expr, index, dim, root, limit=8):
    func = expr
    for order in range(limit + 1):
        if abs(float(line_function(func, index, dim)(root)[0])) > 1e-10:
            return order, func
        func = derive(func, index)
    raise ValueError("%s vanishes to order above %d at %g" % (expr, limit, root))


def log_residue(pi_coefficient, transverse, index, dim, root):
    """
    For Pi = pi(s) d_s ^ d_u and X = b(s) d_u, X = X_H off {pi = 0} with
    H_s = -b/pi.  Near a zero r of pi of order m, H ~ -a log|s - r| where
    a = [b^(m-1)(r)/(m-1)!] / [pi^(m)(r)/m!].  Returns (a, m); the leaf
    density e^{-beta H}/|pi| then behaves like |s - r|^(beta a - m).
    """
    order, top = _vanishing_order(pi_coefficient, index, dim, root)
    if order == 0:
        raise ValueError("pi does not vanish at %g" % root)
    numerator = transverse
    for _ in range(order - 1):
        numerator = derive(numerator, index)
    lower = transverse
    for k in range(order - 1):
        if abs(float(line_function(lower, index, dim)(root)[0])) > 1e-10:
            raise ValueError("H has a pole of order %d at %g, not a logarithm" % (order - 1 - k, root))
        lower = derive(lower, index)

    b_value = float(line_function(numerator, index, dim)(root)[0]) / math.factorial(order - 1)
    pi_value = float(line_function(top, index, dim)(root)[0]) / math.factorial(order)
    return snap_zero(b_value / pi_value), order


def snap_zero(value, tolerance=RESIDUE_SNAP):
    """
    0.0 for |value| < tolerance (negative zero included), value otherwise
    """
    return 0.0 if abs(value) < tolerance else float(value)


def hamiltonian_residual(poisson, hamiltonian, field, points):
    """
    Sampled sup |X_H - X| on points off Z
    """
    difference = poisson.hamiltonian_field(hamiltonian) - field
    return max(sampled_sup(comp, points) for comp in field_components(difference))

