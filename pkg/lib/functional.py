#!/usr/bin/env python3
'''
        FILE:  functional.py
 DESCRIPTION:  Positive linear functionals on test functions (densities with
               singular factors, leaf pushforwards, atomic mixtures) and the
               KMS checks run against them: the infinitesimal KMS residual,
               flow invariance, the global KMS identity, the integrability
               scan and the positive-extension divergence probe.

        BUGS:
       NOTES:  The KMS condition checked here is
                   phi({f,g}) = beta * phi(g X(f))
               for every pair of compactly supported test functions.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-08
    REVISION:  2021-06-24

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import math
import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from lib.calculus import TWO_PI, ManifoldSpec, apply_field
from lib.exceptions import NonIntegrable, QuadratureNotConverged
from lib.expressions import (ONE, TestFunction, add, as_expr, box_hull, box_intersect, const,
                             evaluate, evaluate_many, exp, free_coords, mul, power, support_box, sin)
from lib.flows import Flow, flowed_box, line_integral
from lib.kms_reports import KmsReport
from lib.quadrature import (QUAD_REL_TOL, QuadResult, SingularFactor, integrate_box, integrate_pieces,
                            split_segments)
from lib.utils import get_thread_count

KMS_TOLERANCE = 1e-6
DEFAULT_PAIRS = 20
DEFAULT_SEED = 0

# weights below this are dropped from generator mixtures
WEIGHT_CUTOFF = 1e-12

PROBE_WINDOW = (8, 14)
PROBE_REL_TOL = 1e-11
GROWTH_SLOPE_MIN = 0.05
BOUNDED_DIFFERENCE = 1e-9

POSITIVITY_SAMPLES = 400
TAIL_SAMPLES = 256


################################################################################
# Integrands
################################################################################
class Integrand():
    """
    A function to be paired with a functional: an Expr, or a numeric callable
    on (N, dim) points together with an explicit bounding box.  Expressions
    must be periodic in the angle coordinates unless flagged multivalued.
    """

    def __init__(self, manifold, expr=None, func=None, box=None, multivalued=False):
        if (expr is None) == (func is None):
            raise ValueError("an integrand needs exactly one of expr or func")
        self._manifold = manifold
        self._expr = None if expr is None else as_expr(expr)
        if self._expr is not None and not multivalued:
            manifold.require_periodic(self._expr, "integrand %s" % self._expr)
        self._func = func
        if self._expr is not None and box is None:
            box = support_box(self._expr, manifold.dim, manifold.angle_mask)
        self._box = None if box is None else normalize_box(box, manifold)


    @property
    def box(self):
        '''
        Getter function for self._box
        '''
        return self._box


    @property
    def expr(self):
        '''
        Getter function for self._expr
        '''
        return self._expr


    def evaluate(self, points):
        if self._expr is not None:
            return evaluate(self._expr, points)
        return np.asarray(self._func(points), dtype=float)


def normalize_box(box, manifold):
    out = []
    for i, (lo, hi) in enumerate(box):
        if manifold.is_angle(i) and hi - lo >= TWO_PI:
            lo, hi = 0.0, TWO_PI
        out.append((float(lo), float(hi)))
    return out


def as_integrand(manifold, item):
    if isinstance(item, Integrand):
        return item
    return Integrand(manifold, expr=item)


def _zero_result(channels):
    return QuadResult(np.zeros(channels), np.zeros(channels))


def _sum_parts(parts, func, box, quad, total=None):
    """
    sum_i w_i phi_i over (functional, w) parts.  Parts that run out of cells
    still contribute their partial estimate; the first failure is re-raised
    with the summed partial once every part has been tried.
    """
    failure = None
    for functional, w in parts:
        try:
            result = functional._integrate(func, box, quad)
        except QuadratureNotConverged as err:
            if err.partial is None:
                raise err
            failure = failure or err
            result = err.partial
        total = result.scaled(w) + total
    if failure is not None:
        raise QuadratureNotConverged(str(failure), total)
    return total


################################################################################
# Functionals
################################################################################
class Functional():
    """
    Base class.  Subclasses implement _integrate(func, box, quad) where func maps
    (N, dim) points to (N, k) channel values and box bounds their support.
    """

    variant = 'functional'

    def __init__(self, manifold, label=None):
        self._manifold = manifold
        self._label = label or self.variant


    @property
    def manifold(self):
        '''
        Getter function for self._manifold
        '''
        return self._manifold


    @property
    def label(self):
        '''
        Getter function for self._label
        '''
        return self._label


    def _integrate(self, func, box, quad):
        raise NotImplementedError


    def integrate(self, integrands, with_abs=True, rel_tol=QUAD_REL_TOL, allow_partial=False):
        """
        Pair several integrands at once.  Returns (values, abs_values, errors);
        abs_values are phi(|h|), the scale used to normalize residuals.  Only
        the signed channels steer the quadrature.  With allow_partial a
        quadrature that runs out of cells returns its last estimate, whose
        error bound then reflects the shortfall.
        """
        integrands = [as_integrand(self._manifold, item) for item in integrands]
        count = len(integrands)
        boxes = [item.box for item in integrands if item.box is not None]
        if not boxes:
            return np.zeros(count), np.zeros(count), np.zeros(count)

        box = boxes[0]
        for other in boxes[1:]:
            box = box_hull(box, other, self._manifold.angle_mask)
        box = normalize_box(box, self._manifold)

        for i, (lo, hi) in enumerate(box):
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("integrand support is unbounded in %s"
                                 % self._manifold.coord_names[i])

        exprs = [item.expr for item in integrands]
        shared = all(expr is not None for expr in exprs)

        def channels(points):
            if shared:
                values = evaluate_many(exprs, points)
            else:
                values = np.stack([item.evaluate(points) for item in integrands], axis=1)
            if with_abs:
                return np.hstack([values, np.abs(values)])
            return values

        quad = {"rel_tol": rel_tol, "controlled": count}
        try:
            result = self._integrate(channels, box, quad)
        except QuadratureNotConverged as err:
            if not allow_partial or err.partial is None:
                raise err
            logging.warning("Pairing with %s kept a partial quadrature: %s", self._label, str(err))
            result = err.partial
        values = result.value[:count]
        abs_values = result.value[count:] if with_abs else np.abs(values)
        return values, abs_values, result.error[:count]


    def pair(self, item):
        """
        (phi(h), quadrature error estimate)
        """
        values, _, errors = self.integrate([item], with_abs=False)
        return float(values[0]), float(errors[0])


    def pair_many(self, items):
        values, _, errors = self.integrate(items, with_abs=False)
        return values, errors


    def weighted(self, factor):
        """
        The functional h -> phi(factor * h)
        """
        return Reweighted(self, factor)


    def to_json(self):
        return {"variant": self.variant, "label": self._label,
                "manifold": self._manifold.coord_names}


class RegularDensity(Functional):
    """
    h -> int h * base * prod |F_i|^p_i  over the region where every region
    function has its prescribed sign.  Singular factors and region functions
    depend on one coordinate each.  angle_windows restrict an angle
    coordinate to an interval (a lifted density on a slit torus).
    """

    variant = 'density'

    def __init__(self, manifold, base=ONE, singular_factors=(), region=(), angle_windows=None,
                 label=None):
        super().__init__(manifold, label)
        self._base = as_expr(base)
        self._factor_terms = [(as_expr(zeta), float(p)) for zeta, p in singular_factors]
        self._factors = [SingularFactor(zeta, p, manifold.dim) for zeta, p in self._factor_terms]
        self._region = []
        for expr, sign in region:
            expr = as_expr(expr)
            coords = free_coords(expr)
            if len(coords) != 1:
                raise ValueError("region function %s must depend on exactly one coordinate" % expr)
            self._region.append((expr, coords.pop(), 1.0 if sign > 0 else -1.0))
        self._angle_windows = {}
        for name, window in (angle_windows or {}).items():
            index = manifold.index(name)
            if not manifold.is_angle(index):
                raise ValueError("angle window on linear coordinate %s" % name)
            self._angle_windows[index] = (float(window[0]), float(window[1]))
        if not self._angle_windows:
            # densities without windows live on the whole torus of angles
            manifold.require_periodic(self._base, "density base %s" % self._base)
            for zeta, _ in self._factor_terms:
                manifold.require_periodic(zeta, "singular factor %s" % zeta)


    @property
    def base(self):
        '''
        Getter function for self._base
        '''
        return self._base


    @property
    def factors(self):
        '''
        Getter function for self._factors
        '''
        return self._factors


    @property
    def region(self):
        return [(expr, sign) for expr, _, sign in self._region]


    def weighted(self, factor):
        return RegularDensity(self._manifold, mul(self._base, factor), self._factor_terms,
                              self.region, self._window_names(), self._label)


    def _window_names(self):
        names = self._manifold.coord_names
        return {names[i]: window for i, window in self._angle_windows.items()}


    def _intervals(self, index, lo, hi):
        if index not in self._angle_windows:
            return [(lo, hi)]
        w_lo, w_hi = self._angle_windows[index]
        pieces = []
        for turns in range(-2, 3):
            a, b = lo + turns * TWO_PI, hi + turns * TWO_PI
            a, b = max(a, w_lo), min(b, w_hi)
            if b > a:
                pieces.append((a, b))
        return pieces


    def _in_region(self, index, segment):
        middle = np.zeros((1, self._manifold.dim))
        middle[0, index] = 0.5 * (segment.lower + segment.upper)
        for expr, axis, sign in self._region:
            if axis == index and sign * evaluate(expr, middle)[0] <= 0.0:
                return False
        return True


    def _axes(self, box):
        dim = self._manifold.dim
        axes = []
        for index, (lo, hi) in enumerate(box):
            factors = [f for f in self._factors if f.index == index]
            region_functions = [(expr, axis, dim) for expr, axis, _ in self._region if axis == index]
            segments = []
            for a, b in self._intervals(index, lo, hi):
                segments += split_segments(a, b, factors, region_functions)
            segments = [s for s in segments if self._in_region(index, s)]
            if not segments:
                return None
            axes.append(segments)
        return axes


    def _integrate(self, func, box, quad):
        own = support_box(self._base, self._manifold.dim, self._manifold.angle_mask)
        box = None if own is None else box_intersect(box, own, self._manifold.angle_mask)
        if box is None:
            channels = np.asarray(func(np.zeros((1, self._manifold.dim)))).shape[1]
            return _zero_result(channels)

        axes = self._axes(box)
        if axes is None:
            channels = np.asarray(func(np.zeros((1, self._manifold.dim)))).shape[1]
            return _zero_result(channels)

        def integrand(points, segments):
            weight = evaluate(self._base, points)
            for factor in self._factors:
                if factor.index is None:
                    weight = weight * factor.weight(points)
                    continue
                segment = segments[factor.index]
                if segment.substituted and factor in segment.factors:
                    weight = weight * factor.regularized_weight(points, segment.root)
                else:
                    weight = weight * factor.weight(points)
            return func(points) * weight[:, None]

        return integrate_pieces(integrand, axes, **quad)


    def density_values(self, points):
        weight = evaluate(self._base, points)
        for factor in self._factors:
            weight = weight * factor.weight(points)
        return weight


    def check_positive(self, count=POSITIVITY_SAMPLES, seed=DEFAULT_SEED):
        """
        Sampled check that the density is non-negative on its region
        """
        points = self._manifold.sample(np.random.default_rng(seed), count)
        keep = np.ones(count, dtype=bool)
        for expr, _, sign in self._region:
            keep &= sign * evaluate(expr, points) > 0.0
        for factor in self._factors:
            if factor.index is not None:
                keep &= np.abs(evaluate(factor.zeta, points)) > 1e-8
        if not np.any(keep):
            return True
        lowest = float(np.min(self.density_values(points[keep])))
        if lowest < 0.0:
            logging.warning("Density %s takes the negative value %g", self._label, lowest)
        return lowest >= 0.0


    def to_json(self):
        data = super().to_json()
        data.update({"base": str(self._base),
                     "singularFactors": [[str(zeta), p] for zeta, p in self._factor_terms],
                     "region": [[str(expr), sign] for expr, _, sign in self._region],
                     "angleWindows": self._window_names()})
        return data


class LeafPushforward(Functional):
    """
    h -> int h(Phi(u)) w(u) du for a parametrization Phi of a leaf (or a
    family of leaves) by a parameter space.  Parameter bounds come from the
    `bounds` hook when given, else from parameter coordinates that appear
    unchanged as components of Phi, else a full turn for angles.
    """

    variant = 'leaf'

    def __init__(self, manifold, params, parametrization, weight=ONE, bounds=None, label=None):
        super().__init__(manifold, label)
        if len(parametrization) != manifold.dim:
            raise ValueError("a leaf parametrization needs %d components" % manifold.dim)
        self._params = params
        self._parametrization = [as_expr(c) for c in parametrization]
        self._weight = as_expr(weight)
        self._bounds = bounds


    @property
    def params(self):
        '''
        Getter function for self._params
        '''
        return self._params


    @property
    def parametrization(self):
        '''
        Getter function for self._parametrization
        '''
        return self._parametrization


    def _parameter_box(self, box):
        if self._bounds is not None:
            return self._bounds(box)

        lower, upper = [], []
        for i in range(self._params.dim):
            param = self._params.coordinate(i)
            image = [j for j, comp in enumerate(self._parametrization) if comp is param]
            if image:
                lo, hi = box[image[0]]
            elif self._params.is_angle(i):
                lo, hi = 0.0, TWO_PI
            else:
                raise ValueError("no bound for leaf parameter %s" % self._params.coord_names[i])
            lower.append(lo)
            upper.append(hi)
        return np.array(lower), np.array(upper), 0.0


    def embed(self, params):
        return np.stack([evaluate(comp, params) for comp in self._parametrization], axis=1)


    def _integrate(self, func, box, quad):
        lower, upper, tail = self._parameter_box(box)

        def integrand(params):
            return func(self.embed(params)) * evaluate(self._weight, params)[:, None]

        result = integrate_box(integrand, lower, upper, **quad)
        if tail:
            rng = np.random.default_rng(DEFAULT_SEED)
            samples = np.column_stack([rng.uniform(lo, hi, TAIL_SAMPLES) for lo, hi in box])
            sup = np.max(np.abs(func(samples)), axis=0)
            result = QuadResult(result.value, result.error + tail * sup, result.cells)
        return result


    def to_json(self):
        data = super().to_json()
        data.update({"parameters": self._params.coord_names,
                     "parametrization": [str(c) for c in self._parametrization],
                     "weight": str(self._weight)})
        return data


def decay_bounds(rate, upper, tolerance=1e-12):
    """
    Truncation of int_{-inf}^{upper} e^{rate u} du: (lower bound, dropped mass)
    """
    if rate <= 0:
        raise ValueError("decay rate must be positive")
    lower = upper + math.log(tolerance) / rate
    return lower, math.exp(rate * lower) / rate


class AtomicMixture(Functional):
    """
    Finite sums of point masses and weighted curve functionals
    """

    variant = 'atomic'

    def __init__(self, manifold, atoms=(), curves=(), label=None):
        super().__init__(manifold, label)
        self._atoms = [(np.asarray(point, dtype=float), float(w)) for point, w in atoms
                       if abs(w) > WEIGHT_CUTOFF]
        self._curves = [(functional, float(w)) for functional, w in curves if abs(w) > WEIGHT_CUTOFF]


    @property
    def atoms(self):
        '''
        Getter function for self._atoms
        '''
        return self._atoms


    def _integrate(self, func, box, quad):
        total = None
        if self._atoms:
            points = np.stack([point for point, _ in self._atoms])
            weights = np.array([w for _, w in self._atoms])
            values = np.asarray(func(points), dtype=float)
            total = QuadResult(weights @ values, np.zeros(values.shape[1]))
        total = _sum_parts(self._curves, func, box, quad, total)
        if total is None:
            channels = np.asarray(func(np.zeros((1, self._manifold.dim)))).shape[1]
            return _zero_result(channels)
        return total


    def to_json(self):
        data = super().to_json()
        data.update({"atoms": [[point, w] for point, w in self._atoms],
                     "curves": [[functional.to_json(), w] for functional, w in self._curves]})
        return data


class SumFunctional(Functional):
    """
    sum_i c_i phi_i
    """

    variant = 'sum'

    def __init__(self, parts, label=None):
        parts = [(functional, float(w)) for functional, w in parts if abs(w) > WEIGHT_CUTOFF]
        if not parts:
            raise ValueError("a sum functional needs at least one part")
        super().__init__(parts[0][0].manifold, label)
        self._parts = parts


    @property
    def parts(self):
        '''
        Getter function for self._parts
        '''
        return self._parts


    def _integrate(self, func, box, quad):
        return _sum_parts(self._parts, func, box, quad)


    def to_json(self):
        data = super().to_json()
        data["parts"] = [[functional.to_json(), w] for functional, w in self._parts]
        return data


class Reweighted(Functional):

    variant = 'reweighted'

    def __init__(self, inner, factor, label=None):
        super().__init__(inner.manifold, label or inner.label)
        self._inner = inner
        self._factor = as_expr(factor)


    def _integrate(self, func, box, quad):
        def weighted(points):
            return func(points) * evaluate(self._factor, points)[:, None]
        return self._inner._integrate(weighted, box, quad)


    def to_json(self):
        data = super().to_json()
        data.update({"inner": self._inner.to_json(), "factor": str(self._factor)})
        return data


def gibbs_density(manifold, hamiltonian, beta, label='gibbs'):
    """
    e^{-beta H} times Lebesgue measure
    """
    return RegularDensity(manifold, exp(mul(const(-beta), hamiltonian)), label=label)


def perturb(functional, potential, beta):
    """
    phi -> phi(e^{beta lambda} .), the functional for X - X_lambda
    """
    potential = as_expr(potential)
    if potential.is_zero():
        return functional
    return functional.weighted(exp(mul(const(beta), potential)))


################################################################################
# Test pairs
################################################################################
class TestPairFamily():
    """
    Seeded random pairs (f, g) of compactly supported test functions with
    overlapping supports.  Each test function is a bump (or plateau) times a
    low-degree modulation so the pairs are not symmetric.
    """

    __test__ = False

    def __init__(self, manifold, count=DEFAULT_PAIRS, seed=DEFAULT_SEED, window=None,
                 radius_range=(0.3, 0.9), kind='bump'):
        self._manifold = manifold
        self._count = int(count)
        self._seed = seed
        self._kind = kind
        self._radius_range = radius_range
        self._window = []
        window = window or {}
        for i, name in enumerate(manifold.coord_names):
            default = (0.0, TWO_PI) if manifold.is_angle(i) else (-1.5, 1.5)
            self._window.append(tuple(float(v) for v in window.get(name, default)))
        self._pairs = self._build()


    @property
    def pairs(self):
        '''
        Getter function for self._pairs
        '''
        return self._pairs


    @property
    def seed(self):
        '''
        Getter function for self._seed
        '''
        return self._seed


    def __len__(self):
        return len(self._pairs)


    def _modulation(self, rng, center):
        terms = [ONE]
        for i, c in enumerate(center):
            coefficient = float(rng.uniform(-0.5, 0.5))
            x_i = self._manifold.coordinate(i)
            if self._manifold.is_angle(i):
                terms.append(mul(const(coefficient), sin(x_i)))
            else:
                terms.append(mul(const(coefficient), add(x_i, const(-c))))
        return add(*terms)


    def _test_function(self, rng, center):
        radii = []
        for i in range(self._manifold.dim):
            if self._manifold.is_angle(i):
                radii.append(float(rng.uniform(0.5, 1.5)))
            else:
                radii.append(float(rng.uniform(*self._radius_range)))
        shape = TestFunction(self._manifold, center, radii, self._kind)
        return mul(shape.expr, self._modulation(rng, center)), np.array(radii)


    def _build(self):
        rng = np.random.default_rng(self._seed)
        pairs = []
        for _ in range(self._count):
            center_f = np.array([rng.uniform(lo, hi) for lo, hi in self._window])
            f, radii_f = self._test_function(rng, center_f)
            center_g = center_f + rng.uniform(-0.5, 0.5, self._manifold.dim) * radii_f
            g, _ = self._test_function(rng, center_g)
            pairs.append((f, g))
        return pairs


    def to_json(self):
        return {"seed": self._seed, "count": self._count, "kind": self._kind,
                "window": self._window}


################################################################################
# KMS checks
################################################################################
def _normalized(lhs, rhs, scale_terms, error):
    scale = max(abs(lhs), abs(rhs), *scale_terms, 1e-30)
    return abs(lhs - rhs) / scale, error / scale, scale


def kms_residual(functional, poisson, field, beta, pairs, tolerance=KMS_TOLERANCE, label=None):
    """
    Normalized residual |phi({f,g}) - beta phi(g X(f))| per test pair,
    collected into a KmsReport
    """
    label = label or functional.label
    # a pass needs quad_err <= tolerance/10 with both abs channels inside the scale
    rel_tol = tolerance * min(1.0, beta) / (20.0 * (1.0 + beta))

    def one(pair):
        f, g = pair
        lhs_expr = poisson.bracket(f, g)
        rhs_expr = mul(g, apply_field(field, f))
        values, abs_values, errors = functional.integrate([lhs_expr, rhs_expr], rel_tol=rel_tol,
                                                          allow_partial=True)
        lhs = float(values[0])
        rhs = beta * float(values[1])
        residual, quad_err, scale = _normalized(lhs, rhs, (abs_values[0], beta * abs_values[1]),
                                                errors[0] + beta * errors[1])
        return {"lhs": lhs, "rhs": rhs, "residual": residual, "quad_err": quad_err, "scale": scale}

    try:
        with ThreadPoolExecutor(max_workers=get_thread_count()) as pool:
            rows = list(pool.map(one, pairs.pairs))
    except NonIntegrable as err:
        logging.error("Functional %s does not pair with the test functions", label)
        logging.error(str(err))
        raise err

    report = KmsReport(label, pairs.seed, tolerance)
    report.build_report(rows)
    return report


def _moved_integrand(manifold, flow_map, expr, t, box, weight=None):
    """
    p -> weight(p) * expr(Psi_t(p)), supported in Psi_{-t}(box)
    """
    moved_box = flowed_box(flow_map, -t, box, manifold)

    def func(points):
        values = evaluate(expr, flow_map(t, points, wrap=False))
        if weight is not None:
            values = values * weight(points)
        return values

    return Integrand(manifold, func=func, box=moved_box)


def flow_invariance_residual(functional, field, t_grid, f):
    """
    max_t |phi(f o Psi_t) - phi(f)| / scale along the flow of X
    """
    manifold = functional.manifold
    box = support_box(f, manifold.dim, manifold.angle_mask)
    flow_map = Flow(field)
    base, base_abs, _ = functional.integrate([f])

    worst = 0.0
    for t in t_grid:
        if t == 0.0:
            continue
        values, abs_values, _ = functional.integrate([_moved_integrand(manifold, flow_map, f, t, box)])
        residual, _, _ = _normalized(base[0], values[0], (base_abs[0], abs_values[0]), 0.0)
        logging.debug("Flow invariance at t=%g: %g", t, residual)
        worst = max(worst, residual)
    return worst


def global_kms_residual(functional, poisson, field, beta, g, t, f):
    """
    |phi(F) - phi(f)| / scale with
        F(p) = exp(beta int_0^t X(g)(Psi_s p) ds) f(Psi_t p)
    and Psi the Hamiltonian flow of g
    """
    if t == 0.0:
        return 0.0
    manifold = functional.manifold
    box = support_box(f, manifold.dim, manifold.angle_mask)
    flow_map = Flow(poisson.hamiltonian_field(g))
    xg = apply_field(field, g)

    def cocycle(points):
        return np.exp(beta * line_integral(flow_map, xg, t, points))

    moved = _moved_integrand(manifold, flow_map, f, t, box, weight=cocycle)
    values, abs_values, _ = functional.integrate([f, moved])
    residual, _, _ = _normalized(values[0], values[1], abs_values, 0.0)
    return residual


def window_mass(functional, center, radii):
    """
    phi of the plateau equal to 1 on the half-box around center
    """
    plateau = TestFunction(functional.manifold, center, radii, kind='plateau')
    return functional.pair(plateau.expr)[0]


################################################################################
# Integrability
################################################################################
class IntegrabilityScan():
    """
    Zeros of singular factors met inside a window with their effective
    exponents; divergent ones have exponent <= -1
    """

    def __init__(self, label):
        self._label = label
        self._checked = []
        self._divergences = []


    @property
    def divergences(self):
        '''
        Getter function for self._divergences
        '''
        return self._divergences


    @property
    def checked(self):
        '''
        Getter function for self._checked
        '''
        return self._checked


    @property
    def integrable(self):
        return not self._divergences


    def add(self, zeta, root, exponent):
        entry = (str(zeta), float(root), float(exponent))
        self._checked.append(entry)
        if exponent <= -1.0:
            self._divergences.append(entry)


    def to_json(self):
        return {"label": self._label, "integrable": self.integrable,
                "zeros": [{"zeta": z, "root": r, "exponent": q} for z, r, q in self._checked],
                "divergences": [{"zeta": z, "root": r, "exponent": q} for z, r, q in self._divergences]}


def integrability_scan(density, window=None):
    """
    Local integrability of a RegularDensity over a window (list of (lo, hi)
    per coordinate; default [-2, 2] for lines and a full turn for angles)
    """
    manifold = density.manifold
    if window is None:
        window = [(0.0, TWO_PI) if manifold.is_angle(i) else (-2.0, 2.0) for i in range(manifold.dim)]

    scan = IntegrabilityScan(density.label)
    for factor in density.factors:
        if factor.index is None:
            continue
        lo, hi = window[factor.index]
        # widen slightly so zeros on the window edge are found
        pad = 1e-6 * (hi - lo)
        for root in factor.roots(lo - pad, hi + pad):
            scan.add(factor.zeta, root, factor.effective_exponent(root))

    if not scan.integrable:
        logging.info("Density %s is not locally integrable: %s", density.label, scan.divergences)
    return scan


################################################################################
# Positive-extension divergence probe
################################################################################
class ProbeResult():
    """
    Growth of S_n = T((1 - g_n) psi_kappa) for the distribution
    T(f) = int f D |z|^-(1+beta') dz
    """

    tag = 'NoPositiveExtension'

    def __init__(self, beta_prime, kappa, n_values, sums, differences, exponent, growth):
        self._beta_prime = beta_prime
        self._kappa = kappa
        self._n_values = list(n_values)
        self._sums = list(sums)
        self._differences = list(differences)
        self._exponent = exponent
        self._growth = growth


    @property
    def beta_prime(self):
        '''
        Getter function for self._beta_prime
        '''
        return self._beta_prime


    @property
    def kappa(self):
        '''
        Getter function for self._kappa
        '''
        return self._kappa


    @property
    def sums(self):
        '''
        Getter function for self._sums
        '''
        return self._sums


    @property
    def differences(self):
        '''
        Getter function for self._differences
        '''
        return self._differences


    @property
    def exponent(self):
        '''
        Getter function for self._exponent
        '''
        return self._exponent


    @property
    def growth(self):
        '''
        Getter function for self._growth
        '''
        return self._growth


    @property
    def passed(self):
        # unbounded growth certifies that no positive extension exists
        return self._growth != 'bounded'


    def to_json(self):
        return {"tag": self.tag, "betaPrime": self._beta_prime, "kappa": self._kappa,
                "n": self._n_values, "sums": self._sums, "differences": self._differences,
                "exponent": self._exponent, "growth": self._growth, "passed": self.passed}


def _probe_sum(n, beta_prime, psi_kappa, manifold, sides):
    cutoff = TestFunction(manifold, [0.0], [2.0 ** -n], kind='plateau').expr
    lower = math.log(2.0 ** (-n - 1))
    total = 0.0
    for sign, weight in sides:
        if weight == 0.0:
            continue

        def integrand(s, sign=sign):
            s = s[:, 0]
            z = (sign * np.exp(s))[:, None]
            values = (1.0 - evaluate(cutoff, z)) * evaluate(psi_kappa, z)
            return values * np.exp(-beta_prime * s)

        result = integrate_box(integrand, [lower], [0.0], rel_tol=PROBE_REL_TOL)
        total += weight * float(result.value)
    return total


def extension_divergence_probe(beta_prime, n_range=PROBE_WINDOW, d_plus=1.0, d_minus=1.0):
    """
    Evaluate S_n for n in n_range (inclusive) and fit the growth rate of
    Delta_n = S_{n+1} - S_n.  Growth is 'exponential' (Delta_n ~ 2^{a n}),
    'linear' (Delta_n roughly constant) or 'bounded' (Delta_n -> 0).
    """
    manifold = ManifoldSpec(['z'])
    z = manifold.coordinate('z')
    kappa = max(int(math.floor(beta_prime)), 0)

    psi = TestFunction(manifold, [0.0], [1.0], kind='plateau').expr
    polynomial = add(ONE, *[mul(const(1.0 / math.factorial(l)), power(z, l))
                            for l in range(1, kappa + 1)])
    psi_kappa = mul(polynomial, psi)
    sides = ((1.0, float(d_plus)), (-1.0, float(d_minus)))

    first, last = n_range
    n_values = list(range(first, last + 2))
    sums = [_probe_sum(n, beta_prime, psi_kappa, manifold, sides) for n in n_values]
    differences = [b - a for a, b in zip(sums[:-1], sums[1:])]

    scale = 1.0 + max(abs(s) for s in sums)
    if max(abs(d) for d in differences) <= BOUNDED_DIFFERENCE * scale:
        growth, exponent = 'bounded', 0.0
    else:
        magnitudes = np.log2(np.maximum(np.abs(differences), 1e-300))
        exponent = float(np.polyfit(n_values[:-1], magnitudes, 1)[0])
        growth = 'exponential' if exponent > GROWTH_SLOPE_MIN else 'linear'

    logging.info("Extension probe beta'=%g: growth %s, exponent %.4f", beta_prime, growth, exponent)
    return ProbeResult(beta_prime, kappa, n_values, sums, differences, exponent, growth)


def leaf_decay_ratio(functional, poisson, g, center, radii, t_max, steps=5):
    """
    Ratios phi(1_f o Psi_t) / phi(1_f) along the Hamiltonian flow of g at
    t = k t_max / steps; a KMS functional supported on the window rescales by
    exp(-beta int X(g)), so bounded ratios under unbounded rescaling force
    the functional to vanish there.
    """
    base = window_mass(functional, center, radii)
    if base == 0.0:
        return []
    manifold = functional.manifold
    plateau = TestFunction(manifold, center, radii, kind='plateau')
    flow_map = Flow(poisson.hamiltonian_field(g))
    box = plateau.box()
    ratios = []
    for k in range(1, steps + 1):
        t = t_max * k / steps
        moved = _moved_integrand(manifold, flow_map, plateau.expr, t, box)
        ratios.append(functional.pair(moved)[0] / base)
    return ratios
