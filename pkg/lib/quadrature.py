#!/usr/bin/env python3
'''
        FILE:  quadrature.py
 DESCRIPTION:  Adaptive tensor-product Gauss-Legendre quadrature for
               vector-valued integrands, and the singular-factor machinery
               that removes |F|^p singularities by a change of variables.

        BUGS:  Singular factors must depend on a single coordinate.
       NOTES:  Near a zero r of order m of F the weight |F(s)|^p behaves like
               |s - r|^q with q = m p.  With s = r +/- ((q+1) u)^(1/(q+1))
               the measure |s - r|^q ds becomes du, so the transformed
               integrand is g(s(u)) * (|F(s)| / |s - r|^m)^p, which is smooth.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-04
    REVISION:  2021-06-21

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import math
import heapq
import logging
from functools import lru_cache
from itertools import product

import numpy as np
from numpy.polynomial.legendre import leggauss, legval
from scipy.optimize import brentq, minimize_scalar

from lib.exceptions import NonIntegrable, QuadratureNotConverged
from lib.expressions import derive, evaluate, free_coords

QUAD_REL_TOL = 1e-8
QUAD_ABS_TOL = 1e-14
MAX_CELLS = 20000
INITIAL_SPLITS = 2

# cells within BATCH_SHARE of the worst error are split together
BATCH_CELLS = 96
BATCH_SHARE = 0.125

ROOT_SCAN_POINTS = 256
ROOT_TOLERANCE = 1e-12
MAX_ROOT_ORDER = 6

# below this distance to a root the regularized weight uses a Taylor expansion
TAYLOR_RADIUS = 1e-3


@lru_cache(maxsize=None)
def tensor_rule(order, dim):
    """
    Gauss-Legendre nodes (n^d, d) and weights on [-1, 1]^d
    """
    nodes, weights = leggauss(order)
    grid = np.array(list(product(nodes, repeat=dim)))
    mass = np.array([np.prod(w) for w in product(weights, repeat=dim)])
    return grid, mass


def rule_orders(dim):
    """
    (high, low) Gauss orders for cells of dimension dim
    """
    return (7, 5) if dim <= 2 else (6, 4)


class QuadResult():
    """
    Integral estimate of a vector-valued integrand
    """

    def __init__(self, value, error, cells=0):
        self._value = np.asarray(value, dtype=float)
        self._error = np.asarray(error, dtype=float)
        self._cells = cells


    @property
    def value(self):
        '''
        Getter function for self._value
        '''
        return self._value


    @property
    def error(self):
        '''
        Getter function for self._error
        '''
        return self._error


    @property
    def cells(self):
        '''
        Getter function for self._cells
        '''
        return self._cells


    def __add__(self, other):
        if other is None:
            return self
        return QuadResult(self._value + other.value, self._error + other.error,
                          self._cells + other.cells)


    __radd__ = __add__


    def scaled(self, factor):
        return QuadResult(self._value * factor, self._error * abs(factor), self._cells)


def _cells(func, lower, upper, channels):
    """
    High-order estimates, error estimates and split axes for a batch of cells
    (K, d) evaluated with one call of func per rule
    """
    count, dim = lower.shape
    high, low = rule_orders(dim)
    half = 0.5 * (upper - lower)
    center = 0.5 * (upper + lower)
    volume = np.prod(half, axis=1)

    estimates = []
    high_values = None
    for order in (high, low):
        nodes, weights = tensor_rule(order, dim)
        points = (center[:, None, :] + nodes[None, :, :] * half[:, None, :]).reshape(-1, dim)
        values = np.asarray(func(points), dtype=float).reshape(count, nodes.shape[0], channels)
        if high_values is None:
            high_values = values
        estimates.append(volume[:, None] * np.einsum('n,knc->kc', weights, values))

    return estimates[0], np.abs(estimates[0] - estimates[1]), high_values


@lru_cache(maxsize=None)
def _top_legendre(order):
    nodes, weights = leggauss(order)
    return legval(nodes, [0.0] * (order - 1) + [1.0]) * weights * (order - 0.5), weights


def split_axes(values, lower, upper, span, controlled):
    """
    Axis to bisect per cell: the one whose top Legendre coefficient (summed
    over the other nodes) is largest.  Cells resolved along every axis fall
    back to their longest relative side.
    """
    count, dim = lower.shape
    order = rule_orders(dim)[0]
    top, weights = _top_legendre(order)

    grid = values[:, :, :controlled].reshape((count,) + (order,) * dim + (controlled,))
    grid = np.moveaxis(grid, -1, 1)
    scores = []
    for axis in range(dim):
        along = np.abs(np.moveaxis(grid, 2 + axis, -1) @ top)
        while along.ndim > 2:
            along = along @ weights
        scores.append(along.sum(axis=1))
    scores = np.stack(scores, axis=1)

    longest = np.argmax((upper - lower) / span, axis=1)
    best = np.argmax(scores, axis=1)
    resolved = np.max(scores, axis=1) <= 1e-300
    return np.where(resolved, longest, best)


def _channel_count(func, lower, upper):
    probe = np.asarray(func(0.5 * (lower + upper)[None, :]), dtype=float)
    return 1 if probe.ndim == 1 else probe.shape[1]


def integrate_box(func, lower, upper, rel_tol=QUAD_REL_TOL, abs_tol=QUAD_ABS_TOL,
                  max_cells=MAX_CELLS, controlled=None):
    """
    Adaptive integral of func over the box [lower, upper].  func maps (N, d)
    points to (N,) or (N, k) values.  The worst cells are bisected until the
    summed error estimate of the first `controlled` channels (all when None)
    drops below max(abs_tol, rel_tol * max |value|), the maximum running over
    every channel.  Uncontrolled channels ride along on the same cells.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if np.any(upper <= lower):
        channels = _channel_count(func, lower, np.maximum(upper, lower))
        return QuadResult(np.zeros(channels), np.zeros(channels))

    channels = _channel_count(func, lower, upper)
    controlled = channels if controlled is None else max(1, min(int(controlled), channels))
    span = upper - lower
    dim = lower.size

    heap = []
    counter = 0
    total = np.zeros(channels)
    total_err = np.zeros(channels)

    def push(lo, hi):
        nonlocal counter, total, total_err
        values, errors, nodes = _cells(func, lo, hi, channels)
        axes = split_axes(nodes, lo, hi, span, controlled)
        for k in range(lo.shape[0]):
            heapq.heappush(heap, (-float(np.max(errors[k, :controlled])), counter, lo[k], hi[k],
                                  values[k], errors[k], int(axes[k])))
            counter += 1
            total += values[k]
            total_err += errors[k]

    edges = [np.linspace(lower[i], upper[i], INITIAL_SPLITS + 1) for i in range(dim)]
    starts = list(product(range(INITIAL_SPLITS), repeat=dim))
    push(np.array([[edges[i][k] for i, k in enumerate(idx)] for idx in starts]),
         np.array([[edges[i][k + 1] for i, k in enumerate(idx)] for idx in starts]))

    while True:
        scale = float(np.max(np.abs(total)))
        error = float(np.max(total_err[:controlled]))
        if error <= max(abs_tol, rel_tol * scale):
            break
        if len(heap) >= max_cells:
            logging.warning("Quadrature stalled at %d cells, error %g, value scale %g",
                            len(heap), error, scale)
            raise QuadratureNotConverged("cell budget %d exhausted (error %g)" % (max_cells, error),
                                         QuadResult(total.copy(), total_err.copy(), len(heap)))

        # split every cell carrying a sizeable share of the worst error
        batch = [heapq.heappop(heap)]
        limit = min(BATCH_CELLS, max_cells - len(heap) - 1)
        while heap and len(batch) < limit and -heap[0][0] >= BATCH_SHARE * -batch[0][0]:
            batch.append(heapq.heappop(heap))

        child_lo, child_hi = [], []
        for _, _, lo, hi, value, err, axis in batch:
            total -= value
            total_err -= err
            mid = 0.5 * (lo[axis] + hi[axis])
            for a, b in ((lo[axis], mid), (mid, hi[axis])):
                cell_lo, cell_hi = lo.copy(), hi.copy()
                cell_lo[axis], cell_hi[axis] = a, b
                child_lo.append(cell_lo)
                child_hi.append(cell_hi)
        push(np.array(child_lo), np.array(child_hi))

    # fixed summation order so results do not depend on refinement history
    cells = sorted(heap, key=lambda item: tuple(item[2]))
    value = np.sum([item[4] for item in cells], axis=0)
    error = np.sum([item[5] for item in cells], axis=0)
    logging.debug("Quadrature converged with %d cells", len(cells))
    return QuadResult(value, error, len(cells))


################################################################################
# Singular factors
################################################################################
def line_function(expr, index, dim):
    """
    t -> expr at the point with coordinate `index` equal to t, others 0
    """
    def at(values):
        values = np.atleast_1d(np.asarray(values, dtype=float))
        points = np.zeros((values.size, dim))
        points[:, index] = values
        return evaluate(expr, points)
    return at


def line_roots(expr, index, dim, lower, upper):
    """
    Zeros of a single-coordinate expression strictly inside (lower, upper),
    including even-order zeros without a sign change
    """
    func = line_function(expr, index, dim)
    grid = np.linspace(lower, upper, ROOT_SCAN_POINTS + 1)
    values = func(grid)

    def scalar(t):
        return float(func(t)[0])

    roots = []
    for k in range(grid.size - 1):
        if values[k] == 0.0:
            roots.append(grid[k])
        elif values[k] * values[k + 1] < 0.0:
            roots.append(brentq(scalar, grid[k], grid[k + 1], xtol=1e-15))

    magnitude = np.abs(values)
    for k in range(1, grid.size - 1):
        if magnitude[k] <= magnitude[k - 1] and magnitude[k] <= magnitude[k + 1] \
                and values[k - 1] * values[k + 1] > 0.0:
            found = minimize_scalar(lambda t: abs(scalar(t)), bounds=(grid[k - 1], grid[k + 1]),
                                    method='bounded', options={'xatol': 1e-13})
            if abs(found.fun) < ROOT_TOLERANCE:
                roots.append(float(found.x))

    width = upper - lower
    out = []
    for root in sorted(roots):
        if root <= lower + 1e-12 * width or root >= upper - 1e-12 * width:
            continue
        if not out or root - out[-1] > 1e-9 * max(1.0, width):
            out.append(float(root))
    return out


class SingularFactor():
    """
    |F|^p for a function F of one coordinate
    """

    def __init__(self, zeta, exponent, dim):
        coords = free_coords(zeta)
        if len(coords) > 1:
            raise ValueError("singular factor %s depends on more than one coordinate" % zeta)
        self._zeta = zeta
        self._exponent = float(exponent)
        self._dim = dim
        self._index = coords.pop() if coords else None
        self._taylor = {}


    @property
    def zeta(self):
        '''
        Getter function for self._zeta
        '''
        return self._zeta


    @property
    def exponent(self):
        '''
        Getter function for self._exponent
        '''
        return self._exponent


    @property
    def index(self):
        '''
        Getter function for self._index
        '''
        return self._index


    @property
    def dim(self):
        '''
        Getter function for self._dim
        '''
        return self._dim


    def roots(self, lower, upper):
        if self._index is None or self._exponent == 0.0:
            return []
        return line_roots(self._zeta, self._index, self._dim, lower, upper)


    def root_data(self, root):
        """
        (order m, Taylor coefficients F^(j)(r)/j! for j = m, m+1, m+2)
        """
        if root in self._taylor:
            return self._taylor[root]

        expr = self._zeta
        derivatives = []
        for _ in range(MAX_ROOT_ORDER + 2):
            expr = derive(expr, self._index)
            derivatives.append(float(line_function(expr, self._index, self._dim)(root)[0]))

        order = None
        for m in range(1, MAX_ROOT_ORDER + 1):
            if abs(derivatives[m - 1]) > 1e-8:
                order = m
                break
        if order is None:
            logging.error("Zero of %s at %g has order above %d", self._zeta, root, MAX_ROOT_ORDER)
            raise NonIntegrable(self._zeta, -math.inf)

        coefficients = [derivatives[order - 1 + j] / math.factorial(order + j) for j in range(3)]
        self._taylor[root] = (order, coefficients)
        return self._taylor[root]


    def effective_exponent(self, root):
        order, _ = self.root_data(root)
        return order * self._exponent


    def weight(self, points):
        """
        |F|^p at points
        """
        values = np.abs(evaluate(self._zeta, points))
        return values ** self._exponent


    def regularized_weight(self, points, root):
        """
        (|F(s)| / |s - r|^m)^p near the zero r
        """
        order, coefficients = self.root_data(root)
        s = points[:, self._index]
        offset = s - root
        with np.errstate(divide='ignore', invalid='ignore'):
            direct = np.abs(evaluate(self._zeta, points)) / np.abs(offset) ** order
        taylor = np.abs(coefficients[0] + coefficients[1] * offset + coefficients[2] * offset ** 2)
        ratio = np.where(np.abs(offset) < TAYLOR_RADIUS, taylor, direct)
        return ratio ** self._exponent


class Segment():
    """
    One coordinate interval of an integration piece.  When `root` is set the
    segment touches a zero at one end and is integrated in the substituted
    variable u.
    """

    def __init__(self, lower, upper, root=None, exponent=0.0, factors=()):
        self.lower = lower
        self.upper = upper
        self.root = root
        self.exponent = exponent
        self.factors = tuple(factors)

    @property
    def substituted(self):
        return self.root is not None and self.exponent != 0.0

    def u_bounds(self):
        if not self.substituted:
            return self.lower, self.upper
        q = self.exponent
        length = self.upper - self.lower
        return 0.0, length ** (q + 1.0) / (q + 1.0)

    def to_s(self, u):
        if not self.substituted:
            return u
        q = self.exponent
        distance = np.maximum((q + 1.0) * u, 0.0) ** (1.0 / (q + 1.0))
        if self.root <= self.lower:
            return self.root + distance
        return self.root - distance


def split_segments(lower, upper, factors, region_functions=()):
    """
    Cut [lower, upper] for one coordinate at the zeros of the singular
    factors and region functions living on it.  Returns Segments with at most
    one singular zero each, at an endpoint.
    """
    singular = []
    for factor in factors:
        for root in factor.roots(lower, upper):
            singular.append((root, factor))
        # zeros sitting exactly on a window edge
        if factor.index is not None and factor.exponent != 0.0:
            ends = line_function(factor.zeta, factor.index, factor.dim)([lower, upper])
            for end, value in zip((lower, upper), ends):
                if abs(value) < ROOT_TOLERANCE:
                    singular.append((end, factor))

    cuts = {lower, upper}
    roots = sorted({root for root, _ in singular})
    cuts.update(roots)
    for left, right in zip(roots[:-1], roots[1:]):
        cuts.add(0.5 * (left + right))
    for expr, index, dim in region_functions:
        cuts.update(line_roots(expr, index, dim, lower, upper))

    edges = sorted(cuts)
    segments = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 0.0:
            continue
        touching = [root for root in roots if abs(root - a) < 1e-14 or abs(root - b) < 1e-14]
        if not touching:
            segments.append(Segment(a, b))
            continue
        root = touching[0]
        exponent = sum(factor.effective_exponent(r) for r, factor in singular if r == root)
        if exponent <= -1.0:
            worst = [factor for r, factor in singular if r == root][0]
            logging.error("Density |%s|^%g is not integrable at %g", worst.zeta, exponent, root)
            raise NonIntegrable(worst.zeta, exponent)
        at_root = [factor for r, factor in singular if r == root]
        segments.append(Segment(a, b, root, exponent, at_root))
    return segments


def integrate_pieces(func, axes, rel_tol=QUAD_REL_TOL, abs_tol=QUAD_ABS_TOL, max_cells=MAX_CELLS,
                     controlled=None):
    """
    Integrate func(points, segments) over the product of per-axis Segment
    lists.  func receives the mapped points in the original coordinates and
    the Segment per axis of the current piece.  A piece that runs out of
    cells does not stop the others; the summed partial estimate travels with
    the QuadratureNotConverged raised at the end.
    """
    pieces = []
    for segments in product(*axes):
        bounds = [segment.u_bounds() for segment in segments]
        lower = np.array([b[0] for b in bounds])
        upper = np.array([b[1] for b in bounds])

        def mapped(u_points, segments=segments):
            points = np.empty_like(u_points)
            for axis, segment in enumerate(segments):
                points[:, axis] = segment.to_s(u_points[:, axis])
            return func(points, segments)

        pieces.append((mapped, lower, upper))

    # pieces far below the overall magnitude only need absolute accuracy
    rough = 0.0
    for mapped, lower, upper in pieces:
        if np.all(upper > lower):
            channels = _channel_count(mapped, lower, upper)
            value, _, _ = _cells(mapped, lower[None, :], upper[None, :], channels)
            rough = max(rough, float(np.max(np.abs(value))))
    abs_tol = max(abs_tol, rel_tol * rough * 1e-2)

    total = None
    failures = []
    for mapped, lower, upper in pieces:
        try:
            result = integrate_box(mapped, lower, upper, rel_tol, abs_tol, max_cells, controlled)
        except QuadratureNotConverged as err:
            failures.append(err)
            result = err.partial
        total = result if total is None else total + result

    if failures:
        raise QuadratureNotConverged("%d of %d pieces did not converge: %s"
                                     % (len(failures), len(pieces), failures[0]), total)
    return total
