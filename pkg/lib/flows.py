#!/usr/bin/env python3
'''
        FILE:  flows.py
 DESCRIPTION:  Flows of vector fields: closed form for diagonal affine fields,
               adaptive RK4 with step doubling otherwise, and composite Simpson
               line integrals along trajectories.

        BUGS:
       NOTES:  All points of a batch share one step size so results do not
               depend on how a batch is split.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-05
    REVISION:  2021-06-21

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import logging

import numpy as np

from lib.calculus import TWO_PI, field_components
from lib.exceptions import FlowEscaped
from lib.expressions import Const, derive, evaluate, eval_at

FLOW_TOLERANCE = 1e-10
FLOW_BOX_LIMIT = 1e3
MAX_FLOW_STEPS = 200000
INITIAL_STEP = 0.05

SIMPSON_NODES = 65


def _diagonal_affine(components, dim):
    """
    [(a_i, b_i)] when X^i = a_i + b_i x_i for every i, else None
    """
    coefficients = []
    origin = np.zeros(dim)
    for i, comp in enumerate(components):
        if any(not derive(comp, j).is_zero() for j in range(dim) if j != i):
            return None
        slope = derive(comp, i)
        if not isinstance(slope, Const):
            return None
        coefficients.append((eval_at(comp, origin), slope.value))
    return coefficients


class Flow():
    """
    The flow Psi_t of a vector field.  `box` bounds the linear coordinates a
    trajectory may visit; leaving it raises FlowEscaped.
    """

    def __init__(self, field, box=FLOW_BOX_LIMIT):
        self._manifold = field.manifold
        self._components = field_components(field)
        self._box = float(box)
        self._affine = _diagonal_affine(self._components, self._manifold.dim)
        if self._affine is not None:
            logging.debug("Using the closed-form flow of %s", field)


    @property
    def is_closed_form(self):
        return self._affine is not None


    def velocity(self, points):
        return np.stack([evaluate(comp, points) for comp in self._components], axis=1)


    def __call__(self, t, points, wrap=True):
        """
        Psi_t applied to each row of points
        """
        points = np.atleast_2d(np.asarray(points, dtype=float)).copy()
        if t == 0.0:
            result = points
        elif self._affine is not None:
            result = self._closed_form(t, points)
        else:
            result = self._integrate(t, points)
        self._check_box(result)
        if wrap:
            for i in range(self._manifold.dim):
                if self._manifold.is_angle(i):
                    result[:, i] = np.mod(result[:, i], TWO_PI)
        return result


    def _closed_form(self, t, points):
        out = np.empty_like(points)
        for i, (a, b) in enumerate(self._affine):
            if b == 0.0:
                out[:, i] = points[:, i] + a * t
            else:
                growth = np.exp(b * t)
                out[:, i] = points[:, i] * growth + a * np.expm1(b * t) / b
        return out


    def _check_box(self, points):
        for i in range(self._manifold.dim):
            if self._manifold.is_angle(i):
                continue
            if np.any(np.abs(points[:, i]) > self._box):
                logging.error("Trajectory left the box |x_%d| <= %g", i, self._box)
                raise FlowEscaped("trajectory left |%s| <= %g"
                                  % (self._manifold.coord_names[i], self._box))


    def _step(self, y, h):
        k1 = self.velocity(y)
        k2 = self.velocity(y + 0.5 * h * k1)
        k3 = self.velocity(y + 0.5 * h * k2)
        k4 = self.velocity(y + h * k3)
        return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


    def _integrate(self, t, y):
        direction = 1.0 if t > 0 else -1.0
        remaining = abs(t)
        h = min(INITIAL_STEP, remaining)
        steps = 0

        while remaining > 0.0:
            h = min(h, remaining)
            full = self._step(y, direction * h)
            half = self._step(self._step(y, 0.5 * direction * h), 0.5 * direction * h)
            err = float(np.max(np.abs(half - full))) / 15.0

            if err <= FLOW_TOLERANCE:
                y = half + (half - full) / 15.0
                remaining -= h
                self._check_box(y)
                h *= min(2.0, 0.9 * (FLOW_TOLERANCE / max(err, 1e-300)) ** 0.2)
            else:
                h *= max(0.2, 0.9 * (FLOW_TOLERANCE / err) ** 0.25)

            steps += 1
            if steps > MAX_FLOW_STEPS:
                raise FlowEscaped("step budget exhausted after t = %g" % (abs(t) - remaining))
        return y


    def trajectory(self, t, points, nodes=SIMPSON_NODES):
        """
        Positions at s_k = k t / (nodes - 1); shape (nodes, N, dim)
        """
        points = np.atleast_2d(np.asarray(points, dtype=float))
        ds = t / (nodes - 1)
        out = [points]
        for _ in range(nodes - 1):
            out.append(self(ds, out[-1], wrap=False))
        return np.stack(out)


def flow(field, t, point, box=FLOW_BOX_LIMIT):
    """
    Psi_t^X(p) for a single point or a batch of points
    """
    point = np.asarray(point, dtype=float)
    result = Flow(field, box)(t, point)
    return result[0] if point.ndim == 1 else result


def simpson_weights(count, length):
    """
    Composite Simpson weights for `count` (odd) equally spaced nodes
    """
    if count % 2 == 0:
        raise ValueError("Simpson's rule needs an odd node count")
    weights = np.ones(count)
    weights[1:-1:2] = 4.0
    weights[2:-1:2] = 2.0
    return weights * (length / (count - 1)) / 3.0


def line_integral(flow_map, expr, t, points, nodes=SIMPSON_NODES):
    """
    int_0^t expr(Psi_s(p)) ds for each point p
    """
    if t == 0.0:
        return np.zeros(np.atleast_2d(points).shape[0])
    path = flow_map.trajectory(t, points, nodes)
    weights = simpson_weights(nodes, t)
    values = np.stack([evaluate(expr, path[k]) for k in range(nodes)])
    return weights @ values


def flowed_box(flow_map, t, box, manifold, samples=7):
    """
    Bounding box of Psi_t applied to a box (grid of boundary and interior
    samples, padded by 10%)
    """
    axes = []
    for i, (lo, hi) in enumerate(box):
        axes.append(np.linspace(lo, hi, samples))
    grid = np.stack(np.meshgrid(*axes, indexing='ij'), axis=-1).reshape(-1, len(box))
    moved = flow_map(t, grid, wrap=False)

    out = []
    for i in range(len(box)):
        lo, hi = float(np.min(moved[:, i])), float(np.max(moved[:, i]))
        pad = 0.1 * (hi - lo) + 1e-9
        lo, hi = lo - pad, hi + pad
        if manifold.is_angle(i) and hi - lo >= TWO_PI:
            lo, hi = 0.0, TWO_PI
        out.append((lo, hi))
    return out
