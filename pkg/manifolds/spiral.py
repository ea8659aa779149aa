#!/usr/bin/env python3
'''
        FILE:  spiral.py
 DESCRIPTION:  The spiral structure on R^2 x T with
               Pi = (x d_x + d_theta) ^ d_y.  Off the cylinder Z = {x = 0}
               the leaves spiral onto Z; Z itself is a symplectic leaf.

        BUGS:
       NOTES:  H^1 is spanned by d_theta and d_y, and the modular field is d_y.
               The structure is not cosymplectic and Z is not compact, so the
               cells rest on the spiral-specific arguments.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-19
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import sys
import math

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

import numpy as np

from lib.calculus import ManifoldSpec, MultiVector, vector_field, volume_form
from lib.catalog import (HALF_LINE, PRODUCT_OF_CIRCLE_MEASURES, PROBE_SAMPLES, ZERO, CatalogManifold,
                         ConeDescription, ExampleBundle, GridCell, ZStructure, decay_probe,
                         transversality_probe, z_certificates)
from lib.cohomology import spiral_class_coords
from lib.expressions import ONE, ZERO as ZERO_EXPR, add, const, exp, mul
from lib.functional import LeafPushforward, RegularDensity, decay_bounds
from lib.poisson import PoissonStructure, sample_points

DESCRIPTION = "R^2 x T with the spiral Poisson structure (x d_x + d_theta) ^ d_y"

EXAMPLE_DATA = """
example = "spiral"
coords = [0.0, 1.0]
beta = 1.0
"""

# starting angles of the extremal spiral generators
LEAF_ANGLES = (0.0, 0.5 * math.pi, math.pi, 1.5 * math.pi)
LEAF_SIDES = (1.0, -1.0)

# off-Z sample points must stay clear of the cylinder
OFF_Z_MARGIN = 0.1

DECAY_CENTER = (0.5, math.pi, 0.0)
DECAY_RADII = (0.3, 1.0, 0.5)

HYPOTHESES_NOTE = "not cosymplectic and Z is not compact: the cell rests on the spiral leaf geometry"


class Spiral(CatalogManifold):
    '''
    Catalog class for (R^2 x T, (x d_x + d_theta) ^ d_y)
    '''

    coordinate_names = ('A', 'B')
    row_label = 'A'
    col_label = 'B'
    kms_tolerance = 1e-5

    def __init__(self):
        super().__init__(name="spiral", description=DESCRIPTION, example_data=EXAMPLE_DATA)


    def make_example(self):
        manifold = ManifoldSpec(['x', 'theta', 'y'], ['theta'])
        x = manifold.coordinate('x')
        pi = MultiVector(manifold, 2, {('x', 'y'): x, ('theta', 'y'): ONE})
        poisson = PoissonStructure(manifold, pi)
        fields = {"modular": poisson.modular_field(volume_form(manifold)),
                  "rotation": vector_field(manifold, {'theta': ONE})}
        return ExampleBundle(self.name, poisson, fields=fields)


    def representative(self, coords):
        coords = self.normalize_coords(coords)
        return vector_field(self.manifold, {'theta': const(coords['A']), 'y': const(coords['B'])})


    def class_coords(self, field):
        return spiral_class_coords(self.poisson, field)


    def grid(self):
        cells = []
        for row, a in (('A=0', 0.0), ('A=1', 1.0)):
            for col, b in (('B<0', -1.0), ('B=0', 0.0), ('B>0', 1.0)):
                cells.append(GridCell(row, col, {"A": a, "B": b}))
        return cells


    def z_structures(self, coords):
        coords = self.normalize_coords(coords)
        cylinder = ManifoldSpec(['theta', 'y'], ['theta'])
        poisson_z = PoissonStructure(cylinder, MultiVector(cylinder, 2, {('theta', 'y'): ONE}))
        field_z = vector_field(cylinder, {'theta': const(coords['A']), 'y': const(coords['B'])})
        decay = (cylinder.coordinate('y'), (math.pi, 0.0), (1.0, 0.5))
        return [ZStructure('Z', poisson_z, field_z, decay)]


    def z_gibbs(self, a, beta):
        """
        e^{-beta A y} d theta dy on Z, the Gibbs state of X_Z = A d_theta = X_{Ay}
        """
        params = ManifoldSpec(['theta', 'y'], ['theta'])
        weight = exp(mul(-beta * a, params.coordinate('y')))
        return LeafPushforward(self.manifold, params, [ZERO_EXPR] + params.coordinates(), weight,
                               label='gibbs on Z')


    def spiral_generator(self, x0, theta0, beta_prime):
        """
        _{x0}phi_{theta0}: the Gibbs measure e^{beta' u} du dy on the leaf
        (x0 e^u, theta0 + u, y)
        """
        params = ManifoldSpec(['u', 'y'])
        u = params.coordinate('u')
        parametrization = [mul(x0, exp(u)), add(const(theta0), u), params.coordinate('y')]

        def bounds(box):
            return _leaf_bounds(box, x0, beta_prime)

        return LeafPushforward(self.manifold, params, parametrization, exp(mul(beta_prime, u)),
                               bounds=bounds, label='spiral x0=%g theta0=%g' % (x0, theta0))


    def invariant_density(self, beta_prime, side=1.0):
        """
        |x|^{beta' - 1} on one side of Z: d_theta-invariant, not extremal
        """
        x = self.manifold.coordinate('x')
        return RegularDensity(self.manifold, singular_factors=[(x, beta_prime - 1.0)],
                              region=[(x, side)], label='|x|^%g, side %+d' % (beta_prime - 1.0, side))


    def _classify(self, coords, beta):
        a, b = coords['A'], coords['B']
        field = self.representative(coords)
        notes = [HYPOTHESES_NOTE]

        if b < 0.0:
            y = self.manifold.coordinate('y')
            probe = decay_probe(self.poisson, field, y, beta, DECAY_CENTER, DECAY_RADII)
            return ConeDescription(ZERO, notes=notes, certificates=[probe])

        if b == 0.0:
            notes.append("supported on Z with the Gibbs weight e^{-beta A y}")
            return ConeDescription(HALF_LINE, [self.z_gibbs(a, beta)], notes=notes)

        if a != 0.0:
            points = sample_points(self.manifold, count=PROBE_SAMPLES)
            points = points[np.abs(points[:, 0]) > OFF_Z_MARGIN]
            certificates = [transversality_probe(self.poisson, field, points)]
            certificates.extend(z_certificates(self.z_structures(coords)[0], beta))
            return ConeDescription(ZERO, notes=notes, certificates=certificates)

        beta_prime = b * beta
        generators = [self.spiral_generator(side, angle, beta_prime)
                      for side in LEAF_SIDES for angle in LEAF_ANGLES]
        generators += [self.invariant_density(beta_prime, side) for side in LEAF_SIDES]
        flags = [True] * (len(LEAF_SIDES) * len(LEAF_ANGLES)) + [False] * len(LEAF_SIDES)
        notes.append("two measures on the circle of starting angles, one per side of Z")
        notes.append("the d_theta-invariant generators are the Lebesgue mixtures and are not extremal")
        return ConeDescription(PRODUCT_OF_CIRCLE_MEASURES, generators, flags, notes)


def _leaf_bounds(box, x0, rate):
    """
    u-range of the spiral leaf through x0 meeting the box, with the dropped
    tail mass when the box reaches Z
    """
    (x_lo, x_hi), _, (y_lo, y_hi) = box
    if x0 > 0.0:
        outer, inner = x_hi, max(x_lo, 0.0)
    else:
        outer, inner = -x_lo, max(-x_hi, 0.0)

    radius = abs(x0)
    if outer <= 0.0:
        return np.array([0.0, y_lo]), np.array([0.0, y_hi]), 0.0

    upper = math.log(outer / radius)
    lower, tail = decay_bounds(rate, upper)
    if inner > 0.0 and math.log(inner / radius) > lower:
        lower, tail = math.log(inner / radius), 0.0
    return np.array([lower, y_lo]), np.array([upper, y_hi]), tail * (y_hi - y_lo)
