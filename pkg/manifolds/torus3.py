#!/usr/bin/env python3
'''
        FILE:  torus3.py
 DESCRIPTION:  The cosymplectic 3-torus with eta = d theta3 - c d theta2 and
               omega = d theta1 ^ d theta2, whose Poisson tensor is
               d_1 ^ (d_2 + c d_3).  Leaves are closed for rational c and
               dense for irrational c.

        BUGS:
       NOTES:  c is kept as an exact sympy number so rationality is decided
               exactly.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-18
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import sys
import math

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

from lib.calculus import DiffForm, ManifoldSpec, one_form, vector_field
from lib.catalog import (MEASURES_ON_CIRCLE, PROBE_SAMPLES, SINGLETON, ZERO, CatalogManifold,
                         ConeDescription, ExampleBundle, GridCell, decay_probe, transversality_probe)
from lib.cohomology import exact_constant, torus_class_coords
from lib.expressions import ONE, add, const, mul
from lib.functional import LeafPushforward, RegularDensity
from lib.poisson import CosymplecticStructure, sample_points

DESCRIPTION = "The 3-torus with Pi = d_theta1 ^ (d_theta2 + c d_theta3)"

EXAMPLE_DATA = """
example = "torus3"
c = "sqrt2"
coords = [0.0, 0.0, 0.0]
beta = 1.0
"""

LEAF_OFFSETS = (0.0, 0.7, 1.4)

DECAY_CENTER = (math.pi, math.pi, math.pi)
DECAY_RADII = (1.0, 1.0, 1.0)


class Torus3(CatalogManifold):
    '''
    Catalog class for (T^3, d theta3 - c d theta2, d theta1 ^ d theta2)
    '''

    coordinate_names = ('t1', 't2', 't3')
    row_label = '[X]'
    col_label = 'c'

    def __init__(self, c='1/2'):
        self._c = exact_constant(c)
        super().__init__(name="torus3", description=DESCRIPTION, example_data=EXAMPLE_DATA)


    @property
    def c(self):
        '''
        Getter function for self._c
        '''
        return self._c


    @property
    def rational(self):
        return bool(self._c.is_rational)


    def parameters(self):
        return {"c": str(self._c)}


    def make_example(self):
        manifold = ManifoldSpec(['theta1', 'theta2', 'theta3'], ['theta1', 'theta2', 'theta3'])
        eta = one_form(manifold, {'theta3': ONE, 'theta2': const(-float(self._c))})
        omega = DiffForm(manifold, 2, {('theta1', 'theta2'): ONE})
        cosymplectic = CosymplecticStructure(manifold, eta, omega)
        fields = {"reeb": cosymplectic.reeb()}
        return ExampleBundle(self.name, cosymplectic.poisson(), cosymplectic=cosymplectic, fields=fields)


    def leafwise_field(self):
        """
        d_2 + c d_3
        """
        return vector_field(self.manifold, {'theta2': ONE, 'theta3': const(float(self._c))})


    def representative(self, coords):
        coords = self.normalize_coords(coords)
        c = float(self._c)
        return vector_field(self.manifold, {'theta1': const(coords['t1']),
                                            'theta2': const(coords['t2']),
                                            'theta3': const(coords['t2'] * c + coords['t3'])})


    def class_coords(self, field):
        return torus_class_coords(self._c, field)


    def grid(self):
        col = 'c=%s' % self._c
        return [GridCell('0', col, {}),
                GridCell('t1', col, {"t1": 1.0}),
                GridCell('t2', col, {"t2": 1.0}),
                GridCell('t3', col, {"t3": 1.0})]


    def reeb_field(self):
        return self.bundle.cosymplectic.reeb()


    def reeb_invariant_trace(self):
        """
        Normalized Haar measure
        """
        return RegularDensity(self.manifold, const(1.0 / (2.0 * math.pi) ** 3), label='haar')


    def leaf_trace(self, offset):
        """
        Liouville measure of the closed leaf (theta1, q u, offset + p u) for
        rational c = p/q
        """
        p, q = int(self._c.p), int(self._c.q)
        params = ManifoldSpec(['theta1', 'u'], ['theta1', 'u'])
        u = params.coordinate('u')
        parametrization = [params.coordinate('theta1'), mul(q, u), add(const(offset), mul(p, u))]
        return LeafPushforward(self.manifold, params, parametrization, label='leaf %g' % offset)


    def _classify(self, coords, beta):
        t1, t2, t3 = coords['t1'], coords['t2'], coords['t3']
        field = self.representative(coords)

        if t3 != 0.0:
            points = sample_points(self.manifold, count=PROBE_SAMPLES)
            return ConeDescription(ZERO, certificates=[transversality_probe(self.poisson, field, points)])

        if t2 != 0.0 or t1 != 0.0:
            g = self.manifold.coordinate('theta2' if t2 != 0.0 else 'theta1')
            probe = decay_probe(self.poisson, field, g, beta, DECAY_CENTER, DECAY_RADII)
            notes = ["multivalued Hamiltonian %s: its flow is complete and supports stay on T^3" % g]
            return ConeDescription(ZERO, certificates=[probe], notes=notes)

        if self.rational:
            generators = [self.leaf_trace(offset) for offset in LEAF_OFFSETS]
            generators.append(self.reeb_invariant_trace())
            flags = [True] * len(LEAF_OFFSETS) + [False]
            notes = ["closed leaves: a measure on the leaf circle times the leaf area"]
            return ConeDescription(MEASURES_ON_CIRCLE, generators, flags, notes)

        notes = ["dense leaves: the trace is unique up to scale"]
        return ConeDescription(SINGLETON, [self.reeb_invariant_trace()], notes=notes)
