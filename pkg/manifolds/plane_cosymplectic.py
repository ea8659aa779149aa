#!/usr/bin/env python3
'''
        FILE:  plane_cosymplectic.py
 DESCRIPTION:  The cosymplectic manifold R^2 x T with eta = dx and
               omega = dy ^ d theta.  Leaves are the cylinders {x = x0} and
               the Reeb field is d_x.

        BUGS:
       NOTES:  Non-compact with no proper leaf singled out, so the cells are
               justified by transversality and decay directly.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-16
    REVISION:  2021-06-23

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import sys
import math

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

import numpy as np

from lib.calculus import DiffForm, ManifoldSpec, field_components, one_form, vector_field
from lib.catalog import (MEASURES_ON_LINE, PROBE_SAMPLES, ZERO, CatalogManifold, ConeDescription,
                         ExampleBundle, GridCell, decay_probe, transversality_probe)
from lib.cohomology import CohomCoords, circle_average
from lib.expressions import ONE, const, evaluate
from lib.functional import LeafPushforward, RegularDensity
from lib.poisson import CosymplecticStructure, sample_points

DESCRIPTION = "R^2 x T with eta = dx and omega = dy ^ d theta"

EXAMPLE_DATA = """
example = "plane-cosymplectic"
coords = [0.0, 0.0]
beta = 1.0
"""

LEAF_HEIGHTS = (-0.5, 0.0, 0.5)

DECAY_CENTER = (0.0, math.pi, 0.0)
DECAY_RADII = (0.5, 1.0, 0.5)

HYPOTHESES_NOTE = "no compact proper leaf: the cell rests on transversality and decay alone"


class PlaneCosymplectic(CatalogManifold):
    '''
    Catalog class for (R^2 x T, dx, dy ^ d theta)
    '''

    coordinate_names = ('a', 'b')
    row_label = 'b'
    col_label = 'a'

    def __init__(self):
        super().__init__(name="plane-cosymplectic", description=DESCRIPTION, example_data=EXAMPLE_DATA)


    def make_example(self):
        manifold = ManifoldSpec(['x', 'theta', 'y'], ['theta'])
        eta = one_form(manifold, {'x': ONE})
        omega = DiffForm(manifold, 2, {('y', 'theta'): ONE})
        cosymplectic = CosymplecticStructure(manifold, eta, omega)
        poisson = cosymplectic.poisson()
        fields = {"reeb": cosymplectic.reeb()}
        return ExampleBundle(self.name, poisson, cosymplectic=cosymplectic, fields=fields)


    def representative(self, coords):
        coords = self.normalize_coords(coords)
        return vector_field(self.manifold, {'x': const(coords['a']), 'y': const(coords['b'])})


    def class_coords(self, field):
        """
        (a, b) = (X^x, circle mean of X^y) on {x = 0}
        """
        manifold = self.manifold
        comps = field_components(field)
        a = circle_average(comps[manifold.index('x')], manifold, {'x': 0.0}, 'theta')
        b = circle_average(comps[manifold.index('y')], manifold, {'x': 0.0}, 'theta')
        points = sample_points(manifold)
        notes = []
        for name, comp, value in (('a', comps[manifold.index('x')], a), ('b', comps[manifold.index('y')], b)):
            if float(np.max(np.abs(evaluate(comp, points) - value))) > 1e-9:
                notes.append("%s varies over M; the constant part on {x = 0} is reported" % name)
        return CohomCoords(self.name, {"a": a, "b": b}, notes)


    def grid(self):
        cells = []
        for row, b in (('b=0', 0.0), ('b=1', 1.0)):
            for col, a in (('a=0', 0.0), ('a=1', 1.0)):
                cells.append(GridCell(row, col, {"a": a, "b": b}))
        return cells


    def reeb_field(self):
        return self.bundle.cosymplectic.reeb()


    def reeb_invariant_trace(self):
        """
        eta ^ omega as a density: dx d theta dy
        """
        return RegularDensity(self.manifold, label='lebesgue')


    def _leaf_traces(self):
        params = ManifoldSpec(['theta', 'y'], ['theta'])
        generators = [LeafPushforward(self.manifold, params, [const(height)] + params.coordinates(),
                                      label='leaf x=%g' % height) for height in LEAF_HEIGHTS]
        generators.append(self.reeb_invariant_trace())
        return generators, [True] * len(LEAF_HEIGHTS) + [False]


    def _classify(self, coords, beta):
        field = self.representative(coords)
        notes = [HYPOTHESES_NOTE]

        if coords['a'] != 0.0:
            points = sample_points(self.manifold, count=PROBE_SAMPLES)
            return ConeDescription(ZERO, notes=notes,
                                   certificates=[transversality_probe(self.poisson, field, points)])

        if coords['b'] != 0.0:
            y = self.manifold.coordinate('y')
            probe = decay_probe(self.poisson, field, y, beta, DECAY_CENTER, DECAY_RADII)
            return ConeDescription(ZERO, notes=notes, certificates=[probe])

        generators, flags = self._leaf_traces()
        notes.append("measures nu(x) on the leaf space times the leaf area d theta dy")
        return ConeDescription(MEASURES_ON_LINE, generators, flags, notes)
