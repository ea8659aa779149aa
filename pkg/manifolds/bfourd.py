#!/usr/bin/env python3
'''
        FILE:  bfourd.py
 DESCRIPTION:  The four dimensional b-Poisson manifold R x T x T x R with
               Pi = z d_z ^ d_theta1 + d_theta2 ^ d_y and Z = {z = 0}.

        BUGS:
       NOTES:  Classes are X = a1 z d_z - a2 d_y + a d_theta1.  The pair
               (a1, a2) is the class of theta on M_Z, a the modular weight.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-17
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import sys
import math

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

from lib.calculus import ManifoldSpec, MultiVector, field_components, vector_field, volume_form
from lib.catalog import (MEASURES_ON_CIRCLE, QUADRANT, ZERO, CatalogManifold, ConeDescription,
                         ExampleBundle, GridCell, ZStructure, decay_probe, density_exponent,
                         no_extension_probe, z_certificates)
from lib.cohomology import CohomCoords, circle_average, log_residue
from lib.expressions import ONE, ZERO as ZERO_EXPR, const, derive, logabs, mul
from lib.functional import LeafPushforward, RegularDensity
from lib.poisson import BStructure, PoissonStructure

DESCRIPTION = "R x T x T x R with Pi = z d_z ^ d_theta1 + d_theta2 ^ d_y"

EXAMPLE_DATA = """
example = "bfourd"
coords = [1.0, 0.0, 0.0]
beta = 1.0
"""

LEAF_ANGLES = (0.0, 0.5 * math.pi, math.pi)

RADIAL_WINDOW = ((1.0, math.pi, math.pi, 0.0), (0.4, 1.0, 1.0, 0.5))
LEAFWISE_WINDOW = ((0.5, math.pi, math.pi, 0.0), (0.3, 1.0, 1.0, 0.5))


class BFourD(CatalogManifold):
    '''
    Catalog class for (R x T^2 x R, z d_z ^ d_theta1 + d_theta2 ^ d_y)
    '''

    coordinate_names = ('a', 'a1', 'a2')
    row_label = '(a1,a2)'
    col_label = 'a'

    def __init__(self):
        super().__init__(name="bfourd", description=DESCRIPTION, example_data=EXAMPLE_DATA)


    def make_example(self):
        manifold = ManifoldSpec(['z', 'theta1', 'theta2', 'y'], ['theta1', 'theta2'])
        z = manifold.coordinate('z')
        pi = MultiVector(manifold, 2, {('z', 'theta1'): z, ('theta2', 'y'): ONE})
        poisson = PoissonStructure(manifold, pi)
        volume = volume_form(manifold)
        bstructure = BStructure(manifold, poisson.zeta_of(volume), volume)
        fields = {"modular": poisson.modular_field(volume)}
        return ExampleBundle(self.name, poisson, bstructure=bstructure, fields=fields)


    def representative(self, coords):
        coords = self.normalize_coords(coords)
        z = self.manifold.coordinate('z')
        return vector_field(self.manifold, {'z': mul(coords['a1'], z), 'y': const(-coords['a2']),
                                            'theta1': const(coords['a'])})


    def class_coords(self, field):
        manifold = self.manifold
        comps = field_components(field)
        on_z = {'z': 0.0}
        a = circle_average(comps[manifold.index('theta1')], manifold, on_z, 'theta1')
        a1 = circle_average(derive(comps[manifold.index('z')], manifold.index('z')),
                            manifold, on_z, 'theta1')
        a2 = -circle_average(comps[manifold.index('y')], manifold, on_z, 'theta2')
        return CohomCoords(self.name, {"a": a, "a1": a1, "a2": a2})


    def grid(self):
        cells = []
        for a1, a2 in ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)):
            row = '(%d,%d)' % (a1, a2)
            for col, a in (('a>0', 1.0), ('a=0', 0.0), ('a<0', -1.0)):
                cells.append(GridCell(row, col, {"a": a, "a1": a1, "a2": a2}))
        return cells


    def z_structures(self, coords):
        coords = self.normalize_coords(coords)
        zm = ManifoldSpec(['theta1', 'theta2', 'y'], ['theta1', 'theta2'])
        poisson_z = PoissonStructure(zm, MultiVector(zm, 2, {('theta2', 'y'): ONE}))
        field_z = vector_field(zm, {'theta1': const(coords['a']), 'y': const(-coords['a2'])})
        decay = (zm.coordinate('y'), (math.pi, math.pi, 0.0), (1.0, 1.0, 0.5))
        return [ZStructure('Z', poisson_z, field_z, decay)]


    def reeb_field(self):
        return self.bundle.fields['modular']


    def reeb_invariant_trace(self):
        """
        d theta1 d theta2 dy on Z
        """
        params = ManifoldSpec(['theta1', 'theta2', 'y'], ['theta1', 'theta2'])
        parametrization = [ZERO_EXPR] + params.coordinates()
        return LeafPushforward(self.manifold, params, parametrization, label='lebesgue on Z')


    def _leaf_traces(self):
        params = ManifoldSpec(['theta2', 'y'], ['theta2'])
        generators = []
        for angle in LEAF_ANGLES:
            parametrization = [ZERO_EXPR, const(angle)] + params.coordinates()
            generators.append(LeafPushforward(self.manifold, params, parametrization,
                                              label='leaf theta1=%g' % angle))
        generators.append(self.reeb_invariant_trace())
        return generators, [True] * len(LEAF_ANGLES) + [False]


    def component_densities(self, a, beta):
        manifold = self.manifold
        z = manifold.coordinate('z')
        residue, order = log_residue(z, const(a), manifold.index('z'), manifold.dim, 0.0)
        exponent = density_exponent(residue, order, beta)
        densities = [RegularDensity(manifold, singular_factors=[(z, exponent)], region=[(z, sign)],
                                    label=label)
                     for sign, label in ((1.0, 'phi+'), (-1.0, 'phi-'))]
        return densities, exponent


    def _classify(self, coords, beta):
        a, a1, a2 = coords['a'], coords['a1'], coords['a2']
        poisson = self.poisson
        field = self.representative(coords)
        zstructure = self.z_structures(coords)[0]

        if a2 != 0.0:
            center, radii = LEAFWISE_WINDOW
            probe = decay_probe(poisson, field, self.manifold.coordinate('y'), beta, center, radii)
            notes = ["theta has a leafwise component on every symplectic leaf"]
            return ConeDescription(ZERO, certificates=[probe], notes=notes)

        if a1 != 0.0:
            center, radii = RADIAL_WINDOW
            z = self.manifold.coordinate('z')
            certificates = [decay_probe(poisson, field, logabs(z), beta, center, radii)]
            notes = ["theta is not exact on M_Z: functionals vanish off Z"]
            on_z = z_certificates(zstructure, beta)
            if on_z:
                return ConeDescription(ZERO, certificates=certificates + on_z, notes=notes)
            generators, flags = self._leaf_traces()
            return ConeDescription(MEASURES_ON_CIRCLE, generators, flags, notes, certificates)

        if a > 0.0:
            densities, exponent = self.component_densities(a, beta)
            return ConeDescription(QUADRANT, densities, notes=["density |z|^%g on each side of Z" % exponent])

        probe = no_extension_probe(beta * abs(a))
        if a == 0.0:
            generators, flags = self._leaf_traces()
            notes = ["traces of Z: a measure on the theta1 circle times d theta2 dy"]
            return ConeDescription(MEASURES_ON_CIRCLE, generators, flags, notes, [probe])

        return ConeDescription(ZERO, certificates=[probe] + z_certificates(zstructure, beta))
