#!/usr/bin/env python3
'''
        FILE:  bk_cylinder.py
 DESCRIPTION:  The b^k plane R^2 with Pi = z^k d_z ^ d_y.  The modular class
               s k z^(k-1) d_y shows a phase transition at beta s = (k-1)/k.

        BUGS:
       NOTES:  For k = 1 this is the b-Poisson plane with zeta = z.
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
import logging

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

from lib.calculus import ManifoldSpec, MultiVector, field_components, vector_field, volume_form
from lib.catalog import (MEASURES_ON_LINE, QUADRANT, ZERO, CatalogManifold, ConeDescription,
                         ExampleBundle, GridCell, ZStructure, density_exponent, no_extension_probe,
                         z_certificates)
from lib.cohomology import CohomCoords, log_residue
from lib.exceptions import NotCosymplectic, ScenarioError
from lib.expressions import ZERO as ZERO_EXPR, const, derive, eval_at, mul, power
from lib.functional import AtomicMixture, LeafPushforward, RegularDensity, integrability_scan
from lib.poisson import BStructure, PoissonStructure

DESCRIPTION = "The b^k plane R^2 with Pi = z^k d_z ^ d_y"

EXAMPLE_DATA = """
example = "bk"
k = 2
coords = [1.0]
beta = 0.75
"""

TABLE_BETAS = (0.25, 0.5, 0.75, 1.0, 2.0)

ATOM_HEIGHTS = (-0.5, 0.0, 0.5)

BOUNDARY_TOLERANCE = 1e-12


class BkCylinder(CatalogManifold):
    '''
    Catalog class for (R^2, z^k d_z ^ d_y)
    '''

    coordinate_names = ('s',)
    row_label = '[X]'
    col_label = 'beta'

    def __init__(self, k=2):
        k = int(k)
        if k < 1:
            raise ScenarioError("the b^k plane needs k >= 1, got %d" % k)
        self._k = k
        super().__init__(name="bk", description=DESCRIPTION, example_data=EXAMPLE_DATA)


    @property
    def k(self):
        '''
        Getter function for self._k
        '''
        return self._k


    def parameters(self):
        return {"k": self._k}


    def make_example(self):
        manifold = ManifoldSpec(['z', 'y'])
        z = manifold.coordinate('z')
        poisson = PoissonStructure(manifold, MultiVector(manifold, 2, {('z', 'y'): power(z, self._k)}))
        volume = volume_form(manifold)
        bstructure = BStructure(manifold, z, volume) if self._k == 1 else None
        fields = {"modular": poisson.modular_field(volume)}
        return ExampleBundle(self.name, poisson, bstructure=bstructure, fields=fields)


    def representative(self, coords):
        coords = self.normalize_coords(coords)
        z = self.manifold.coordinate('z')
        return vector_field(self.manifold,
                            {'y': mul(coords['s'] * self._k, power(z, self._k - 1))})


    def class_coords(self, field):
        """
        s = d_z^(k-1) X^y (0, y) / k!
        """
        index = self.manifold.index('z')
        top = field_components(field)[self.manifold.index('y')]
        for _ in range(self._k - 1):
            top = derive(top, index)
        return CohomCoords(self.name, {"s": eval_at(top, [0.0, 0.0]) / math.factorial(self._k)})


    def grid(self):
        return [GridCell('modular', '%g' % beta, {"s": 1.0}, beta) for beta in TABLE_BETAS]


    def critical_beta(self, s=1.0):
        """
        beta s = (k - 1)/k separates densities from measures on Z
        """
        return (self._k - 1) / (self._k * s)


    def z_structures(self, coords):
        coords = self.normalize_coords(coords)
        line = ManifoldSpec(['y'])
        value = coords['s'] if self._k == 1 else 0.0
        return [ZStructure('Z', PoissonStructure(line, MultiVector(line, 2, {})),
                           vector_field(line, {'y': const(value)}))]


    def reeb_field(self):
        if self._k != 1:
            raise NotCosymplectic("Z of the b^%d plane carries no cosymplectic structure" % self._k)
        return self.bundle.fields['modular']


    def reeb_invariant_trace(self):
        self.reeb_field()
        return self._line_lebesgue()


    def _line_lebesgue(self):
        params = ManifoldSpec(['y'])
        return LeafPushforward(self.manifold, params, [ZERO_EXPR, params.coordinate('y')],
                               label='lebesgue on Z')


    def would_be_density(self, s, beta):
        """
        e^{-beta H}/|z|^k with H = -s k log|z|; integrable or not
        """
        manifold = self.manifold
        z = manifold.coordinate('z')
        transverse = mul(s * self._k, power(z, self._k - 1))
        residue, order = log_residue(power(z, self._k), transverse, manifold.index('z'), manifold.dim, 0.0)
        exponent = density_exponent(residue, order, beta)
        return RegularDensity(manifold, singular_factors=[(z, exponent)], label='|z|^%g' % exponent), exponent


    def _classify(self, coords, beta):
        s = coords['s']
        z = self.manifold.coordinate('z')
        density, exponent = self.would_be_density(s, beta)
        notes = ["density exponent %g" % exponent]

        if exponent > -1.0 and s > 0.0:
            densities = [RegularDensity(self.manifold, singular_factors=[(z, exponent)],
                                        region=[(z, sign)], label=label)
                         for sign, label in ((1.0, 'phi+'), (-1.0, 'phi-'))]
            return ConeDescription(QUADRANT, densities, notes=notes)

        scan = integrability_scan(density)
        notes.append("integrability: %s" % scan.to_json())
        if abs(exponent + 1.0) < BOUNDARY_TOLERANCE:
            notes.append("boundary cell: beta s = (k-1)/k exactly")
            logging.info("b^%d plane at the critical beta %g", self._k, beta)

        certificates = [no_extension_probe(max(-1.0 - exponent, 0.0))]
        on_z = z_certificates(self.z_structures(coords)[0], beta)
        if on_z:
            return ConeDescription(ZERO, notes=notes, certificates=certificates + on_z)

        generators = [AtomicMixture(self.manifold, atoms=[((0.0, height), 1.0)],
                                    label='delta(0, %g)' % height) for height in ATOM_HEIGHTS]
        generators.append(self._line_lebesgue())
        flags = [True] * len(ATOM_HEIGHTS) + [False]
        return ConeDescription(MEASURES_ON_LINE, generators, flags, notes, certificates)
