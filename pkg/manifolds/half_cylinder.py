#!/usr/bin/env python3
'''
        FILE:  half_cylinder.py
 DESCRIPTION:  The cylinder R x T with Pi = x d_x ^ d_theta, the local model of
               every b-Poisson manifold near its critical hypersurface
               Z = {x = 0}.  Registered both as half-cylinder and as b-generic.

        BUGS:
       NOTES:  A Poisson field is, up to a Hamiltonian, X = a d_theta + t x d_x
               with a the modular weight on Z and t the class of the closed
               form theta restricted to M_Z.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-15
    REVISION:  2021-06-24

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import sys
import math
import logging

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

import numpy as np

from lib.calculus import ManifoldSpec, MultiVector, field_components, vector_field, volume_form
from lib.catalog import (MEASURES_ON_CIRCLE, QUADRANT, ZERO, CatalogManifold, ConeDescription,
                         ExampleBundle, GridCell, ZStructure, decay_probe, density_exponent,
                         no_extension_probe, z_certificates)
from lib.cohomology import CohomCoords, circle_average, hamiltonian_residual, log_residue
from lib.exceptions import NonPoissonInput
from lib.expressions import ZERO as ZERO_EXPR, const, derive, logabs, mul, neg
from lib.functional import AtomicMixture, LeafPushforward, RegularDensity
from lib.poisson import IDENTITY_TOLERANCE, BStructure, PoissonStructure, sample_points

DESCRIPTION = "The cylinder R x T with Pi = x d_x ^ d_theta and Z = {x = 0}"

EXAMPLE_DATA = """
example = "b-generic"
coords = [1.0, 0.0]
beta = 1.0
"""

# atoms placed on Z for the measures-on-a-circle cells
ATOM_ANGLES = (0.0, 0.5 * math.pi, math.pi)

# window off Z used by the decay probe
DECAY_CENTER = (1.0, math.pi)
DECAY_RADII = (0.4, 1.0)


class HalfCylinder(CatalogManifold):
    '''
    Catalog class for (R x T, x d_x ^ d_theta)
    '''

    coordinate_names = ('a', 't')
    row_label = '[theta]'
    col_label = 'a'

    def __init__(self, name='half-cylinder'):
        super().__init__(name=name, description=DESCRIPTION, example_data=EXAMPLE_DATA)


    def make_example(self):
        manifold = ManifoldSpec(['x', 'theta'], ['theta'])
        x = manifold.coordinate('x')
        poisson = PoissonStructure(manifold, MultiVector(manifold, 2, {('x', 'theta'): x}))
        volume = volume_form(manifold)
        bstructure = BStructure(manifold, poisson.zeta_of(volume), volume)
        fields = {"modular": poisson.modular_field(volume),
                  "radial": vector_field(manifold, {'x': x})}
        return ExampleBundle(self.name, poisson, bstructure=bstructure, fields=fields)


    def representative(self, coords):
        coords = self.normalize_coords(coords)
        x = self.manifold.coordinate('x')
        return vector_field(self.manifold, {'theta': const(coords['a']),
                                            'x': mul(coords['t'], x)})


    def class_coords(self, field):
        """
        a = circle mean of X^theta on Z, t = circle mean of d_x X^x on Z
        """
        manifold = self.manifold
        defect = self.poisson.is_poisson_field(field)
        if defect > IDENTITY_TOLERANCE:
            logging.error("Field is not Poisson (|L_X Pi| = %g)", defect)
            raise NonPoissonInput("|L_X Pi| = %g" % defect)
        comps = field_components(field)
        a = circle_average(comps[manifold.index('theta')], manifold, {'x': 0.0}, 'theta')
        t = circle_average(derive(comps[manifold.index('x')], manifold.index('x')),
                           manifold, {'x': 0.0}, 'theta')
        return CohomCoords(self.name, {"a": a, "t": t})


    def grid(self):
        cells = []
        for row, t in (('trivial', 0.0), ('nontrivial', 1.0)):
            for col, a in (('a>0', 1.0), ('a=0', 0.0), ('a<0', -1.0)):
                cells.append(GridCell(row, col, {"a": a, "t": t}))
        return cells


    def z_structures(self, coords):
        coords = self.normalize_coords(coords)
        circle = ManifoldSpec(['theta'], ['theta'])
        poisson_z = PoissonStructure(circle, MultiVector(circle, 2, {}))
        field_z = vector_field(circle, {'theta': const(coords['a'])})
        return [ZStructure('Z', poisson_z, field_z)]


    def reeb_field(self):
        return self.bundle.fields['modular']


    def reeb_invariant_trace(self):
        return self._circle_lebesgue()


    def _circle_lebesgue(self):
        params = ManifoldSpec(['theta'], ['theta'])
        return LeafPushforward(self.manifold, params, [ZERO_EXPR, params.coordinate('theta')],
                               label='lebesgue on Z')


    def _circle_measures(self):
        atoms = [AtomicMixture(self.manifold, atoms=[((0.0, angle), 1.0)],
                               label='delta(0, %g)' % angle) for angle in ATOM_ANGLES]
        generators = atoms + [self._circle_lebesgue()]
        return generators, [True] * len(atoms) + [False]


    def component_densities(self, a, beta):
        """
        e^{-beta H} on each side of Z with H = -a log|x|; the exponent comes
        from the residue of the Hamiltonian solve
        """
        manifold = self.manifold
        x = manifold.coordinate('x')
        residue, order = log_residue(x, const(a), manifold.index('x'), manifold.dim, 0.0)
        exponent = density_exponent(residue, order, beta)

        hamiltonian = neg(mul(residue, logabs(x)))
        points = sample_points(manifold)
        points = points[np.abs(points[:, 0]) > 0.05]
        residual = hamiltonian_residual(self.poisson, hamiltonian,
                                        vector_field(manifold, {'theta': const(a)}), points)

        densities = [RegularDensity(manifold, singular_factors=[(x, exponent)], region=[(x, sign)],
                                    label=label)
                     for sign, label in ((1.0, 'phi+'), (-1.0, 'phi-'))]
        return densities, exponent, residual


    def _classify(self, coords, beta):
        a, t = coords['a'], coords['t']
        poisson = self.poisson
        field = self.representative(coords)
        certificates = []
        notes = []

        if t != 0.0:
            x = self.manifold.coordinate('x')
            certificates.append(decay_probe(poisson, field, logabs(x), beta, DECAY_CENTER, DECAY_RADII))
            notes.append("theta is not exact on M_Z: functionals vanish off Z")
            on_z = z_certificates(self.z_structures(coords)[0], beta)
            if on_z:
                return ConeDescription(ZERO, certificates=certificates + on_z, notes=notes)
            generators, flags = self._circle_measures()
            notes.append("X vanishes on Z: traces of Z")
            return ConeDescription(MEASURES_ON_CIRCLE, generators, flags, notes, certificates)

        if a > 0.0:
            densities, exponent, residual = self.component_densities(a, beta)
            notes.append("density |x|^%g on each side of Z" % exponent)
            notes.append("hamiltonian residual %.3e" % residual)
            return ConeDescription(QUADRANT, densities, notes=notes)

        probe = no_extension_probe(beta * abs(a))
        if a == 0.0:
            generators, flags = self._circle_measures()
            notes.append("|x|^-1 is not locally integrable: traces of Z")
            return ConeDescription(MEASURES_ON_CIRCLE, generators, flags, notes, [probe])

        certificates.append(probe)
        certificates.extend(z_certificates(self.z_structures(coords)[0], beta))
        return ConeDescription(ZERO, certificates=certificates)
