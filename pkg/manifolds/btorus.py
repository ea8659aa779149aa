#!/usr/bin/env python3
'''
        FILE:  btorus.py
 DESCRIPTION:  The b-Poisson cylinder T x R with Pi = sin(theta) d_theta ^ d_y.
               Z has two components, the lines {theta = 0} and {theta = pi},
               and M_Z has two strips.

        BUGS:
       NOTES:  Classes are X = b(theta) d_y with
               b = b0 psi0 + bpi psipi - c sin(theta).  The local weights are
               read from the residues of the Hamiltonian solve, so
               a0 = b0 and api = -bpi.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-16
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import sys
import math
import logging

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

import numpy as np

from lib.calculus import ManifoldSpec, MultiVector, vector_field, volume_form
from lib.catalog import (MEASURES_ON_LINE, QUADRANT, ZERO, CatalogManifold, ConeDescription,
                         ExampleBundle, GridCell, ZStructure, density_exponent, no_extension_probe,
                         z_certificates)
from lib.cohomology import (btorus_class_coords, hamiltonian_residual, log_residue, psi_pi, psi_zero,
                            snap_zero)
from lib.expressions import add, const, cos, eval_at, exp, logabs, mul, sin
from lib.functional import AtomicMixture, LeafPushforward, RegularDensity, SumFunctional
from lib.poisson import BStructure, PoissonStructure, sample_points

DESCRIPTION = "The b-Poisson cylinder T x R with Pi = sin(theta) d_theta ^ d_y"

EXAMPLE_DATA = """
example = "btorus"
coords = [1.0, -1.0, 0.0]
beta = 1.0
"""

# Z components: label and angle of the line
Z_LINES = (('Z0', 0.0), ('Zpi', math.pi))

# M_Z components: label and angle window of the strip
STRIPS = (('phi+', (0.0, math.pi)), ('phi-', (math.pi, 2.0 * math.pi)))

ATOM_HEIGHTS = (-0.5, 0.0, 0.5)


class BTorus(CatalogManifold):
    '''
    Catalog class for (T x R, sin(theta) d_theta ^ d_y)
    '''

    coordinate_names = ('b0', 'bpi', 'c')
    row_label = '[theta]'
    col_label = 'a'

    def __init__(self):
        super().__init__(name="btorus", description=DESCRIPTION, example_data=EXAMPLE_DATA)


    def make_example(self):
        manifold = ManifoldSpec(['theta', 'y'], ['theta'])
        theta = manifold.coordinate('theta')
        poisson = PoissonStructure(manifold, MultiVector(manifold, 2, {('theta', 'y'): sin(theta)}))
        volume = volume_form(manifold)
        bstructure = BStructure(manifold, poisson.zeta_of(volume), volume)
        fields = {"modular": poisson.modular_field(volume)}
        return ExampleBundle(self.name, poisson, bstructure=bstructure, fields=fields)


    def _b_expr(self, coords):
        manifold = self.manifold
        theta = manifold.coordinate('theta')
        return add(mul(coords['b0'], psi_zero(manifold)), mul(coords['bpi'], psi_pi(manifold)),
                   mul(-coords['c'], sin(theta)))


    def representative(self, coords):
        coords = self.normalize_coords(coords)
        return vector_field(self.manifold, {'y': self._b_expr(coords)})


    def class_coords(self, field):
        return btorus_class_coords(self.poisson, field)


    def grid(self):
        cells = []
        for row, c in (('trivial', 0.0), ('nontrivial', 1.0)):
            for col, a in (('a>0', 1.0), ('a=0', 0.0), ('a<0', -1.0)):
                cells.append(GridCell(row, col, {"b0": a, "bpi": -a, "c": c}))
        return cells


    def local_weights(self, coords):
        """
        Residues of H_theta = -b/sin(theta) at the two Z lines
        """
        manifold = self.manifold
        b = self._b_expr(coords)
        index = manifold.index('theta')
        sine = sin(manifold.coordinate('theta'))
        return [log_residue(sine, b, index, manifold.dim, angle) for _, angle in Z_LINES]


    def hamiltonian(self, coords):
        """
        H with X_H = X on M_Z:
        H = -b0 log|sin(theta/2)| + bpi log|cos(theta/2)| + c theta
        """
        half = mul(0.5, self.manifold.coordinate('theta'))
        return add(mul(-coords['b0'], logabs(sin(half))), mul(coords['bpi'], logabs(cos(half))),
                   mul(coords['c'], self.manifold.coordinate('theta')))


    def z_structures(self, coords):
        coords = self.normalize_coords(coords)
        line = ManifoldSpec(['y'])
        poisson_z = PoissonStructure(line, MultiVector(line, 2, {}))
        b = self._b_expr(coords)
        structures = []
        for label, angle in Z_LINES:
            value = snap_zero(eval_at(b, [angle, 0.0]))
            structures.append(ZStructure(label, poisson_z, vector_field(line, {'y': const(value)})))
        return structures


    def reeb_field(self):
        return self.bundle.fields['modular']


    def reeb_invariant_trace(self):
        lines = [(self._line_lebesgue(angle, label), 1.0) for label, angle in Z_LINES]
        return SumFunctional(lines, label='dy on Z')


    def _line_lebesgue(self, angle, label):
        params = ManifoldSpec(['y'])
        return LeafPushforward(self.manifold, params, [const(angle), params.coordinate('y')],
                               label='lebesgue on %s' % label)


    def component_densities(self, coords, beta):
        """
        e^{-beta H}/|sin(theta)| on each strip.  Returns the densities with the
        exponents at theta = 0 and theta = pi and the residual of the
        Hamiltonian solve.
        """
        manifold = self.manifold
        theta = manifold.coordinate('theta')
        (a_zero, order_zero), (a_pi, order_pi) = self.local_weights(coords)
        exponent_zero = density_exponent(a_zero, order_zero, beta)
        exponent_pi = density_exponent(a_pi, order_pi, beta)

        points = sample_points(manifold)
        points = points[np.abs(np.sin(points[:, 0])) > 0.05]
        residual = hamiltonian_residual(self.poisson, self.hamiltonian(coords),
                                        self.representative(coords), points)

        # psipi and psi0 vanish to second order at 0 and pi
        factors = [(psi_pi(manifold), 0.5 * exponent_zero), (psi_zero(manifold), 0.5 * exponent_pi)]
        base = exp(mul(-beta * coords['c'], theta))
        densities = [RegularDensity(manifold, base, factors, angle_windows={'theta': window}, label=label)
                     for label, window in STRIPS]
        return densities, (exponent_zero, exponent_pi), residual


    def _line_measures(self, labels):
        generators, flags = [], []
        for label, angle in Z_LINES:
            if label not in labels:
                continue
            for height in ATOM_HEIGHTS:
                generators.append(AtomicMixture(self.manifold, atoms=[((angle, height), 1.0)],
                                                label='delta(%g, %g)' % (angle, height)))
                flags.append(True)
            generators.append(self._line_lebesgue(angle, label))
            flags.append(False)
        return generators, flags


    def _classify(self, coords, beta):
        weights = [weight for weight, _ in self.local_weights(coords)]
        notes = ["local weights a0=%g, api=%g" % tuple(weights)]

        if all(weight > 0.0 for weight in weights):
            densities, exponents, residual = self.component_densities(coords, beta)
            notes.append("density exponents %g at theta=0 and %g at theta=pi" % exponents)
            notes.append("hamiltonian residual %.3e" % residual)
            notes.append("the Hamiltonian solve gives +bpi log|cos(theta/2)|; the exponent at pi is "
                         "beta*api - 1 with api = -bpi")
            return ConeDescription(QUADRANT, densities, notes=notes)

        resting = [label for (label, _), weight in zip(Z_LINES, weights) if weight == 0.0]
        if resting:
            generators, flags = self._line_measures(resting)
            certificates = [no_extension_probe(0.0)]
            for structure in self.z_structures(coords):
                if structure.label not in resting:
                    certificates.extend(z_certificates(structure, beta))
            notes.append("traces of the Z lines %s" % ', '.join(resting))
            logging.debug("BTorus cell %s rests on %s", coords, resting)
            return ConeDescription(MEASURES_ON_LINE, generators, flags, notes, certificates)

        certificates = [no_extension_probe(-beta * min(weights))]
        for structure in self.z_structures(coords):
            certificates.extend(z_certificates(structure, beta))
        return ConeDescription(ZERO, notes=notes, certificates=certificates)
