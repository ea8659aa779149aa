#!/usr/bin/env python3
'''
        FILE:  symplectic_plane.py
 DESCRIPTION:  The symplectic plane (R^2, dx ^ dy).  Every Poisson field is
               Hamiltonian, so each cone is a half-line spanned by a Gibbs
               density.

        BUGS:
       NOTES:
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-14
    REVISION:  2021-06-22

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import sys

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

from lib.calculus import DiffForm, ManifoldSpec, MultiVector, volume_form
from lib.catalog import HALF_LINE, CatalogManifold, ConeDescription, ExampleBundle, GridCell
from lib.cohomology import CohomCoords
from lib.expressions import ONE
from lib.functional import RegularDensity, gibbs_density
from lib.poisson import symplectic_poisson

DESCRIPTION = "The symplectic plane (R^2, dx ^ dy); H^1 vanishes and KMS cones are half-lines"

EXAMPLE_DATA = """
example = "symplectic-plane"
beta = 1.0
"""


class SymplecticPlane(CatalogManifold):
    '''
    Catalog class for (R^2, dx ^ dy)
    '''

    coordinate_names = ()
    row_label = '[X]'
    col_label = 'H1'

    def __init__(self):
        super().__init__(name="symplectic-plane", description=DESCRIPTION, example_data=EXAMPLE_DATA)


    def make_example(self):
        manifold = ManifoldSpec(['x', 'y'])
        omega = DiffForm(manifold, 2, {('x', 'y'): ONE})
        poisson = symplectic_poisson(manifold, omega)
        x = manifold.coordinate('x')
        fields = {"gibbs": poisson.hamiltonian_field(x),
                  "modular": poisson.modular_field(volume_form(manifold))}
        return ExampleBundle(self.name, poisson, fields=fields)


    def representative(self, coords):
        return MultiVector(self.manifold, 1, {})


    def class_coords(self, field):
        return CohomCoords(self.name, {})


    def gibbs(self, hamiltonian, beta):
        """
        The generator of KMS(X_h, beta): e^{-beta h} dx dy
        """
        return gibbs_density(self.manifold, hamiltonian, beta)


    def grid(self):
        return [GridCell('0', '0', {})]


    def _classify(self, coords, beta):
        lebesgue = RegularDensity(self.manifold, label='lebesgue')
        notes = ["every Poisson field is Hamiltonian; KMS(X_h, beta) is spanned by e^{-beta h} dx dy"]
        return ConeDescription(HALF_LINE, [lebesgue], notes=notes)
