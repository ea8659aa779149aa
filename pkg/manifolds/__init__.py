'''
        FILE:  __init__.py
 DESCRIPTION:  Catalog manifolds, one CatalogManifold subclass per module.

        BUGS:
       NOTES:
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-14
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import logging

from lib.exceptions import ScenarioError
from lib.utils import get_example_names, is_valid_example


def get_manifold(name, k=None, c=None):
    """
    Build the catalog manifold registered under name.  k is the order of the
    b^k cylinder, c the slope of the 3-torus.
    """

    if not is_valid_example(name):
        logging.error("Unknown example: %s", name)
        raise ScenarioError("unknown example %s, valid examples: %s"
                            % (name, ', '.join(get_example_names())))

    if name == 'symplectic-plane':
        from manifolds.symplectic_plane import SymplecticPlane
        return SymplecticPlane()

    if name in ('half-cylinder', 'b-generic'):
        from manifolds.half_cylinder import HalfCylinder
        return HalfCylinder(name=name)

    if name == 'plane-cosymplectic':
        from manifolds.plane_cosymplectic import PlaneCosymplectic
        return PlaneCosymplectic()

    if name == 'torus3':
        from manifolds.torus3 import Torus3
        return Torus3(c='1/2' if c is None else c)

    if name == 'btorus':
        from manifolds.btorus import BTorus
        return BTorus()

    if name == 'bfourd':
        from manifolds.bfourd import BFourD
        return BFourD()

    if name == 'bk':
        from manifolds.bk_cylinder import BkCylinder
        return BkCylinder(k=2 if k is None else k)

    from manifolds.spiral import Spiral
    return Spiral()
