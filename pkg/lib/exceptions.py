#!/usr/bin/env python3
'''
        FILE:  exceptions.py
 DESCRIPTION:  Exceptions raised by the kmscone library.

        BUGS:
       NOTES:  Obstructed and NotInRange are results, not errors.  They live in
               lib/cohomology.py.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-01
    REVISION:  2021-06-01

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''


class KmsconeError(Exception):
    """
    Base class for every error raised by kmscone
    """


# calculus
class SingularEvaluation(KmsconeError):
    """
    A negative power or log-abs node was evaluated at its zero
    """


class DegreeMismatch(KmsconeError):
    """
    Wedge/contraction degrees are incompatible
    """


class DegenerateVolume(KmsconeError):
    """
    A top form vanishes at a sampled point
    """


# poisson / complexes
class DegreeTooHigh(KmsconeError):
    """
    Multivector degree above what the differential supports
    """


class FlatNotInvertible(KmsconeError):
    """
    The cosymplectic flat map is singular at a sampled point
    """


class ZetaDegenerate(KmsconeError):
    """
    The Z-defining function has a vanishing differential on Z
    """


class NotCosymplectic(KmsconeError):
    """
    The example has no cosymplectic (sub)structure
    """


# functional
class NonIntegrable(KmsconeError):
    """
    A singular factor with exponent <= -1 meets the support of the integrand
    """

    def __init__(self, zeta, exponent):
        self.zeta = zeta
        self.exponent = exponent
        super().__init__("density |%s|^%g is not locally integrable" % (zeta, exponent))


class QuadratureNotConverged(KmsconeError):
    """
    Adaptive quadrature hit its cell budget before reaching tolerance.
    `partial` holds the estimate reached so far (a QuadResult) when known.
    """

    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class FlowEscaped(KmsconeError):
    """
    A trajectory left the declared bounding box
    """


# cohomology
class SmallDivisorGuard(KmsconeError):
    """
    A Fourier divisor p + c*q is numerically resonant
    """


class NonPoissonInput(KmsconeError):
    """
    The vector field handed to a class-coordinate map is not Poisson
    """


class NonConstantBoundary(KmsconeError):
    """
    b(0,y) or b(pi,y) varies in y
    """


# catalog
class EmptyCone(KmsconeError):
    """
    The requested cell has no nonzero KMS functional
    """


class UnknownCell(KmsconeError):
    """
    Parameters outside the declared classification grid
    """


# cli
class ScenarioError(KmsconeError):
    """
    Malformed or unknown scenario keys
    """
