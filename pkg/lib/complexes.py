#!/usr/bin/env python3
'''
        FILE:  complexes.py
 DESCRIPTION:  Twisted Poisson homology boundary on forms, twisted Lichnerowicz
               coboundary on multivectors, and the volume pairing between
               them.

        BUGS:
       NOTES:  delta_beta = d i_Pi - i_Pi d - beta i_X
               d_beta     = d_Pi - beta X ^ .
               For a k-vector V and a volume form mu with Y_mu = 0 and
               L_X mu = 0:  delta_beta(i_V mu) = (-1)^k i_{d_beta V} mu.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-03
    REVISION:  2021-06-18

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import logging

from lib.calculus import DiffForm, wedge, contract, exterior_d, check_volume
from lib.exceptions import DegreeMismatch, DegreeTooHigh
from lib.poisson import IDENTITY_TOLERANCE, sample_points

# delta_beta(i_V mu) = INTERTWINING_SIGN**k * i_{d_beta V} mu for k-vectors V
INTERTWINING_SIGN = -1

MAX_MULTIVECTOR_DEGREE = 2


class TwistData():
    """
    The pair (X, beta) of a KMS condition on a Poisson manifold.  beta = 0
    encodes Poisson traces.
    """

    def __init__(self, poisson, field, beta):
        if beta < 0:
            raise ValueError("beta must be non-negative, got %g" % beta)
        self._poisson = poisson
        self._field = field
        self._beta = float(beta)


    @property
    def poisson(self):
        '''
        Getter function for self._poisson
        '''
        return self._poisson


    @property
    def field(self):
        '''
        Getter function for self._field
        '''
        return self._field


    @property
    def beta(self):
        '''
        Getter function for self._beta
        '''
        return self._beta


    def check_poisson_field(self):
        residual = self._poisson.is_poisson_field(self._field)
        if residual > IDENTITY_TOLERANCE:
            logging.warning("X is not a Poisson vector field (residual %g); "
                            "d_beta is not nilpotent", residual)
        return residual


def _interior(vector, form):
    # i_V w vanishes when deg V > deg w
    if vector.degree > form.degree:
        return None
    return contract(vector, form)


def delta_beta(twist, form):
    """
    d i_Pi w - i_Pi d w - beta i_X w; lowers the degree by one
    """
    if form.degree < 1:
        raise DegreeMismatch("delta_beta needs a form of degree >= 1")

    manifold = form.manifold
    result = DiffForm(manifold, form.degree - 1, {})

    inner = _interior(twist.poisson.pi, form)
    if inner is not None:
        result = result + exterior_d(inner)

    outer = _interior(twist.poisson.pi, exterior_d(form))
    if outer is not None:
        result = result - outer

    if twist.beta:
        result = result - contract(twist.field, form).scale(twist.beta)
    return result


def d_beta(twist, multivector):
    """
    d_Pi V - beta X ^ V; raises the degree by one
    """
    if multivector.degree > MAX_MULTIVECTOR_DEGREE:
        raise DegreeTooHigh("d_beta supports degrees 0..%d" % MAX_MULTIVECTOR_DEGREE)

    result = twist.poisson.schouten_d(multivector)
    if twist.beta:
        result = result - wedge(twist.field, multivector).scale(twist.beta)
    return result


def volume_pairing(multivector, volume):
    """
    V -> i_V mu
    """
    check_volume(volume)
    return contract(multivector, volume)


def intertwining_sign(degree):
    return INTERTWINING_SIGN ** degree


def intertwining_residual(twist, multivector, volume, points=None):
    """
    Sampled sup of delta_beta(i_V mu) - (+/-) i_{d_beta V} mu
    """
    points = sample_points(volume.manifold) if points is None else points
    left = delta_beta(twist, volume_pairing(multivector, volume))
    right = volume_pairing(d_beta(twist, multivector), volume).scale(intertwining_sign(multivector.degree))
    return (left - right).max_abs(points)


def delta_squared_residual(twist, form, points=None):
    points = sample_points(form.manifold) if points is None else points
    once = delta_beta(twist, form)
    if once.degree < 1:
        return 0.0
    return delta_beta(twist, once).max_abs(points)


def d_squared_residual(twist, multivector, points=None):
    points = sample_points(multivector.manifold) if points is None else points
    return d_beta(twist, d_beta(twist, multivector)).max_abs(points)
