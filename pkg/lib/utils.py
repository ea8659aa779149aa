#!/usr/bin/env python3
'''
        FILE:  utils.py
 DESCRIPTION:  Contains various utility functions used by the kmscone
               programs.

        BUGS:
       NOTES:
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.2
     CREATED:  2021-06-01
    REVISION:  2021-06-24

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import os
import logging
from os.path import dirname, realpath, join

import sympy

FIXTURE_DIR = join(dirname(dirname(realpath(__file__))), 'fixtures')

THREADS_ENV = 'KMSCONE_THREADS'


################################################################################
def fixture_path(name):
    """
    Path of a bundled fixture file
    """
    return join(FIXTURE_DIR, name)


################################################################################
def is_valid_example(example):
    """
    Returns true if specified example name is valid, else returns false
    """

    return example in get_example_names()


def get_example_names():
    """
    Returns list of valid catalog example names
    """

    valid_examples = ['symplectic-plane', 'half-cylinder', 'b-generic', 'plane-cosymplectic',
                      'torus3', 'btorus', 'bfourd', 'bk', 'spiral']

    return valid_examples


################################################################################
def get_thread_count():
    """
    Worker count for pairing pools, from KMSCONE_THREADS (default 1)
    """

    value = os.environ.get(THREADS_ENV, '1')
    try:
        count = int(value)
    except ValueError:
        logging.warning("Ignoring non-integer %s=%s", THREADS_ENV, value)
        return 1

    return max(1, count)


def parse_constant(text):
    """
    Parse a real parameter given as a float, a fraction p/q or sqrtN into an
    exact sympy number
    """

    text = str(text).strip().replace(' ', '')
    if text.startswith('-'):
        return -parse_constant(text[1:])
    if text.startswith('sqrt'):
        return sympy.sqrt(sympy.Integer(text[4:].strip('()')))

    # decimal strings become exact rationals: '0.5' -> 1/2
    return sympy.Rational(text)


def parse_coords(text):
    """
    '1,-1,0' -> [1.0, -1.0, 0.0]
    """

    if isinstance(text, (list, tuple)):
        return [float(v) for v in text]
    return [float(v) for v in str(text).split(',') if v.strip() != '']


