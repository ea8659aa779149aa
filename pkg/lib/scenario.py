#!/usr/bin/env python3
'''
        FILE:  scenario.py
 DESCRIPTION:  Scenario loading for the kmscone programs.  A scenario names a
               catalog example, its parameters, the class coordinates and the
               beta values to run, plus per-command options.

        BUGS:
       NOTES:  Scenario files are TOML.  Command-line flags override file
               values; keys the file does not set fall back to the defaults
               below.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-20
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import sys
import logging
try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

from lib.catalog import CLASSIFY_PAIRS, TABLE_BETA
from lib.exceptions import ScenarioError, UnknownCell
from lib.kms_reports import dumps_json
from lib.functional import DEFAULT_SEED
from lib.utils import get_example_names, is_valid_example, parse_constant, parse_coords

SCENARIO_KEYS = ['example', 'k', 'c', 'coords', 'beta', 'seed', 'pairs', 'tol', 'out', 'format']

OUTPUT_FORMATS = ['json', 'md']

DEFAULTS = {
    'k': None,
    'c': None,
    'coords': None,
    'beta': TABLE_BETA,
    'seed': DEFAULT_SEED,
    'pairs': CLASSIFY_PAIRS,
    'tol': None,
    'out': None,
    'format': 'json',
}


class Scenario():
    '''
    Class for a single scenario: one example, one set of class coordinates,
    one or more beta values
    '''

    def __init__(self, values=None):
        values = dict(values or {})
        unknown = sorted(set(values) - set(SCENARIO_KEYS))
        if unknown:
            raise ScenarioError("unknown scenario keys: %s" % ', '.join(unknown))

        merged = dict(DEFAULTS)
        merged.update({key: value for key, value in values.items() if value is not None})

        self._example = merged.get('example')
        self._k = self._check_int(merged, 'k')
        self._c = merged['c']
        self._coords = None if merged['coords'] is None else self._check_coords(merged['coords'])
        self._betas = self._check_betas(merged['beta'])
        self._seed = self._check_int(merged, 'seed')
        self._pairs = self._check_int(merged, 'pairs')
        self._tol = None if merged['tol'] is None else self._check_float(merged['tol'], 'tol')
        self._out = merged['out']
        self._format = merged['format']

        if self._example is not None and not is_valid_example(self._example):
            raise ScenarioError("unknown example '%s', valid examples: %s"
                                % (self._example, ', '.join(get_example_names())))
        if self._format not in OUTPUT_FORMATS:
            raise ScenarioError("format must be one of %s, got '%s'" % (OUTPUT_FORMATS, self._format))
        if self._pairs is not None and self._pairs < 1:
            raise ScenarioError("pairs must be positive, got %d" % self._pairs)
        if self._c is not None:
            try:
                parse_constant(self._c)
            except Exception as err:
                raise ScenarioError("unreadable constant c = '%s'" % self._c) from err


    @staticmethod
    def _check_int(values, key):
        value = values.get(key)
        if value is None:
            return None
        if isinstance(value, bool):
            raise ScenarioError("%s must be an integer, got %r" % (key, value))
        try:
            return int(value)
        except (TypeError, ValueError) as err:
            raise ScenarioError("%s must be an integer, got %r" % (key, value)) from err


    @staticmethod
    def _check_float(value, key):
        try:
            return float(value)
        except (TypeError, ValueError) as err:
            raise ScenarioError("%s must be a number, got %r" % (key, value)) from err


    def _check_coords(self, value):
        try:
            return parse_coords(value)
        except (TypeError, ValueError) as err:
            raise ScenarioError("coords must be a list of numbers, got %r" % (value,)) from err


    def _check_betas(self, value):
        if isinstance(value, (list, tuple)):
            betas = [self._check_float(v, 'beta') for v in value]
        elif isinstance(value, str):
            betas = [self._check_float(v, 'beta') for v in value.split(',') if v.strip() != '']
        else:
            betas = [self._check_float(value, 'beta')]
        if not betas:
            raise ScenarioError("beta must not be empty")
        return betas


    @property
    def example(self):
        '''
        Getter function for self._example
        '''
        return self._example


    @property
    def k(self):
        '''
        Getter function for self._k
        '''
        return self._k


    @property
    def c(self):
        '''
        Getter function for self._c
        '''
        return self._c


    @property
    def coords(self):
        '''
        Getter function for self._coords
        '''
        return self._coords


    @property
    def betas(self):
        '''
        Getter function for self._betas
        '''
        return self._betas


    @property
    def beta(self):
        """
        The first beta of the scenario
        """
        return self._betas[0]


    @property
    def seed(self):
        '''
        Getter function for self._seed
        '''
        return self._seed


    @property
    def pairs(self):
        '''
        Getter function for self._pairs
        '''
        return self._pairs


    @property
    def tol(self):
        '''
        Getter function for self._tol
        '''
        return self._tol


    @property
    def out(self):
        '''
        Getter function for self._out
        '''
        return self._out


    @property
    def format(self):
        '''
        Getter function for self._format
        '''
        return self._format


    def require_example(self):
        if self._example is None:
            raise ScenarioError("no example given, valid examples: %s" % ', '.join(get_example_names()))
        return self._example


    def manifold(self):
        """
        The catalog manifold this scenario names
        """
        from manifolds import get_manifold # pylint: disable=import-outside-toplevel
        return get_manifold(self.require_example(), k=self._k, c=self._c)


    def to_json(self):
        return {"example": self._example, "k": self._k, "c": None if self._c is None else str(self._c),
                "coords": self._coords, "beta": self._betas, "seed": self._seed, "pairs": self._pairs,
                "tol": self._tol}


def read_scenario_file(path):
    """
    Raw key/value table of a TOML scenario file
    """
    logging.debug("Reading scenario file: %s", path)
    try:
        with open(path, 'rb') as scenario_file:
            return tomllib.load(scenario_file)
    except FileNotFoundError as err:
        logging.error("Scenario file not found: %s", path)
        raise ScenarioError("scenario file not found: %s" % path) from err
    except tomllib.TOMLDecodeError as err:
        logging.error("Unable to parse scenario file: %s", path)
        logging.error(str(err))
        raise ScenarioError("malformed scenario file %s: %s" % (path, err)) from err


def load_scenario(path=None, overrides=None):
    """
    Build a Scenario from an optional file with flag overrides on top.
    Overrides set to None leave the file value in place.
    """
    values = read_scenario_file(path) if path else {}
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return Scenario(values)


def scenario_overrides(parsed_args):
    """
    The scenario keys an argparse namespace carries
    """
    return {key: getattr(parsed_args, key, None) for key in SCENARIO_KEYS}


################################################################################
# Exit codes and output shared by the bin scripts
################################################################################
EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2
EXIT_UNKNOWN_CELL = 3
EXIT_OBSTRUCTED = 4


def exit_code_for(err):
    """
    Exit code for an exception escaping a command
    """
    if isinstance(err, UnknownCell):
        return EXIT_UNKNOWN_CELL
    if isinstance(err, (ScenarioError, ValueError)):
        return EXIT_CONFIG
    return EXIT_FAIL


def write_output(report, out=None, output_format='json'):
    """
    Send a report to the out file, or stdout when no file is given
    """
    if output_format == 'json':
        text = dumps_json(report.to_json()) + '\n'
    elif hasattr(report, 'to_markdown'):
        text = report.to_markdown()
    else:
        text = str(report) + '\n'

    if not out:
        sys.stdout.write(text)
        return

    logging.info("Saving report to %s in %s format", out, output_format)
    try:
        with open(out, 'w') as out_file:
            out_file.write(text)
    except IOError:
        logging.error("Error saving report file: %s", out)
        raise
