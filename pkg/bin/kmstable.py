#!/usr/bin/env python3
'''
        FILE:  kmstable.py
 DESCRIPTION:  Render the classification table of a catalog example and diff
               it against the bundled fixture in fixtures/.

        BUGS:
       NOTES:  The fixture defaults to fixtures/<example>.md, with the b^k
               order or the torus slope appended when they differ from the
               defaults (fixtures/torus3-sqrt2.md).  Exit codes: 0 table
               matches, 1 table differs, 2 configuration error, 3 unknown
               cell.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-22
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import argparse
import difflib
import os
import sys
import logging

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

from lib.exceptions import KmsconeError
from lib.scenario import (EXIT_FAIL, EXIT_PASS, OUTPUT_FORMATS, exit_code_for, load_scenario,
                          scenario_overrides, write_output)
from lib.utils import fixture_path, get_example_names

DEFAULT_K = 2
DEFAULT_C = '1/2'


def default_fixture(scenario):
    """
    fixtures/<example>[-k<k>][-<c>].md
    """
    name = scenario.example
    if scenario.k is not None and scenario.k != DEFAULT_K:
        name += '-k%d' % scenario.k
    if scenario.c is not None and str(scenario.c).replace(' ', '') != DEFAULT_C:
        name += '-' + str(scenario.c).replace('/', '_').replace(' ', '')
    return fixture_path(name + '.md')


# -------------------------------------------------------------------------------------
# Main function
# -------------------------------------------------------------------------------------
if __name__ == "__main__":
    parser = argparse.ArgumentParser(description='Render and check the classification table of a catalog example')
    parser.add_argument('-v', '--verbosity', dest='verbosity', default=0, action='count', help='Increase output verbosity, default level: warning')
    parser.add_argument('-c', '--config', type=str, metavar='config', help='TOML scenario file, flags override its values')
    parser.add_argument('-e', '--example', type=str, metavar='example', choices=get_example_names(), help='Catalog example: ' + ', '.join(get_example_names()))
    parser.add_argument('-b', '--beta', type=str, metavar='beta', help='Inverse temperature for cells without their own, default: 1')
    parser.add_argument('--k', type=int, metavar='k', help='Order of the b^k plane')
    parser.add_argument('--c', type=str, metavar='c', help='Slope of the 3-torus, e.g. 1/2 or sqrt2')
    parser.add_argument('--fixture', type=str, metavar='fixture', help='Expected table, default: fixtures/<example>.md')
    parser.add_argument('-n', '--no-diff', dest='no_diff', action='store_true', help='Skip the comparison with the fixture')
    parser.add_argument('-o', '--out', type=str, metavar='outfile', help='Write the table to the specified file')
    parser.add_argument('-f', '--format', type=str, metavar='format', choices=OUTPUT_FORMATS, default='md', help='The format of the table, json, md, default: md')

    parsed_args = parser.parse_args()

    ############################
    # Set up logging before we do any other argument parsing (so that we
    # can log problems with argument parsing).

    LOGGING_FORMAT = '%(asctime)-15s %(levelname)s - %(message)s'
    logging.basicConfig(format=LOGGING_FORMAT)

    LOG_LEVELS = {0: logging.WARNING, 1: logging.INFO, 2: logging.DEBUG}
    parsed_args.verbosity = min(parsed_args.verbosity, max(LOG_LEVELS))
    logging.getLogger().setLevel(LOG_LEVELS[parsed_args.verbosity])

    try:

        try:
            scenario = load_scenario(parsed_args.config, scenario_overrides(parsed_args))
            manifold = scenario.manifold()
            logging.info("Building the classification table of %s", manifold.name)
            table = manifold.table(scenario.beta)

        except (KmsconeError, ValueError) as err:
            logging.error(str(err))
            sys.exit(exit_code_for(err))

        write_output(table, scenario.out, scenario.format)

        if parsed_args.no_diff:
            sys.exit(EXIT_PASS)

        fixture = parsed_args.fixture or default_fixture(scenario)
        if not os.path.isfile(fixture):
            logging.warning("No fixture to compare against: %s", fixture)
            sys.exit(EXIT_PASS)

        logging.info("Comparing against fixture: %s", fixture)
        with open(fixture, 'r') as fixture_file:
            expected = fixture_file.read()

        rendered = table.to_markdown()
        if rendered != expected:
            diff = difflib.unified_diff(expected.splitlines(keepends=True), rendered.splitlines(keepends=True),
                                        fromfile=fixture, tofile='computed')
            sys.stderr.write(''.join(diff))
            logging.error("Table of %s differs from %s", manifold.name, fixture)
            sys.exit(EXIT_FAIL)

        sys.exit(EXIT_PASS)

    except KeyboardInterrupt:
        logging.warning('Interrupted')
        try:
            sys.exit(0)
        except SystemExit:
            os._exit(0) # pylint: disable=protected-access
