#!/usr/bin/env python3
'''
        FILE:  kmsverify.py
 DESCRIPTION:  Classify one cohomology class of a catalog example and run the
               KMS residual of every generator of the cone against seeded
               test pairs.  Writes the verification report to stdout unless
               -o/--out is defined.

        BUGS:
       NOTES:  Exit codes: 0 pass, 1 fail, 2 configuration error,
               3 unknown cell.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-21
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''

import argparse
import os
import sys
import logging

from os.path import dirname, realpath
sys.path.append(dirname(dirname(realpath(__file__))))

from lib.exceptions import KmsconeError
from lib.scenario import (EXIT_FAIL, EXIT_PASS, OUTPUT_FORMATS, exit_code_for, load_scenario,
                          scenario_overrides, write_output)
from lib.utils import get_example_names

# -------------------------------------------------------------------------------------
# Main function
# -------------------------------------------------------------------------------------
if __name__ == "__main__":
    parser = argparse.ArgumentParser(description='Verify the KMS cone of a catalog example')
    parser.add_argument('-v', '--verbosity', dest='verbosity', default=0, action='count', help='Increase output verbosity, default level: warning')
    parser.add_argument('-c', '--config', type=str, metavar='config', help='TOML scenario file, flags override its values')
    parser.add_argument('-e', '--example', type=str, metavar='example', choices=get_example_names(), help='Catalog example: ' + ', '.join(get_example_names()))
    parser.add_argument('--coords', type=str, metavar='coords', help='Class coordinates, comma separated, e.g. 1,-1,0')
    parser.add_argument('-b', '--beta', type=str, metavar='beta', help='Inverse temperature, default: 1')
    parser.add_argument('--seed', type=int, metavar='seed', help='Seed of the test pair family, default: 0')
    parser.add_argument('--pairs', type=int, metavar='pairs', help='Number of test pairs')
    parser.add_argument('--tol', type=float, metavar='tol', help='Override the KMS residual tolerance')
    parser.add_argument('--k', type=int, metavar='k', help='Order of the b^k plane')
    parser.add_argument('--c', type=str, metavar='c', help='Slope of the 3-torus, e.g. 1/2 or sqrt2')
    parser.add_argument('-o', '--out', type=str, metavar='outfile', help='Write the report to the specified file')
    parser.add_argument('-f', '--format', type=str, metavar='format', choices=OUTPUT_FORMATS, help='The format of the report, json, md, default: json')

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
            if len(scenario.betas) > 1:
                logging.warning("Verifying the first of %d beta values", len(scenario.betas))

            logging.info("Verifying %s at %s, beta=%g", manifold.name, scenario.coords, scenario.beta)
            report = manifold.verify(scenario.coords, scenario.beta, pairs=scenario.pairs,
                                     seed=scenario.seed, tolerance=scenario.tol)

        except (KmsconeError, ValueError) as err:
            logging.error(str(err))
            sys.exit(exit_code_for(err))

        if report.cone.is_zero:
            report.cone.add_note("EmptyCone: the KMS cone is {0}, no generators to verify")
            logging.warning("KMS cone of %s at %s is {0}", manifold.name, scenario.coords)

        write_output(report, scenario.out, scenario.format)

        if not report.verified:
            logging.error("Verification failed")
            sys.exit(EXIT_FAIL)

        sys.exit(EXIT_PASS)

    except KeyboardInterrupt:
        logging.warning('Interrupted')
        try:
            sys.exit(0)
        except SystemExit:
            os._exit(0) # pylint: disable=protected-access
