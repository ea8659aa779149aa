#!/usr/bin/env python3
'''
        FILE:  kmssolve.py
 DESCRIPTION:  Front end for the cohomology solvers: the leafwise transport
               equation on the 3-torus, the spiral equation D_beta g = f,
               class coordinates of a Poisson field and the Diophantine
               approximation of the torus slope.

        BUGS:
       NOTES:  Expressions use the S-expression grammar of
               Docs/conventions.txt, e.g. "(sin (add theta2 theta3))".
               Exit codes: 0 solved, 1 failure, 2 configuration error,
               4 obstructed (the witness is part of the report).
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-22
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

import numpy as np

from lib.calculus import ManifoldSpec, vector_field
from lib.cohomology import (SPIRAL_PLANE, TrigPoly, best_rational_approx, d_beta_expr, exact_constant,
                            spiral_solve_Dbeta, torus_solve_transport, transport_residual)
from lib.exceptions import KmsconeError
from lib.expressions import TWO_PI, parse_sexpr, to_sexpr
from lib.kms_reports import SolverReport
from lib.scenario import (EXIT_OBSTRUCTED, EXIT_PASS, OUTPUT_FORMATS, exit_code_for, write_output)
from lib.utils import get_example_names, parse_coords

TORUS = ManifoldSpec(['theta1', 'theta2', 'theta3'], ['theta1', 'theta2', 'theta3'])

RESIDUAL_POINTS = 20


def solve_transport(parsed_args):
    tau = TrigPoly.from_expr(parse_sexpr(parsed_args.tau, TORUS), TORUS, degree=parsed_args.degree)
    result = torus_solve_transport(parsed_args.c, tau, parsed_args.mode)

    report = SolverReport('transport')
    if getattr(result, 'obstructed', False):
        report.build_report({"c": parsed_args.c, "mode": parsed_args.mode, "tau": parsed_args.tau,
                             "witness": result.to_json()}, obstructed=True)
        return report

    residual = transport_residual(parsed_args.c, result, tau, parsed_args.mode, TORUS)
    logging.info("Transport residual: %g", residual)
    report.build_report({"c": parsed_args.c, "mode": parsed_args.mode, "tau": parsed_args.tau,
                         "g": result.to_json(), "residual": residual})
    return report


def solve_dbeta(parsed_args):
    if parsed_args.f is None and parsed_args.g is None:
        raise ValueError("dbeta needs --f or --g")

    if parsed_args.f is not None:
        f = parse_sexpr(parsed_args.f, SPIRAL_PLANE)
    else:
        f = d_beta_expr(parsed_args.beta, parse_sexpr(parsed_args.g, SPIRAL_PLANE))

    result = spiral_solve_Dbeta(parsed_args.beta, f)
    report = SolverReport('dbeta')
    source = {"beta": parsed_args.beta, "f": to_sexpr(f, SPIRAL_PLANE.coord_names)}
    if getattr(result, 'obstructed', False):
        source["witness"] = result.to_json()
        report.build_report(source, obstructed=True)
        return report

    rng = np.random.default_rng(parsed_args.seed)
    radius = max(result.outer_radius(), 1e-3)
    points = np.column_stack([rng.uniform(-1.2 * radius, 1.2 * radius, RESIDUAL_POINTS),
                              rng.uniform(0.0, TWO_PI, RESIDUAL_POINTS)])
    source.update(result.to_json())
    source["residual"] = result.residual(points)
    source["supportResidual"] = result.support_residual()
    report.build_report(source)
    return report


def solve_coords(parsed_args):
    from manifolds import get_manifold # pylint: disable=import-outside-toplevel

    manifold = get_manifold(parsed_args.example, k=parsed_args.k, c=parsed_args.c)
    if parsed_args.field:
        components = {}
        for item in parsed_args.field.split(';'):
            name, _, text = item.partition('=')
            components[name.strip()] = parse_sexpr(text, manifold.manifold)
        field = vector_field(manifold.manifold, components)
    else:
        field = manifold.representative(parse_coords(parsed_args.coords or ''))

    coords = manifold.class_coords(field)
    report = SolverReport('coords')
    report.build_report({"example": manifold.name, "coords": coords.values, "notes": coords.notes})
    return report


def solve_dioph(parsed_args):
    p, q = best_rational_approx(parsed_args.c, parsed_args.n)
    gap = abs(p - float(exact_constant(parsed_args.c)) * q)
    report = SolverReport('dioph')
    report.build_report({"c": parsed_args.c, "n": parsed_args.n, "p": p, "q": q, "gap": gap,
                         "bound": 1.0 / parsed_args.n, "withinBound": gap <= 1.0 / parsed_args.n + 1e-15})
    return report


SOLVERS = {'transport': solve_transport, 'dbeta': solve_dbeta, 'coords': solve_coords,
           'dioph': solve_dioph}


# -------------------------------------------------------------------------------------
# Main function
# -------------------------------------------------------------------------------------
if __name__ == "__main__":
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbosity', dest='verbosity', default=0, action='count', help='Increase output verbosity, default level: warning')
    common.add_argument('-o', '--out', type=str, metavar='outfile', help='Write the report to the specified file')
    common.add_argument('-f', '--format', type=str, metavar='format', default='json', choices=OUTPUT_FORMATS, help='The format of the report, json, md, default: json')

    parser = argparse.ArgumentParser(description='Run a kmscone cohomology solver')
    subparsers = parser.add_subparsers(dest='solver', required=True)

    transport = subparsers.add_parser('transport', parents=[common], help='Solve (d_2 + c d_3) g = tau or d_1 g = tau on the 3-torus')
    transport.add_argument('--c', type=str, metavar='c', default='sqrt2', help='Torus slope, e.g. 1/2 or sqrt2, default: sqrt2')
    transport.add_argument('--tau', type=str, metavar='tau', required=True, help='Source term over theta1, theta2, theta3')
    transport.add_argument('--mode', type=str, default='leafwise', choices=['leafwise', 'theta1'], help='Which transport operator, default: leafwise')
    transport.add_argument('--degree', type=int, default=16, help='Largest Fourier mode kept, default: 16')

    dbeta = subparsers.add_parser('dbeta', parents=[common], help='Solve x g_x + g_theta + beta g = f on the spiral plane')
    dbeta.add_argument('--beta', type=float, metavar='beta', required=True, help='beta > 0')
    dbeta.add_argument('--f', type=str, metavar='f', help='Source term over x, theta')
    dbeta.add_argument('--g', type=str, metavar='g', help='Round trip: solve with f = D_beta g')
    dbeta.add_argument('--seed', type=int, default=0, help='Seed of the residual sample points, default: 0')

    coords = subparsers.add_parser('coords', parents=[common], help='Class coordinates of a Poisson field')
    coords.add_argument('-e', '--example', type=str, required=True, choices=get_example_names(), help='Catalog example: ' + ', '.join(get_example_names()))
    coords.add_argument('--field', type=str, metavar='field', help='Components "name=expr;name=expr" over the example coordinates')
    coords.add_argument('--coords', type=str, metavar='coords', help='Round trip through the representative of these coordinates')
    coords.add_argument('--k', type=int, metavar='k', help='Order of the b^k plane')
    coords.add_argument('--c', type=str, metavar='c', help='Slope of the 3-torus')

    dioph = subparsers.add_parser('dioph', parents=[common], help='Best approximation p/q of c with q <= n')
    dioph.add_argument('--c', type=str, metavar='c', default='sqrt2', help='The number to approximate, default: sqrt2')
    dioph.add_argument('--n', type=int, metavar='n', required=True, help='Largest denominator')

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
            logging.info("Running solver: %s", parsed_args.solver)
            solver_report = SOLVERS[parsed_args.solver](parsed_args)

        except (KmsconeError, ValueError) as err:
            logging.error(str(err))
            sys.exit(exit_code_for(err))

        write_output(solver_report, parsed_args.out, parsed_args.format)

        if solver_report.obstructed:
            logging.warning("Solver %s is obstructed", parsed_args.solver)
            sys.exit(EXIT_OBSTRUCTED)

        sys.exit(EXIT_PASS)

    except KeyboardInterrupt:
        logging.warning('Interrupted')
        try:
            sys.exit(0)
        except SystemExit:
            os._exit(0) # pylint: disable=protected-access
