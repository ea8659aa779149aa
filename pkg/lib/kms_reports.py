#!/usr/bin/env python3
'''
        FILE:  kms_reports.py
 DESCRIPTION:  Report classes produced by the kmscone programs: KMS residual
               reports, classification reports, classification tables and
               solver reports, plus the JSON encoder they share.

        BUGS:
       NOTES:  Reports carry no timestamps so identical scenarios produce
               byte-identical JSON.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-07
    REVISION:  2021-06-24

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import json
import logging

import numpy as np
import pandas as pd

SCHEMA = 'kmscone/1'

PAIR_COLS = ['lhs', 'rhs', 'residual', 'quad_err', 'scale']

VERDICT_PASS = 'pass'
VERDICT_FAIL = 'fail'
VERDICT_INCONCLUSIVE = 'inconclusive'


class NpEncoder(json.JSONEncoder):
    """
    Custom JSON string encoder used to deal with NumPy arrays
    """

    def default(self, obj): # pylint: disable=arguments-differ

        if isinstance(obj, np.integer):
            return int(obj)

        if isinstance(obj, np.floating):
            return float(obj)

        if isinstance(obj, np.bool_):
            return bool(obj)

        if isinstance(obj, np.ndarray):
            return obj.tolist()

        if isinstance(obj, complex):
            return [obj.real, obj.imag]

        if hasattr(obj, 'to_json'):
            return obj.to_json()

        return super().default(obj)


def dump_json(obj, fileobj):
    json.dump(obj, fileobj, indent=2, cls=NpEncoder, sort_keys=False)
    fileobj.write('\n')


def dumps_json(obj):
    return json.dumps(obj, indent=2, cls=NpEncoder)


class KmsReport():
    """
    Class for building KMS residual reports
    """

    def __init__(self, scenario, seed, tolerance):
        self._scenario = scenario
        self._seed = seed
        self._tolerance = tolerance
        self._pairs = pd.DataFrame(columns=PAIR_COLS)
        self._max_residual = None
        self._mean_residual = None
        self._max_quad_err = None
        self._verdict = None
        self._notes = []


    @property
    def scenario(self):
        '''
        Getter function for self._scenario
        '''
        return self._scenario


    @property
    def seed(self):
        '''
        Getter function for self._seed
        '''
        return self._seed


    @property
    def tolerance(self):
        '''
        Getter function for self._tolerance
        '''
        return self._tolerance


    @property
    def pairs(self):
        '''
        Getter function for self._pairs
        '''
        return self._pairs


    @property
    def max_residual(self):
        '''
        Getter function for self._max_residual
        '''
        return self._max_residual


    @property
    def mean_residual(self):
        '''
        Getter function for self._mean_residual
        '''
        return self._mean_residual


    @property
    def max_quad_err(self):
        '''
        Getter function for self._max_quad_err
        '''
        return self._max_quad_err


    @property
    def verdict(self):
        '''
        Getter function for self._verdict
        '''
        return self._verdict


    @property
    def notes(self):
        '''
        Getter function for self._notes
        '''
        return self._notes


    def add_note(self, note):
        self._notes.append(note)


    def build_report(self, rows):
        """
        Build the report from per-pair dicts with keys PAIR_COLS
        """
        self._pairs = pd.DataFrame(rows, columns=PAIR_COLS)

        if self._pairs.empty:
            logging.warning("KMS report for %s has no test pairs", self._scenario)
            self._max_residual = 0.0
            self._mean_residual = 0.0
            self._max_quad_err = 0.0
            self._verdict = VERDICT_INCONCLUSIVE
            return

        self._max_residual = float(self._pairs['residual'].max())
        self._mean_residual = float(self._pairs['residual'].mean())
        self._max_quad_err = float(self._pairs['quad_err'].max())

        if self._max_residual <= self._tolerance and self._max_quad_err <= self._tolerance / 10.0:
            self._verdict = VERDICT_PASS
        elif self._max_residual - self._max_quad_err > self._tolerance:
            self._verdict = VERDICT_FAIL
        else:
            self._verdict = VERDICT_INCONCLUSIVE

        logging.info("KMS report %s: max residual %.3e, verdict %s",
                     self._scenario, self._max_residual, self._verdict)


    @property
    def passed(self):
        return self._verdict == VERDICT_PASS


    def __str__(self):
        notes = "".join("\n\tNote: %s" % note for note in self._notes)
        return "KMS Report: %s\n\
\tSeed: %s\n\
\tTest pairs: %d\n\
\tTolerance: %.1e\n\
\tMaximum normalized residual: %.3e\n\
\tMean normalized residual: %.3e\n\
\tMaximum quadrature error: %.3e\n\
\tVerdict: %s%s\
" % (self._scenario, self._seed, len(self._pairs.index), self._tolerance, self._max_residual,
     self._mean_residual, self._max_quad_err, self._verdict, notes)


    def to_json(self):
        """
        Return report data as json object
        """
        pairs = [{"lhs": row.lhs, "rhs": row.rhs, "residual": row.residual, "quadErr": row.quad_err}
                 for row in self._pairs.itertuples()]
        return {"schema": SCHEMA, "scenario": self._scenario, "seed": self._seed,
                "tolerance": self._tolerance, "pairs": pairs, "maxResidual": self._max_residual,
                "meanResidual": self._mean_residual, "maxQuadErr": self._max_quad_err,
                "verdict": self._verdict, "notes": self._notes}


class ClassificationReport():
    """
    Class for a single classification cell
    """

    def __init__(self, example, coords, beta):
        self._example = example
        self._coords = coords
        self._beta = beta
        self._cone = None
        self._generator_reports = []
        self._certificate_results = []


    @property
    def example(self):
        '''
        Getter function for self._example
        '''
        return self._example


    @property
    def cone(self):
        '''
        Getter function for self._cone
        '''
        return self._cone


    @property
    def generator_reports(self):
        '''
        Getter function for self._generator_reports
        '''
        return self._generator_reports


    @property
    def certificate_results(self):
        '''
        Getter function for self._certificate_results
        '''
        return self._certificate_results


    def build_report(self, cone, generator_reports=None, certificate_results=None):
        self._cone = cone
        self._generator_reports = generator_reports or []
        self._certificate_results = certificate_results or []


    @property
    def verified(self):
        """
        Every generator passed and every certificate probe passed
        """
        return all(report.passed for report in self._generator_reports) \
            and all(result.passed for result in self._certificate_results)


    def __str__(self):
        lines = ["Classification: %s" % self._example,
                 "\tCoordinates: %s" % (self._coords,),
                 "\tbeta: %g" % self._beta,
                 "\tCone: %s" % self._cone.iso_class]
        for report in self._generator_reports:
            lines.append("\tGenerator %s: %s (%.3e)" % (report.scenario, report.verdict, report.max_residual))
        for result in self._certificate_results:
            lines.append("\tCertificate %s: %s" % (result.tag, 'pass' if result.passed else 'fail'))
        for note in self._cone.notes:
            lines.append("\tNote: %s" % note)
        return "\n".join(lines)


    def to_json(self):
        return {"schema": SCHEMA, "example": self._example, "coords": self._coords, "beta": self._beta,
                "cone": self._cone.to_json(),
                "generatorReports": [report.to_json() for report in self._generator_reports],
                "certificates": [result.to_json() for result in self._certificate_results],
                "verified": self.verified}


class TableReport():
    """
    Class for a classification table rendered as markdown
    """

    def __init__(self, example, row_label, col_label):
        self._example = example
        self._row_label = row_label
        self._col_label = col_label
        self._table = None


    @property
    def example(self):
        '''
        Getter function for self._example
        '''
        return self._example


    @property
    def table(self):
        '''
        Getter function for self._table
        '''
        return self._table


    def build_report(self, cells):
        """
        cells: list of (row key, column key, entry text)
        """
        frame = pd.DataFrame(cells, columns=['row', 'col', 'entry'])
        self._table = frame.pivot(index='row', columns='col', values='entry')
        self._table = self._table.reindex(index=list(dict.fromkeys(frame['row'])),
                                          columns=list(dict.fromkeys(frame['col'])))


    def to_markdown(self):
        header = ["%s \\ %s" % (self._row_label, self._col_label)] + [str(col) for col in self._table.columns]
        lines = ["# %s" % self._example, "",
                 "| " + " | ".join(header) + " |",
                 "|" + "|".join(["---"] * len(header)) + "|"]
        for row, values in self._table.iterrows():
            lines.append("| " + " | ".join([str(row)] + [str(v) for v in values]) + " |")
        return "\n".join(lines) + "\n"


    def __str__(self):
        return self.to_markdown()


    def to_json(self):
        return {"schema": SCHEMA, "example": self._example,
                "rows": [str(r) for r in self._table.index],
                "columns": [str(c) for c in self._table.columns],
                "entries": self._table.astype(str).values.tolist()}


class SolverReport():
    """
    Class for solver output (transport, D_beta, class coordinates,
    Diophantine approximation)
    """

    def __init__(self, solver):
        self._solver = solver
        self._result = {}
        self._obstructed = False


    @property
    def solver(self):
        '''
        Getter function for self._solver
        '''
        return self._solver


    @property
    def result(self):
        '''
        Getter function for self._result
        '''
        return self._result


    @property
    def obstructed(self):
        '''
        Getter function for self._obstructed
        '''
        return self._obstructed


    def build_report(self, result, obstructed=False):
        self._result = result
        self._obstructed = obstructed


    def __str__(self):
        lines = ["Solver: %s" % self._solver]
        for key, value in self._result.items():
            lines.append("\t%s: %s" % (key, value))
        if self._obstructed:
            lines.append("\tObstructed")
        return "\n".join(lines)


    def to_json(self):
        return {"schema": SCHEMA, "solver": self._solver, "obstructed": self._obstructed,
                "result": self._result}
