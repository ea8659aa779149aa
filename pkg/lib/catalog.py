#!/usr/bin/env python3
'''
        FILE:  catalog.py
 DESCRIPTION:  Base class for the catalog manifolds plus the pieces every
               catalog entry shares: example bundles, cone descriptions, the
               certificate probes backing Zero cells and the table builder.

        BUGS:
       NOTES:  Each catalog manifold lives in manifolds/ as a subclass of
               CatalogManifold, the same way each parser format lives in its
               own module.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-14
    REVISION:  2021-06-25

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import math
import logging

import numpy as np

from lib.calculus import apply_field
from lib.cohomology import CohomCoords, TrigPoly
from lib.exceptions import EmptyCone, FlowEscaped, NotCosymplectic, UnknownCell
from lib.expressions import TestFunction, evaluate
from lib.flows import Flow, flowed_box
from lib.functional import (DEFAULT_SEED, KMS_TOLERANCE, TestPairFamily, extension_divergence_probe,
                            kms_residual, leaf_decay_ratio)
from lib.kms_reports import ClassificationReport, TableReport
from lib.poisson import IDENTITY_TOLERANCE, b_check, sample_points

ZERO = 'Zero'
HALF_LINE = 'HalfLine'
QUADRANT = 'Quadrant'
MEASURES_ON_LINE = 'MeasuresOnLine'
MEASURES_ON_CIRCLE = 'MeasuresOnCircle'
PRODUCT_OF_CIRCLE_MEASURES = 'ProductOfCircleMeasures'
SINGLETON = 'Singleton'
TRACE_CONE_OF_Z = 'TraceConeOfZ'

ISO_CLASSES = [ZERO, HALF_LINE, QUADRANT, MEASURES_ON_LINE, MEASURES_ON_CIRCLE,
               PRODUCT_OF_CIRCLE_MEASURES, SINGLETON, TRACE_CONE_OF_Z]

TRANSVERSALITY = 'TransversalityLemma'
SUPPORTED_ON_Z = 'SupportedOnZContradiction'
NO_EXTENSION = 'NoPositiveExtension'
DECAY = 'ExponentialDecay'

CERTIFICATE_TAGS = [TRANSVERSALITY, SUPPORTED_ON_Z, NO_EXTENSION, DECAY]

GRID_BETAS = (0.25, 0.5, 1.0, 2.0)
TABLE_BETA = 1.0

CLASSIFY_PAIRS = 4
PROBE_SAMPLES = 64

RANK_TOLERANCE = 1e-9

# the decay probe follows the flow until the KMS rescaling reaches 1/DECAY_GROWTH
DECAY_GROWTH = 1e6
DECAY_BAND = 4.0
DECAY_STEPS = 3


################################################################################
class ExampleBundle():
    """
    Everything a catalog example defines: the manifold, its Poisson tensor,
    optional cosymplectic and b-structures and a few named vector fields.
    """

    def __init__(self, name, poisson, cosymplectic=None, bstructure=None, fields=None):
        self._name = name
        self._poisson = poisson
        self._cosymplectic = cosymplectic
        self._bstructure = bstructure
        self._fields = dict(fields or {})


    @property
    def name(self):
        '''
        Getter function for self._name
        '''
        return self._name


    @property
    def manifold(self):
        return self._poisson.manifold


    @property
    def poisson(self):
        '''
        Getter function for self._poisson
        '''
        return self._poisson


    @property
    def cosymplectic(self):
        '''
        Getter function for self._cosymplectic
        '''
        return self._cosymplectic


    @property
    def bstructure(self):
        '''
        Getter function for self._bstructure
        '''
        return self._bstructure


    @property
    def fields(self):
        '''
        Getter function for self._fields
        '''
        return self._fields


    def structural_checks(self):
        """
        Jacobi residual, Poisson-ness of every named field and, for b-Poisson
        examples, the transversality check of the Z-defining function
        """
        points = sample_points(self.manifold)
        checks = {"jacobi": self._poisson.jacobi_check(points)}
        for label, field in self._fields.items():
            checks["lieDerivative:%s" % label] = self._poisson.is_poisson_field(field, points)
        if self._bstructure is not None:
            result = b_check(self._poisson, self._bstructure)
            checks["zetaResidual"] = result.zeta_residual
            checks["isBPoisson"] = result.is_b_poisson
        return checks


    def to_json(self):
        return {"name": self._name, "manifold": self.manifold.coord_names,
                "pi": str(self._poisson.pi),
                "cosymplectic": self._cosymplectic is not None,
                "bPoisson": self._bstructure is not None,
                "fields": {label: str(field) for label, field in self._fields.items()}}


class ZStructure():
    """
    The structure induced on a component of the critical hypersurface (or
    another invariant hypersurface): its own manifold, Poisson tensor and the
    restricted dynamics.  `decay` is an optional (g, center, radii) used by
    the decay probe on the hypersurface.
    """

    def __init__(self, label, poisson, field, decay=None):
        self._label = label
        self._poisson = poisson
        self._field = field
        self._decay = decay


    @property
    def label(self):
        '''
        Getter function for self._label
        '''
        return self._label


    @property
    def manifold(self):
        return self._poisson.manifold


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
    def decay(self):
        '''
        Getter function for self._decay
        '''
        return self._decay


################################################################################
class CertificateResult():
    """
    Outcome of one certificate probe for a Zero cell
    """

    def __init__(self, tag, passed, details=None):
        if tag not in CERTIFICATE_TAGS:
            raise ValueError("unknown certificate tag %s" % tag)
        self._tag = tag
        self._passed = bool(passed)
        self._details = dict(details or {})


    @property
    def tag(self):
        '''
        Getter function for self._tag
        '''
        return self._tag


    @property
    def passed(self):
        '''
        Getter function for self._passed
        '''
        return self._passed


    @property
    def details(self):
        '''
        Getter function for self._details
        '''
        return self._details


    def to_json(self):
        data = {"tag": self._tag, "passed": self._passed}
        data.update(self._details)
        return data


class ConeDescription():
    """
    A cell of a classification table: the isomorphism class of KMS([X], beta)
    with its generators (and which of them are extremal), the certificates
    backing a Zero cell and free-form notes.
    """

    def __init__(self, iso_class, generators=None, extremal_flags=None, notes=None, certificates=None):
        if iso_class not in ISO_CLASSES:
            raise ValueError("unknown cone class %s" % iso_class)
        self._iso_class = iso_class
        self._generators = list(generators or [])
        self._extremal_flags = list(extremal_flags) if extremal_flags is not None \
            else [True] * len(self._generators)
        if len(self._extremal_flags) != len(self._generators):
            raise ValueError("one extremal flag per generator")
        self._notes = list(notes or [])
        self._certificates = list(certificates or [])


    @property
    def iso_class(self):
        '''
        Getter function for self._iso_class
        '''
        return self._iso_class


    @property
    def generators(self):
        '''
        Getter function for self._generators
        '''
        return self._generators


    @property
    def extremal_flags(self):
        '''
        Getter function for self._extremal_flags
        '''
        return self._extremal_flags


    @property
    def notes(self):
        '''
        Getter function for self._notes
        '''
        return self._notes


    @property
    def certificates(self):
        '''
        Getter function for self._certificates
        '''
        return self._certificates


    @property
    def is_zero(self):
        return self._iso_class == ZERO


    @property
    def certified(self):
        """
        A Zero cell needs at least one certificate and every probe must pass
        """
        if self.is_zero and not self._certificates:
            return False
        return all(result.passed for result in self._certificates)


    def add_note(self, note):
        self._notes.append(note)


    def extremal_generators(self):
        return [g for g, flag in zip(self._generators, self._extremal_flags) if flag]


    def to_json(self):
        return {"isoClass": self._iso_class,
                "generators": [g.to_json() for g in self._generators],
                "extremal": self._extremal_flags,
                "certificates": [result.to_json() for result in self._certificates],
                "certified": self.certified,
                "notes": self._notes}


class GridCell():
    """
    One declared cell of a classification table.  beta None means the cell
    is swept over GRID_BETAS (and rendered at TABLE_BETA).
    """

    def __init__(self, row, col, coords, beta=None):
        self.row = row
        self.col = col
        self.coords = dict(coords)
        self.beta = beta


################################################################################
# Certificate probes
################################################################################
def transversality_probe(poisson, field, points, tag=TRANSVERSALITY):
    """
    rank [Pi | X] > rank Pi at every sampled point: X leaves the symplectic
    leaf through each point, so no KMS functional charges those points
    """
    points = np.atleast_2d(points)
    pi = poisson.pi.dense(points)
    x_values = field.dense(points)
    rank_pi = np.linalg.matrix_rank(pi, tol=RANK_TOLERANCE)
    augmented = np.concatenate([pi, x_values[:, :, None]], axis=2)
    rank_aug = np.linalg.matrix_rank(augmented, tol=RANK_TOLERANCE)
    passed = bool(np.all(rank_aug > rank_pi))
    logging.debug("Transversality over %d points: %s", points.shape[0], passed)
    return CertificateResult(tag, passed, {"points": int(points.shape[0]),
                                           "rankPi": int(np.max(rank_pi)),
                                           "minRankWithX": int(np.min(rank_aug))})


def _box_points(box, count, seed=DEFAULT_SEED):
    rng = np.random.default_rng(seed)
    return np.column_stack([rng.uniform(lo, hi, count) for lo, hi in box])


def decay_probe(poisson, field, g, beta, center, radii, reference=None, steps=DECAY_STEPS):
    """
    Global KMS decay: with kappa = X(g) constant, phi(f) = e^{beta kappa t}
    phi(f o Psi_t) for the Hamiltonian flow Psi of g.  The probe follows t in
    the direction where the rescaling vanishes and passes when the supports
    Psi_{-t}(supp f) stay in a bounded band (and, with a reference
    functional, when its masses do too).
    """
    manifold = poisson.manifold
    plateau = TestFunction(manifold, center, radii, kind='plateau')
    box = plateau.box()
    values = evaluate(apply_field(field, g), _box_points(box, PROBE_SAMPLES))
    kappa = float(np.mean(values))
    details = {"kappa": kappa, "beta": beta}

    if float(np.ptp(values)) > IDENTITY_TOLERANCE * (1.0 + abs(kappa)):
        logging.info("X(g) is not constant on the probe window")
        details["reason"] = "X(g) not constant"
        return CertificateResult(DECAY, False, details)
    if abs(kappa * beta) < IDENTITY_TOLERANCE:
        details["reason"] = "kappa vanishes"
        return CertificateResult(DECAY, False, details)

    horizon = math.log(DECAY_GROWTH) / abs(beta * kappa)
    direction = -1.0 if beta * kappa > 0.0 else 1.0
    t_end = direction * horizon
    flow_map = Flow(poisson.hamiltonian_field(g))

    linear = [i for i in range(manifold.dim) if not manifold.is_angle(i)]
    start = max([abs(v) for i in linear for v in box[i]] or [0.0])
    extent = start
    try:
        for k in range(1, steps + 1):
            moved = flowed_box(flow_map, -t_end * k / steps, box, manifold)
            for i in linear:
                extent = max(extent, abs(moved[i][0]), abs(moved[i][1]))
    except FlowEscaped as err:
        logging.info("Decay probe flow escaped: %s", str(err))
        details["reason"] = "flow escaped"
        return CertificateResult(DECAY, False, details)

    bounded = extent <= DECAY_BAND * (1.0 + start)
    details.update({"horizon": t_end, "rescaling": math.exp(beta * kappa * t_end),
                    "supportExtent": extent})

    if reference is not None:
        ratios = leaf_decay_ratio(reference, poisson, g, center, radii, t_end, steps)
        details["massRatios"] = ratios
        if ratios:
            bounded = bounded and max(ratios) <= DECAY_BAND

    logging.debug("Decay probe kappa=%g horizon=%g extent=%g", kappa, t_end, extent)
    return CertificateResult(DECAY, bounded, details)


def no_extension_probe(beta_prime):
    """
    Divergence probe for the density |z|^-(1 + beta'); returns the
    ProbeResult, tagged NoPositiveExtension
    """
    return extension_divergence_probe(beta_prime)


def density_exponent(a, order, beta):
    """
    Exponent of |s - r| in e^{-beta H}/|pi| near a zero of order m of pi
    where H ~ -a log|s - r|
    """
    return beta * a - order


def z_certificates(zstructure, beta):
    """
    Classify the cone of a hypersurface structure the way a cosymplectic
    example is classified: transverse dynamics or leafwise decay give Zero
    (certificates returned), otherwise the hypersurface carries traces (empty
    list).  A vanishing Pi_Z reduces to X_Z != 0.
    """
    points = sample_points(zstructure.manifold, count=PROBE_SAMPLES)
    transverse = transversality_probe(zstructure.poisson, zstructure.field, points, SUPPORTED_ON_Z)
    if transverse.passed:
        return [transverse]
    if zstructure.decay is not None:
        g, center, radii = zstructure.decay
        result = decay_probe(zstructure.poisson, zstructure.field, g, beta, center, radii)
        if result.passed:
            return [result]
    return []


################################################################################
class CatalogManifold():
    """
    Root Class for catalog manifolds
    """

    # class-coordinate names in the order the command line gives them
    coordinate_names = ()
    row_label = '[X]'
    col_label = 'a'
    kms_tolerance = KMS_TOLERANCE

    def __init__(self, name, description=None, example_data=None):
        self._name = name
        self._description = description
        self._example_data = example_data
        self._bundle = None


    @property
    def name(self):
        '''
        Getter function for self._name
        '''
        return self._name


    @property
    def description(self):
        '''
        Getter function for self._description
        '''
        return self._description


    @property
    def example_data(self):
        '''
        Getter function for self._example_data
        '''
        return self._example_data


    @property
    def bundle(self):
        if self._bundle is None:
            self._bundle = self.make_example()
        return self._bundle


    @property
    def manifold(self):
        return self.bundle.manifold


    @property
    def poisson(self):
        return self.bundle.poisson


    @property
    def pair_window(self):
        """
        Window for the random test pairs used when verifying generators
        """
        return {}


    def parameters(self):
        return {}


    def make_example(self):
        """
        Build the ExampleBundle.  This function must be overrided by subclasses
        """
        raise NotImplementedError('make_example must be implemented by subclass')


    def representative(self, coords):
        """
        The vector field representing the class with these coordinates.  This
        function must be overrided by subclasses
        """
        raise NotImplementedError('representative must be implemented by subclass')


    def class_coords(self, field):
        """
        CohomCoords of a Poisson vector field.  This function must be
        overrided by subclasses
        """
        raise NotImplementedError('class_coords must be implemented by subclass')


    def grid(self):
        """
        The declared classification grid as a list of GridCells.  This
        function must be overrided by subclasses
        """
        raise NotImplementedError('grid must be implemented by subclass')


    def _classify(self, coords, beta):
        raise NotImplementedError('_classify must be implemented by subclass')


    def z_structures(self, coords):
        """
        Induced structures on the components of Z (empty when there is no Z)
        """
        return []


    def reeb_invariant_trace(self):
        """
        The Poisson trace invariant under the Reeb (or modular) field
        """
        raise NotCosymplectic("%s has no cosymplectic structure" % self._name)


    def reeb_field(self):
        raise NotCosymplectic("%s has no cosymplectic structure" % self._name)


    def normalize_coords(self, coords):
        """
        Accept a CohomCoords, a dict or a sequence in coordinate_names order
        """
        if isinstance(coords, CohomCoords):
            coords = coords.values
        if coords is None:
            coords = {}
        if not isinstance(coords, dict):
            coords = list(coords)
            if len(coords) != len(self.coordinate_names):
                raise UnknownCell("%s takes %d class coordinates (%s), got %d"
                                  % (self._name, len(self.coordinate_names),
                                     ','.join(self.coordinate_names), len(coords)))
            coords = dict(zip(self.coordinate_names, coords))
        unknown = set(coords) - set(self.coordinate_names)
        if unknown:
            raise UnknownCell("unknown class coordinates for %s: %s" % (self._name, sorted(unknown)))

        out = {}
        for name in self.coordinate_names:
            value = coords.get(name, 0.0)
            if isinstance(value, TrigPoly):
                if not value.is_constant():
                    raise UnknownCell("non-constant coordinate %s lies outside the table" % name)
                value = value.mean()
            value = float(value)
            if not math.isfinite(value):
                raise UnknownCell("coordinate %s is not finite" % name)
            out[name] = value
        return out


    def classify(self, coords, beta):
        """
        The cone KMS([X], beta) for the class with these coordinates
        """
        coords = self.normalize_coords(coords)
        beta = float(beta)
        if not beta > 0.0 or not math.isfinite(beta):
            raise UnknownCell("beta must be positive, got %g" % beta)
        logging.info("Classifying %s at %s, beta=%g", self._name, coords, beta)
        cone = self._classify(coords, beta)
        if cone.is_zero and not cone.certified:
            logging.warning("Zero cell of %s at %s lacks a passing certificate", self._name, coords)
        return cone


    def generators(self, coords, beta):
        cone = self.classify(coords, beta)
        if cone.is_zero:
            raise EmptyCone("KMS cone of %s at %s, beta=%g is {0}" % (self._name, coords, beta))
        return cone.generators


    def test_pairs(self, count=CLASSIFY_PAIRS, seed=DEFAULT_SEED):
        return TestPairFamily(self.manifold, count, seed, window=self.pair_window)


    def verify(self, coords, beta, pairs=CLASSIFY_PAIRS, seed=DEFAULT_SEED, tolerance=None):
        """
        Classify and run the KMS residual of every generator; returns a
        ClassificationReport
        """
        tolerance = self.kms_tolerance if tolerance is None else tolerance
        coords = self.normalize_coords(coords)
        cone = self.classify(coords, beta)
        field = self.representative(coords)
        family = self.test_pairs(pairs, seed)

        generator_reports = []
        for generator in cone.generators:
            try:
                generator_reports.append(kms_residual(generator, self.poisson, field, beta, family,
                                                      tolerance))
            except Exception as err:
                logging.error("Verification of generator %s failed", generator.label)
                logging.error(str(err))
                raise err

        report = ClassificationReport(self._name, coords, beta)
        report.build_report(cone, generator_reports, cone.certificates)
        return report


    def table(self, beta=TABLE_BETA):
        """
        TableReport of the declared grid at one beta
        """
        cells = []
        for cell in self.grid():
            cell_beta = beta if cell.beta is None else cell.beta
            cone = self.classify(cell.coords, cell_beta)
            cells.append((cell.row, cell.col, cone.iso_class))
        report = TableReport(self._name, self.row_label, self.col_label)
        report.build_report(cells)
        return report


    def sweep(self, betas=GRID_BETAS):
        """
        Classify every grid cell at every beta: list of (cell, beta, cone)
        """
        results = []
        for cell in self.grid():
            for beta in ([cell.beta] if cell.beta is not None else betas):
                results.append((cell, beta, self.classify(cell.coords, beta)))
        return results
