#!/usr/bin/env python3
'''
        FILE:  expressions.py
 DESCRIPTION:  Immutable, hash-consed scalar-field expression trees on
               R^a x T^b with exact symbolic differentiation, vectorized
               numpy evaluation, compactly supported test functions and the
               prefix S-expression codec.

        BUGS:
       NOTES:  Equality of expressions is decided numerically at sample points;
               the constructors only fold constants, absorb 0/1 and collapse
               sin^2 + cos^2.  See Docs/conventions.txt for the text grammar.
      AUTHOR:  Webb Pinner
     COMPANY:  OceanDataTools
     VERSION:  0.1
     CREATED:  2021-06-01
    REVISION:  2021-06-14

LICENSE INFO: This code is licensed under MIT license (see LICENSE.txt for details)
              Copyright (C) OceanDataTools 2021
'''
import re
import math
import logging
import weakref
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial.legendre import leggauss

from lib.exceptions import SingularEvaluation

TWO_PI = 2.0 * math.pi

# nodes for the mollifier primitive
PRIMITIVE_ORDER = 64

_INTERN = weakref.WeakValueDictionary()


def _interned(cls, key):
    try:
        return _INTERN[(cls, key)]
    except KeyError:
        pass
    node = object.__new__(cls)
    node._key = key
    _INTERN[(cls, key)] = node
    return node


def wrap_angle(values):
    """
    Map angle offsets into [-pi, pi)
    """
    return np.mod(np.asarray(values, dtype=float) + math.pi, TWO_PI) - math.pi


################################################################################
# Mollifier rho(t) = exp(1 - 1/(1 - t^2)), max rho = rho(0) = 1
################################################################################
@lru_cache(maxsize=None)
def _mollifier_poly(order):
    """
    Polynomial P_n with rho^(n)(t) = P_n(t) (1 - t^2)^(-2n) rho(t)
    """
    if order == 0:
        return Polynomial([1.0])

    prev = _mollifier_poly(order - 1)
    n = order - 1
    one_minus = Polynomial([1.0, 0.0, -1.0])
    t = Polynomial([0.0, 1.0])
    return prev.deriv() * one_minus ** 2 + 4 * n * t * one_minus * prev - 2 * t * prev


def mollifier(t, order=0):
    """
    n-th derivative of the mollifier at t, zero outside (-1, 1)
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    if not np.any(inside):
        return out

    ti = t[inside]
    gap = 1.0 - ti * ti
    with np.errstate(divide='ignore', over='ignore', under='ignore'):
        log_scale = 1.0 - 1.0 / gap - 2 * order * np.log(gap)
        out[inside] = _mollifier_poly(order)(ti) * np.exp(log_scale)

    return out


_GL_NODES, _GL_WEIGHTS = leggauss(PRIMITIVE_ORDER)


def mollifier_primitive(t):
    """
    M(t) = int_{-1}^{t} rho(s) ds, vectorized
    """
    t = np.clip(np.asarray(t, dtype=float), -1.0, 1.0)
    half = 0.5 * (t + 1.0)
    nodes = -1.0 + half[..., None] * (_GL_NODES + 1.0)
    return half * np.sum(mollifier(nodes) * _GL_WEIGHTS, axis=-1)


MOLLIFIER_MASS = float(mollifier_primitive(1.0))


################################################################################
class Expr():
    """
    Base class of all expression nodes.  Nodes are interned: structurally equal
    nodes built through the constructors below are the same object.
    """

    __slots__ = ('_key', '__weakref__')

    precedence = 100

    def __add__(self, other):
        return add(self, other)

    def __radd__(self, other):
        return add(other, self)

    def __sub__(self, other):
        return add(self, neg(other))

    def __rsub__(self, other):
        return add(other, neg(self))

    def __mul__(self, other):
        return mul(self, other)

    def __rmul__(self, other):
        return mul(other, self)

    def __truediv__(self, other):
        return mul(self, power(as_expr(other), -1.0))

    def __rtruediv__(self, other):
        return mul(other, power(self, -1.0))

    def __pow__(self, other):
        return power(self, float(other))

    def __neg__(self):
        return neg(self)

    def __repr__(self):
        return to_sexpr(self)

    def children(self):
        return ()

    def is_zero(self):
        return False

    def _eval(self, points, values):
        raise NotImplementedError('Subclass must implement this method')

    def _derive(self, index):
        raise NotImplementedError('Subclass must implement this method')


class Const(Expr):
    __slots__ = ()

    @property
    def value(self):
        return self._key[0]

    def is_zero(self):
        return self.value == 0.0

    def _eval(self, points, values):
        return np.full(points.shape[0], self.value)

    def _derive(self, index):
        return ZERO


class Coord(Expr):
    __slots__ = ()

    @property
    def index(self):
        return self._key[0]

    @property
    def name(self):
        return self._key[1]

    @property
    def is_angle(self):
        return self._key[2]

    def _eval(self, points, values):
        return points[:, self.index]

    def _derive(self, index):
        return ONE if index == self.index else ZERO


class Add(Expr):
    __slots__ = ()
    precedence = 10

    def children(self):
        return self._key

    def _eval(self, points, values):
        total = np.zeros(points.shape[0])
        for term in self._key:
            total = total + values[term]
        return total

    def _derive(self, index):
        return add(*[derive(term, index) for term in self._key])


class Mul(Expr):
    __slots__ = ()
    precedence = 20

    def children(self):
        return self._key

    def _eval(self, points, values):
        total = np.ones(points.shape[0])
        for factor in self._key:
            total = total * values[factor]
        return total

    def _derive(self, index):
        terms = []
        for pos, factor in enumerate(self._key):
            d_factor = derive(factor, index)
            if d_factor.is_zero():
                continue
            rest = self._key[:pos] + self._key[pos + 1:]
            terms.append(mul(d_factor, *rest))
        return add(*terms)


class Pow(Expr):
    __slots__ = ()
    precedence = 30

    @property
    def base(self):
        return self._key[0]

    @property
    def exponent(self):
        return self._key[1]

    def children(self):
        return (self.base,)

    def _eval(self, points, values):
        base = values[self.base]
        p = self.exponent
        if p < 0 and np.any(base == 0.0):
            raise SingularEvaluation("power %g of %s evaluated at a zero" % (p, to_sexpr(self.base)))
        if p != int(p) and np.any(base < 0.0):
            raise SingularEvaluation("fractional power %g of a negative base %s" % (p, to_sexpr(self.base)))
        return np.power(base, p)

    def _derive(self, index):
        d_base = derive(self.base, index)
        if d_base.is_zero():
            return ZERO
        return mul(self.exponent, power(self.base, self.exponent - 1.0), d_base)


class Sin(Expr):
    __slots__ = ()

    @property
    def arg(self):
        return self._key[0]

    def children(self):
        return self._key

    def _eval(self, points, values):
        return np.sin(values[self.arg])

    def _derive(self, index):
        return mul(cos(self.arg), derive(self.arg, index))


class Cos(Expr):
    __slots__ = ()

    @property
    def arg(self):
        return self._key[0]

    def children(self):
        return self._key

    def _eval(self, points, values):
        return np.cos(values[self.arg])

    def _derive(self, index):
        return mul(-1.0, sin(self.arg), derive(self.arg, index))


class Exp(Expr):
    __slots__ = ()

    @property
    def arg(self):
        return self._key[0]

    def children(self):
        return self._key

    def _eval(self, points, values):
        return np.exp(values[self.arg])

    def _derive(self, index):
        return mul(self, derive(self.arg, index))


class LogAbs(Expr):
    __slots__ = ()

    @property
    def arg(self):
        return self._key[0]

    def children(self):
        return self._key

    def _eval(self, points, values):
        arg = values[self.arg]
        if np.any(arg == 0.0):
            raise SingularEvaluation("log|%s| evaluated at a zero" % to_sexpr(self.arg))
        return np.log(np.abs(arg))

    def _derive(self, index):
        return mul(derive(self.arg, index), power(self.arg, -1.0))


class Abs(Expr):
    __slots__ = ()

    @property
    def arg(self):
        return self._key[0]

    def children(self):
        return self._key

    def _eval(self, points, values):
        return np.abs(values[self.arg])

    def _derive(self, index):
        return mul(slope(self.arg), derive(self.arg, index))


class Sign(Expr):
    __slots__ = ()

    @property
    def arg(self):
        return self._key[0]

    def children(self):
        return self._key

    def _eval(self, points, values):
        return np.sign(values[self.arg])

    def _derive(self, index):
        return ZERO


class Slope(Sign):
    """
    d|u|/du = sign(u), undefined where u = 0
    """
    __slots__ = ()

    def _eval(self, points, values):
        arg = values[self.arg]
        if np.any(arg == 0.0):
            raise SingularEvaluation("derivative of |%s| evaluated at its kink" % to_sexpr(self.arg))
        return np.sign(arg)


class Bump(Expr):
    """
    r^-n rho^(n)((x_i - center)/radius); angle coordinates wrap around center.
    """
    __slots__ = ()

    @property
    def index(self):
        return self._key[0]

    @property
    def center(self):
        return self._key[1]

    @property
    def radius(self):
        return self._key[2]

    @property
    def order(self):
        return self._key[3]

    @property
    def periodic(self):
        return self._key[4]

    def interval(self):
        return (self.center - self.radius, self.center + self.radius)

    def _eval(self, points, values):
        offset = points[:, self.index] - self.center
        if self.periodic:
            offset = wrap_angle(offset)
        return mollifier(offset / self.radius, self.order) / self.radius ** self.order

    def _derive(self, index):
        if index != self.index:
            return ZERO
        return bump(self.index, self.center, self.radius, self.order + 1, self.periodic)


class Step(Expr):
    """
    Smooth step along x_i: 0 at `start`, 1 at `stop` (either orientation),
    built from the mollifier primitive.  Angle steps are read relative to
    `anchor`.
    """
    __slots__ = ()

    @property
    def index(self):
        return self._key[0]

    @property
    def start(self):
        return self._key[1]

    @property
    def stop(self):
        return self._key[2]

    @property
    def anchor(self):
        return self._key[3]

    def interval(self):
        if self.anchor is not None:
            # angle steps only see one turn around the anchor
            if self.start < self.stop:
                return (self.start, self.anchor + math.pi)
            return (self.anchor - math.pi, self.start)
        if self.start < self.stop:
            return (self.start, math.inf)
        return (-math.inf, self.start)

    def _eval(self, points, values):
        x = points[:, self.index]
        if self.anchor is not None:
            x = self.anchor + wrap_angle(x - self.anchor)
        u = (x - self.start) / (self.stop - self.start)
        return mollifier_primitive(2.0 * np.clip(u, 0.0, 1.0) - 1.0) / MOLLIFIER_MASS

    def _derive(self, index):
        if index != self.index:
            return ZERO
        half = 0.5 * (self.stop - self.start)
        middle = 0.5 * (self.start + self.stop)
        return mul(1.0 / (MOLLIFIER_MASS * half),
                   bump(self.index, middle, abs(half), 0, self.anchor is not None))


################################################################################
# Constructors
################################################################################
def const(value):
    return _interned(Const, (float(value),))


ZERO = const(0.0)
ONE = const(1.0)


def as_expr(value):
    if isinstance(value, Expr):
        return value
    return const(value)


def coord(index, name, is_angle=False):
    return _interned(Coord, (int(index), str(name), bool(is_angle)))


@lru_cache(maxsize=None)
def _signature(node):
    return to_sexpr(node)


def _sort_key(node):
    # structural order keeps evaluation order identical from run to run
    return (type(node).__name__, _signature(node))


def add(*terms):
    flat = []
    constant = 0.0
    for term in terms:
        term = as_expr(term)
        if isinstance(term, Add):
            flat.extend(term.children())
        elif isinstance(term, Const):
            constant += term.value
        else:
            flat.append(term)

    flat = _collapse_pythagoras(flat)
    if isinstance(flat, tuple):
        flat, extra = flat
        constant += extra

    if constant != 0.0:
        flat.append(const(constant))
    if not flat:
        return ZERO
    if len(flat) == 1:
        return flat[0]
    return _interned(Add, tuple(sorted(flat, key=_sort_key)))


def _collapse_pythagoras(terms):
    """
    sin(a)^2 + cos(a)^2 -> 1 for identical arguments a
    """
    squares = {}
    for pos, term in enumerate(terms):
        if isinstance(term, Pow) and term.exponent == 2.0 and isinstance(term.base, (Sin, Cos)):
            squares.setdefault(term.base.arg, {})[type(term.base)] = pos

    drop = set()
    for found in squares.values():
        if Sin in found and Cos in found:
            drop.update(found.values())

    if not drop:
        return terms
    kept = [term for pos, term in enumerate(terms) if pos not in drop]
    return kept, float(len(drop) // 2)


def _combine_powers(factors):
    """
    b^p * b^q -> b^(p+q) for factors sharing a base; cancelled bases drop out
    """
    exponents = {}
    for factor in factors:
        base, exponent = (factor.base, factor.exponent) if isinstance(factor, Pow) else (factor, 1.0)
        exponents[base] = exponents.get(base, 0.0) + exponent

    combined = []
    for base, exponent in exponents.items():
        term = power(base, exponent)
        if term is not ONE:
            combined.append(term)
    return combined


def mul(*factors):
    flat = []
    constant = 1.0
    for factor in factors:
        factor = as_expr(factor)
        if isinstance(factor, Mul):
            flat.extend(factor.children())
        elif isinstance(factor, Const):
            constant *= factor.value
        else:
            flat.append(factor)

    flat = _combine_powers(flat)
    if constant == 0.0:
        return ZERO
    if constant != 1.0:
        flat.append(const(constant))
    if not flat:
        return ONE
    if len(flat) == 1:
        return flat[0]
    return _interned(Mul, tuple(sorted(flat, key=_sort_key)))


def neg(value):
    return mul(-1.0, value)


def power(base, exponent):
    base = as_expr(base)
    exponent = float(exponent)
    if exponent == 0.0:
        return ONE
    if exponent == 1.0:
        return base
    if isinstance(base, Const):
        if base.value == 0.0 and exponent < 0:
            raise SingularEvaluation("constant zero raised to %g" % exponent)
        return const(base.value ** exponent)
    if isinstance(base, Pow) and float(exponent).is_integer():
        return power(base.base, base.exponent * exponent)
    return _interned(Pow, (base, exponent))


def _unary(cls, fold):
    def build(arg):
        arg = as_expr(arg)
        if isinstance(arg, Const):
            return const(fold(arg.value))
        return _interned(cls, (arg,))
    return build


sin = _unary(Sin, math.sin)
cos = _unary(Cos, math.cos)
exp = _unary(Exp, math.exp)
absval = _unary(Abs, abs)
sign = _unary(Sign, lambda v: float(np.sign(v)))


def _slope_of(value):
    if value == 0.0:
        raise SingularEvaluation("derivative of |0|")
    return math.copysign(1.0, value)


slope = _unary(Slope, _slope_of)


def logabs(arg):
    arg = as_expr(arg)
    if isinstance(arg, Const):
        if arg.value == 0.0:
            raise SingularEvaluation("log|0|")
        return const(math.log(abs(arg.value)))
    return _interned(LogAbs, (arg,))


def bump(index, center, radius, order=0, periodic=False):
    if radius <= 0:
        raise ValueError("bump radius must be positive")
    return _interned(Bump, (int(index), float(center), float(radius), int(order), bool(periodic)))


def step(index, start, stop, anchor=None):
    if start == stop:
        raise ValueError("step needs start != stop")
    anchor = None if anchor is None else float(anchor)
    return _interned(Step, (int(index), float(start), float(stop), anchor))


################################################################################
# Evaluation and differentiation
################################################################################
def _postorder(*exprs):
    seen = set()
    order = []
    stack = [(expr, False) for expr in reversed(exprs)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        for child in node.children():
            if id(child) not in seen:
                stack.append((child, False))
    return order


def evaluate(expr, points):
    """
    Evaluate expr at every row of points (shape (N, dim)); returns shape (N,)
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    values = {}
    for node in _postorder(as_expr(expr)):
        values[node] = node._eval(points, values)

    result = values[as_expr(expr)]
    if not np.all(np.isfinite(result)):
        raise SingularEvaluation("non-finite value of %s" % to_sexpr(expr))
    return result


def evaluate_many(exprs, points):
    """
    Evaluate several expressions at once; shared subexpressions are computed
    a single time.  Returns shape (N, len(exprs)).
    """
    points = np.atleast_2d(np.asarray(points, dtype=float))
    exprs = [as_expr(expr) for expr in exprs]
    values = {}
    for node in _postorder(*exprs):
        values[node] = node._eval(points, values)

    result = np.empty((points.shape[0], len(exprs)))
    for column, expr in enumerate(exprs):
        result[:, column] = values[expr]
    if not np.all(np.isfinite(result)):
        bad = [to_sexpr(expr) for expr in exprs if not np.all(np.isfinite(values[expr]))]
        raise SingularEvaluation("non-finite value of %s" % bad[0])
    return result


def eval_at(expr, point):
    """
    Evaluate expr at a single point
    """
    return float(evaluate(expr, np.asarray(point, dtype=float)[None, :])[0])


@lru_cache(maxsize=None)
def _derive_cached(expr, index):
    return expr._derive(index)


def derive(expr, index):
    """
    Exact partial derivative with respect to coordinate number `index`
    """
    return _derive_cached(as_expr(expr), int(index))


def free_coords(expr):
    """
    Indices of the coordinates expr depends on
    """
    found = set()
    for node in _postorder(as_expr(expr)):
        if isinstance(node, (Coord, Bump, Step)):
            found.add(node.index)
    return found


def _integer_multiple(term):
    """
    True for n*coordinate terms that keep a sin/cos argument periodic
    """
    if isinstance(term, Coord):
        return True
    if not isinstance(term, Mul):
        return False
    factors = term.children()
    coords = [f for f in factors if isinstance(f, Coord)]
    consts = [f for f in factors if isinstance(f, Const)]
    if len(coords) != 1 or len(coords) + len(consts) != len(factors):
        return False
    return not coords[0].is_angle or all(c.value.is_integer() for c in consts)


def is_periodic(expr, angle_mask=None):
    """
    True when angle coordinates only enter through integer-frequency sin/cos
    arguments, bumps or steps.  Raw angle coordinates (multivalued
    Hamiltonians, lifted densities) make an expression non-periodic.  With an
    angle_mask, bumps and steps along angles must also wrap.
    """
    def periodic(node):
        if isinstance(node, Coord):
            return not node.is_angle
        if angle_mask is not None and isinstance(node, Bump) and angle_mask[node.index]:
            return node.periodic
        if angle_mask is not None and isinstance(node, Step) and angle_mask[node.index]:
            return node.anchor is not None
        if isinstance(node, (Sin, Cos)):
            terms = node.arg.children() if isinstance(node.arg, Add) else (node.arg,)
            return all(_integer_multiple(t) or periodic(t) for t in terms)
        return all(periodic(child) for child in node.children())

    return periodic(as_expr(expr))


################################################################################
# Supports
################################################################################
def _shift_to_overlap(first, second):
    """
    Shift an angle interval by a multiple of 2 pi to best overlap `first`
    """
    mid_first = 0.5 * (first[0] + first[1])
    mid_second = 0.5 * (second[0] + second[1])
    turns = round((mid_first - mid_second) / TWO_PI)
    return (second[0] + turns * TWO_PI, second[1] + turns * TWO_PI)


def support_box(expr, dim, angle_mask):
    """
    Per-coordinate (lo, hi) bounds outside which expr vanishes.  Unbounded
    coordinates get (-inf, inf) (angles: a full turn).  Returns None when the
    support is empty.
    """
    full = [(0.0, TWO_PI) if angle_mask[i] else (-math.inf, math.inf) for i in range(dim)]

    def visit(node):
        if isinstance(node, Const):
            return None if node.value == 0.0 else list(full)
        if isinstance(node, (Bump, Step)):
            box = list(full)
            box[node.index] = node.interval()
            return box
        if isinstance(node, Mul):
            box = list(full)
            for factor in node.children():
                sub = visit(factor)
                if sub is None:
                    return None
                box = box_intersect(box, sub, angle_mask)
                if box is None:
                    return None
            return box
        if isinstance(node, Add):
            boxes = [visit(term) for term in node.children()]
            boxes = [b for b in boxes if b is not None]
            if not boxes:
                return None
            box = boxes[0]
            for other in boxes[1:]:
                box = box_hull(box, other, angle_mask)
            return box
        if isinstance(node, Pow) and node.exponent > 0:
            return visit(node.base)
        return list(full)

    return visit(as_expr(expr))


def box_intersect(first, second, angle_mask):
    out = []
    for i, (a, b) in enumerate(zip(first, second)):
        if angle_mask[i]:
            if a[1] - a[0] >= TWO_PI:
                out.append(b)
                continue
            if b[1] - b[0] >= TWO_PI:
                out.append(a)
                continue
            b = _shift_to_overlap(a, b)
        lo, hi = max(a[0], b[0]), min(a[1], b[1])
        if lo >= hi:
            return None
        out.append((lo, hi))
    return out


def box_hull(first, second, angle_mask):
    out = []
    for i, (a, b) in enumerate(zip(first, second)):
        if angle_mask[i]:
            if a[1] - a[0] >= TWO_PI or b[1] - b[0] >= TWO_PI:
                out.append((0.0, TWO_PI))
                continue
            b = _shift_to_overlap(a, b)
            lo, hi = min(a[0], b[0]), max(a[1], b[1])
            out.append((0.0, TWO_PI) if hi - lo >= TWO_PI else (lo, hi))
            continue
        out.append((min(a[0], b[0]), max(a[1], b[1])))
    return out


################################################################################
# Test functions
################################################################################
class TestFunction():
    """
    Product of one-dimensional mollifier bumps (or plateaus equal to 1 on the
    inner half-box) centred at `center` with half-widths `radii`.
    """

    __test__ = False

    def __init__(self, manifold, center, radii, kind='bump'):
        if kind not in ('bump', 'plateau'):
            raise ValueError("kind must be bump or plateau")
        self._manifold = manifold
        self._center = np.asarray(center, dtype=float)
        self._radii = np.asarray(radii, dtype=float)
        self._kind = kind
        if np.any(self._radii <= 0):
            raise ValueError("test function radii must be positive")
        self._expr = self._build()
        manifold.require_periodic(self._expr, "test function")


    @property
    def kind(self):
        '''
        Getter function for self._kind
        '''
        return self._kind


    @property
    def center(self):
        '''
        Getter function for self._center
        '''
        return self._center


    @property
    def radii(self):
        '''
        Getter function for self._radii
        '''
        return self._radii


    @property
    def expr(self):
        '''
        Getter function for self._expr
        '''
        return self._expr


    def _build(self):
        factors = []
        for i, (c, r) in enumerate(zip(self._center, self._radii)):
            periodic = self._manifold.is_angle(i)
            if self._kind == 'bump':
                factors.append(bump(i, c, r, 0, periodic))
            else:
                anchor = c if periodic else None
                factors.append(step(i, c - r, c - 0.5 * r, anchor))
                factors.append(step(i, c + r, c + 0.5 * r, anchor))
        return mul(*factors)


    def box(self):
        """
        Bounding box of the support as a list of (lo, hi)
        """
        return [(c - r, c + r) for c, r in zip(self._center, self._radii)]


    def matched_plateau(self):
        """
        The cutoff 1_f: a plateau equal to 1 on the support of this bump
        """
        return TestFunction(self._manifold, self._center, 2.0 * self._radii, kind='plateau')


################################################################################
# S-expression codec
################################################################################
_TOKEN = re.compile(r"\(|\)|[^\s()]+")

_SYMBOLIC_CONSTANTS = {
    'pi': math.pi,
    'e': math.e,
    'sqrt2': math.sqrt(2.0),
}


def _format_number(value):
    return repr(float(value))


def to_sexpr(expr, names=None):
    """
    Prefix S-expression text for expr, e.g. (mul (sin theta) (pow x -1.0))
    """
    expr = as_expr(expr)

    def name_of(index, fallback):
        if names is not None:
            return names[index]
        return fallback

    if isinstance(expr, Const):
        return _format_number(expr.value)
    if isinstance(expr, Coord):
        return name_of(expr.index, expr.name)
    if isinstance(expr, Add):
        return "(add %s)" % " ".join(to_sexpr(t, names) for t in expr.children())
    if isinstance(expr, Mul):
        return "(mul %s)" % " ".join(to_sexpr(t, names) for t in expr.children())
    if isinstance(expr, Pow):
        return "(pow %s %s)" % (to_sexpr(expr.base, names), _format_number(expr.exponent))
    if isinstance(expr, Bump):
        label = name_of(expr.index, "x%d" % expr.index)
        return "(bump %s %s %s %d)" % (label, _format_number(expr.center),
                                       _format_number(expr.radius), expr.order)
    if isinstance(expr, Step):
        label = name_of(expr.index, "x%d" % expr.index)
        text = "(step %s %s %s" % (label, _format_number(expr.start), _format_number(expr.stop))
        if expr.anchor is not None:
            text += " " + _format_number(expr.anchor)
        return text + ")"

    tags = {Sin: 'sin', Cos: 'cos', Exp: 'exp', LogAbs: 'logabs', Abs: 'abs', Sign: 'sign',
            Slope: 'slope'}
    return "(%s %s)" % (tags[type(expr)], to_sexpr(expr.arg, names))


def parse_sexpr(text, manifold, multivalued=False):
    """
    Parse the prefix S-expression grammar of Docs/conventions.txt.  Results
    on angle manifolds must be periodic unless multivalued is set.
    """
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ValueError("empty expression")

    pos = 0

    def number(token):
        if token in _SYMBOLIC_CONSTANTS:
            return _SYMBOLIC_CONSTANTS[token]
        return float(token)

    def atom(token):
        if manifold.has_coord(token):
            return manifold.coordinate(token)
        try:
            return const(number(token))
        except ValueError as err:
            raise ValueError("unknown symbol '%s'" % token) from err

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of expression")
        token = tokens[pos]
        pos += 1
        if token == ')':
            raise ValueError("unexpected ')'")
        if token != '(':
            return atom(token)

        head = tokens[pos]
        pos += 1
        args = []
        while pos < len(tokens) and tokens[pos] != ')':
            if head in ('bump', 'step') or (head == 'pow' and len(args) == 1):
                args.append(tokens[pos])
                pos += 1
            else:
                args.append(read())
        if pos >= len(tokens):
            raise ValueError("missing ')'")
        pos += 1
        return build(head, args)

    def build(head, args):
        if head == 'add':
            return add(*args)
        if head == 'mul':
            return mul(*args)
        if head == 'sub' and len(args) == 2:
            return args[0] - args[1]
        if head == 'div' and len(args) == 2:
            return args[0] / args[1]
        if head == 'neg' and len(args) == 1:
            return neg(args[0])
        if head == 'pow' and len(args) == 2:
            return power(args[0], number(args[1]))
        if head == 'bump' and len(args) in (3, 4):
            index = manifold.index(args[0])
            order = int(args[3]) if len(args) == 4 else 0
            return bump(index, number(args[1]), number(args[2]), order, manifold.is_angle(index))
        if head == 'step' and len(args) in (3, 4):
            index = manifold.index(args[0])
            anchor = None
            if manifold.is_angle(index):
                anchor = number(args[3]) if len(args) == 4 else number(args[1])
            return step(index, number(args[1]), number(args[2]), anchor)
        unary = {'sin': sin, 'cos': cos, 'exp': exp, 'logabs': logabs, 'abs': absval, 'sign': sign,
                 'slope': slope}
        if head in unary and len(args) == 1:
            return unary[head](args[0])
        raise ValueError("bad form '(%s ...)' with %d arguments" % (head, len(args)))

    result = read()
    if pos != len(tokens):
        raise ValueError("trailing tokens after expression")

    if not multivalued:
        manifold.require_periodic(result, "'%s'" % text)

    logging.debug("Parsed expression: %s", to_sexpr(result))
    return result
