import math
from fractions import Fraction
from numbers import Integral, Rational, Real
from types import MappingProxyType
from typing import Dict, Mapping, Sequence, Tuple, Union

import numpy as np

from qharm.exceptions import AxisOutOfRangeError, InvalidParameterError

Exponent = Tuple[int, ...]
Coefficient = Union[int, Fraction]


def to_fraction(value) -> Fraction:
    """
    Convert a number to an exact Fraction.

    Floats convert to the exact value of their binary representation, strings
    like "1/3" or "0.25" are parsed exactly.

    Raises:
        InvalidParameterError: For non-finite floats or values that are not numbers.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InvalidParameterError(f"Expected a number, got {value!r}.")
    if isinstance(value, (Integral, Rational)):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise InvalidParameterError(f"Could not parse {value!r} as a rational number.")
    if isinstance(value, Real):
        value = float(value)
        if not math.isfinite(value):
            raise InvalidParameterError(f"Coefficient must be finite, got {value}.")
        return Fraction(value)
    raise InvalidParameterError(f"Expected a number, got {type(value).__name__}.")


def format_monomial(exponents: Exponent):
    factors = []
    for index, power in enumerate(exponents, start=1):
        if power == 1:
            factors.append(f"x{index}")
        elif power > 1:
            factors.append(f"x{index}^{power}")
    return "*".join(factors) if factors else "1"


class Polynomial:
    """
    Multivariate polynomial with exact rational coefficients.

    Terms map exponent tuples (length = dimension) to nonzero Fractions.
    Instances are immutable; arithmetic returns new polynomials.
    """

    __slots__ = ("_dimension", "_terms", "_float_form")

    def __init__(self, dimension: int, terms: Mapping[Sequence[int], Coefficient] = None):
        if not isinstance(dimension, Integral) or dimension < 1:
            raise InvalidParameterError(f"Polynomial dimension must be a positive integer, got {dimension}.")

        collected: Dict[Exponent, Fraction] = {}
        for exponents, coefficient in (terms or {}).items():
            exponents = tuple(int(e) for e in exponents)
            if len(exponents) != dimension:
                raise InvalidParameterError(
                    f"Exponent {exponents} has length {len(exponents)}, expected {dimension}."
                )
            if any(e < 0 for e in exponents):
                raise InvalidParameterError(f"Exponent {exponents} has a negative entry.")
            collected[exponents] = collected.get(exponents, Fraction(0)) + to_fraction(coefficient)

        self._dimension = int(dimension)
        # graded order, highest total degree first
        self._terms = {
            e: c
            for e, c in sorted(collected.items(), key=lambda item: (-sum(item[0]), tuple(-x for x in item[0])))
            if c != 0
        }
        self._float_form = None

    # construction helpers
    @classmethod
    def zero(cls, dimension: int):
        return cls(dimension)

    @classmethod
    def constant(cls, dimension: int, value: Coefficient):
        return cls(dimension, {(0,) * dimension: value})

    @classmethod
    def variable(cls, dimension: int, axis: int):
        """The coordinate x_axis (1-based)"""
        _check_axis(axis, dimension)
        exponents = [0] * dimension
        exponents[axis - 1] = 1
        return cls(dimension, {tuple(exponents): 1})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coefficient: Coefficient = 1):
        return cls(len(exponents), {tuple(exponents): coefficient})

    @property
    def dimension(self):
        return self._dimension

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def degree(self):
        """Total degree; -1 for the zero polynomial"""
        return max((sum(e) for e in self._terms), default=-1)

    def is_zero(self):
        return not self._terms

    def coefficient(self, exponents: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exponents), Fraction(0))

    # arithmetic
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other.dimension != self._dimension:
                raise InvalidParameterError(
                    f"Cannot combine polynomials in {self._dimension} and {other.dimension} variables."
                )
            return other
        return Polynomial.constant(self._dimension, to_fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self._terms)
        for e, c in other._terms.items():
            terms[e] = terms.get(e, Fraction(0)) + c
        return Polynomial(self._dimension, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self._dimension, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            factor = to_fraction(other)
            return Polynomial(self._dimension, {e: c * factor for e, c in self._terms.items()})
        other = self._coerce(other)
        terms: Dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return Polynomial(self._dimension, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._dimension == other._dimension and self._terms == other._terms
        try:
            return self == self._coerce(other)
        except InvalidParameterError:
            return NotImplemented

    def __hash__(self):
        return hash((self._dimension, tuple(self._terms.items())))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in self._terms.items():
            monomial = format_monomial(e)
            if monomial == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(monomial)
            elif c == -1:
                parts.append(f"-{monomial}")
            else:
                parts.append(f"{c}*{monomial}")
        return " + ".join(parts).replace("+ -", "- ")

    # calculus
    def partial_derivative(self, axis: int):
        """Exact derivative with respect to x_axis (1-based)"""
        _check_axis(axis, self._dimension)
        k = axis - 1
        terms = {}
        for e, c in self._terms.items():
            if e[k] == 0:
                continue
            lowered = e[:k] + (e[k] - 1,) + e[k + 1 :]
            terms[lowered] = c * e[k]
        return Polynomial(self._dimension, terms)

    def laplacian(self):
        """Sum of the pure second partials, exact"""
        terms: Dict[Exponent, Fraction] = {}
        for e, c in self._terms.items():
            for k, power in enumerate(e):
                if power < 2:
                    continue
                lowered = e[:k] + (power - 2,) + e[k + 1 :]
                terms[lowered] = terms.get(lowered, Fraction(0)) + c * power * (power - 1)
        return Polynomial(self._dimension, terms)

    # evaluation
    def _floats(self):
        if self._float_form is None:
            if self._terms:
                exponents = np.array(list(self._terms.keys()), dtype=np.int64)
                coefficients = np.array([float(c) for c in self._terms.values()], dtype=np.float64)
            else:
                exponents = np.zeros((0, self._dimension), dtype=np.int64)
                coefficients = np.zeros(0, dtype=np.float64)
            self._float_form = (exponents, coefficients)
        return self._float_form

    def evaluate_many(self, points) -> np.ndarray:
        """Evaluate at an (m, n) array of points in floating point"""
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != self._dimension:
            raise InvalidParameterError(
                f"Expected points of shape (m, {self._dimension}), got {points.shape}."
            )
        exponents, coefficients = self._floats()
        if coefficients.size == 0:
            return np.zeros(points.shape[0])
        powers = np.prod(points[:, None, :] ** exponents[None, :, :], axis=2)
        return powers @ coefficients

    def evaluate(self, point) -> float:
        return float(self.evaluate_many(np.asarray(point, dtype=np.float64)[None, :])[0])

    def evaluate_exact(self, point: Sequence) -> Fraction:
        """Exact evaluation; float coordinates are taken at their exact binary value"""
        point = [to_fraction(x) for x in point]
        if len(point) != self._dimension:
            raise InvalidParameterError(f"Expected a point with {self._dimension} coordinates.")
        total = Fraction(0)
        for e, c in self._terms.items():
            term = c
            for x, power in zip(point, e):
                if power:
                    term *= x**power
            total += term
        return total

    def to_terms_list(self):
        """Terms in the JSON map schema form"""
        return [
            {"exps": list(e), "num": c.numerator, "den": c.denominator}
            for e, c in self._terms.items()
        ]


def _check_axis(axis: int, dimension: int):
    if not isinstance(axis, Integral) or not 1 <= axis <= dimension:
        raise AxisOutOfRangeError(f"Axis {axis} is outside 1..{dimension}.")


def partial_derivative(p: Polynomial, axis: int) -> Polynomial:
    return p.partial_derivative(axis)


def laplacian_poly(p: Polynomial) -> Polynomial:
    return p.laplacian()
