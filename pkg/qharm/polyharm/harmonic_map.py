import warnings
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from qharm.enums.shared import Branch
from qharm.exceptions import (
    DegenerateMapWarning,
    InvalidParameterError,
    NotHarmonicError,
    RankDeficientError,
)
from qharm.polyharm.basis import harmonic_basis
from qharm.polyharm.polynomial import Polynomial, format_monomial, to_fraction

# |det A| below this only warns, see linear_map
DET_WARN_TOLERANCE = 1e-12


class HarmonicMap:
    """
    A map u = (u_1, ..., u_n): R^n -> R^n with exactly harmonic polynomial components.

    Jacobians follow the convention Du(x)[i][j] = du_j/dx_i (row = differentiation
    variable, column = component). The exact partials are built once at construction.
    """

    __slots__ = ("_components", "_partials", "name")

    def __init__(self, components: Sequence[Polynomial], name: Optional[str] = None):
        components = tuple(components)
        n = len(components)
        if n < 1:
            raise InvalidParameterError("A harmonic map needs at least one component.")
        for j, component in enumerate(components, start=1):
            if component.dimension != n:
                raise InvalidParameterError(
                    f"Component {j} has {component.dimension} variables, expected {n}."
                )
            residual = component.laplacian()
            if not residual.is_zero():
                exponents, coefficient = next(iter(residual.terms.items()))
                raise NotHarmonicError(
                    f"Component {j} is not harmonic: its Laplacian has coefficient "
                    f"{coefficient} at {format_monomial(exponents)}."
                )

        self._components = components
        self._partials = tuple(
            tuple(component.partial_derivative(i) for component in components)
            for i in range(1, n + 1)
        )
        self.name = name

    @property
    def dimension(self):
        return len(self._components)

    @property
    def components(self) -> Tuple[Polynomial, ...]:
        return self._components

    @property
    def partials(self) -> Tuple[Tuple[Polynomial, ...], ...]:
        """partials[i][j] is du_j/dx_(i+1)"""
        return self._partials

    @property
    def degree(self):
        return max(component.degree for component in self._components)

    def __eq__(self, other):
        return isinstance(other, HarmonicMap) and self._components == other._components

    def __hash__(self):
        return hash(self._components)

    def __repr__(self):
        label = f"{self.name}: " if self.name else ""
        return f"HarmonicMap({label}" + ", ".join(repr(c) for c in self._components) + ")"

    def _as_points(self, points):
        points = np.asarray(points, dtype=np.float64)
        if points.ndim != 2 or points.shape[1] != self.dimension:
            raise InvalidParameterError(
                f"Expected points of shape (m, {self.dimension}), got {points.shape}."
            )
        return points

    def evaluate_many(self, points) -> np.ndarray:
        """u at each row of an (m, n) array; returns (m, n)"""
        points = self._as_points(points)
        return np.stack([c.evaluate_many(points) for c in self._components], axis=1)

    def jacobian_many(self, points) -> np.ndarray:
        """Du at each row of an (m, n) array; returns (m, n, n) indexed [point, i, j]"""
        points = self._as_points(points)
        n = self.dimension
        out = np.empty((points.shape[0], n, n))
        for i in range(n):
            for j in range(n):
                out[:, i, j] = self._partials[i][j].evaluate_many(points)
        return out

    def evaluate(self, x) -> np.ndarray:
        return self.evaluate_many(np.asarray(x, dtype=np.float64)[None, :])[0]

    def jacobian(self, x) -> np.ndarray:
        return self.jacobian_many(np.asarray(x, dtype=np.float64)[None, :])[0]

    def evaluate_exact(self, x) -> List[Fraction]:
        return [c.evaluate_exact(x) for c in self._components]

    def jacobian_exact(self, x) -> List[List[Fraction]]:
        return [[p.evaluate_exact(x) for p in row] for row in self._partials]


def evaluate(u: HarmonicMap, x) -> np.ndarray:
    return u.evaluate(x)


def jacobian(u: HarmonicMap, x) -> np.ndarray:
    return u.jacobian(x)


def _exact_matrix(A) -> List[List[Fraction]]:
    rows = [[to_fraction(a) for a in row] for row in np.asarray(A, dtype=object).tolist()]
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise InvalidParameterError("Linear maps need a square, non-empty matrix.")
    return rows


def _exact_determinant(rows: List[List[Fraction]]) -> Fraction:
    a = [list(row) for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            factor = a[r][col] / a[col][col]
            if factor:
                a[r] = [x - factor * y for x, y in zip(a[r], a[col])]
    return det


def _linear_components(rows: List[List[Fraction]]) -> List[Polynomial]:
    n = len(rows)
    components = []
    for row in rows:
        terms = {}
        for i, a in enumerate(row):
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = a
        components.append(Polynomial(n, terms))
    return components


def linear_map(A, name: Optional[str] = None) -> HarmonicMap:
    """
    The linear harmonic map x -> Ax, components (Ax)_j.

    Its Jacobian is the transpose of A under the {du_j/dx_i} convention.

    Raises:
        RankDeficientError: A is exactly singular.

    Warns:
        DegenerateMapWarning: 0 < |det A| < 1e-12.
    """
    rows = _exact_matrix(A)
    det = _exact_determinant(rows)
    if det == 0:
        raise RankDeficientError("Linear map matrix is singular (exact determinant 0).")
    if abs(float(det)) < DET_WARN_TOLERANCE:
        warnings.warn(
            f"Linear map is nearly singular (|det A| = {abs(float(det)):.3e}); "
            "it is harmonic but not usefully quasiregular.",
            DegenerateMapWarning,
            stacklevel=2,
        )
    return HarmonicMap(_linear_components(rows), name=name)


def identity_map(n: int) -> HarmonicMap:
    return linear_map(np.eye(n, dtype=int), name=f"identity:{n}")


def extremal_map(n: int, K, branch: Branch) -> HarmonicMap:
    """
    Extremal linear maps diag(1, ..., 1, K) (stretch) and diag(1, ..., 1, 1/K) (compress).

    K is taken exactly (floats at their binary value), so 1/K is an exact rational.
    """
    if n < 2:
        raise InvalidParameterError(f"Extremal maps need n >= 2, got {n}.")
    K = to_fraction(K)
    if K < 1:
        raise InvalidParameterError(f"K must be >= 1, got {float(K)}.")
    diagonal = [Fraction(1)] * (n - 1) + [K if branch == Branch.STRETCH else 1 / K]
    rows = [[diagonal[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    return HarmonicMap(_linear_components(rows), name=f"{branch}:{n},{float(K):g}")


def zsquared_map() -> HarmonicMap:
    """(x1^2 - x2^2, 2 x1 x2), z^2 in complex notation"""
    u1 = Polynomial(2, {(2, 0): 1, (0, 2): -1})
    u2 = Polynomial(2, {(1, 1): 2})
    return HarmonicMap([u1, u2], name="zsquared")


def random_harmonic_map(n: int, max_degree: int, seed: int) -> HarmonicMap:
    """
    Random map whose components combine harmonic basis elements of degrees
    1..max_degree with integer coefficients in [-9, 9]; deterministic in seed.
    """
    if max_degree < 1:
        raise InvalidParameterError(f"max_degree must be >= 1, got {max_degree}.")
    rng = np.random.default_rng(seed)
    components = []
    for _ in range(n):
        component = Polynomial.zero(n)
        for d in range(1, max_degree + 1):
            for b in harmonic_basis(n, d):
                component = component + int(rng.integers(-9, 10)) * b
        components.append(component)
    return HarmonicMap(components, name=f"random:{n},{max_degree},{seed}")


def regularized_map(u: HarmonicMap, m: int) -> HarmonicMap:
    """u_m = u + (1/m, 0, ..., 0)"""
    if m < 1:
        raise InvalidParameterError(f"Regularization index must be >= 1, got {m}.")
    components = list(u.components)
    components[0] = components[0] + Fraction(1, int(m))
    return HarmonicMap(components, name=f"{u.name or 'u'}+1/{m}")


def compose_linear(A, u: HarmonicMap) -> HarmonicMap:
    """x -> A u(x) with A taken exactly"""
    rows = _exact_matrix(A)
    if len(rows) != u.dimension:
        raise InvalidParameterError(f"Matrix size {len(rows)} does not match map dimension {u.dimension}.")
    components = []
    for row in rows:
        component = Polynomial.zero(u.dimension)
        for a, u_i in zip(row, u.components):
            if a:
                component = component + a * u_i
        components.append(component)
    return HarmonicMap(components)
