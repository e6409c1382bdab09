import math
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations_with_replacement
from typing import List, Sequence, Tuple

from qharm.exceptions import InvalidParameterError
from qharm.polyharm.polynomial import Exponent, Polynomial


def monomials(n: int, d: int) -> List[Exponent]:
    """All exponent tuples of total degree d in n variables, x1^d first"""
    if d < 0:
        return []
    exponents = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for axis in combo:
            e[axis] += 1
        exponents.append(tuple(e))
    return sorted(exponents, reverse=True)


def harmonic_dimension(n: int, d: int) -> int:
    """C(n+d-1, d) - C(n+d-3, d-2), the second binomial being 0 for d < 2"""
    lower = math.comb(n + d - 3, d - 2) if d >= 2 else 0
    return math.comb(n + d - 1, d) - lower


def _laplacian_matrix(n: int, d: int) -> Tuple[List[List[int]], List[Exponent]]:
    """Integer matrix of the Laplacian from degree d to degree d-2 monomials"""
    columns = monomials(n, d)
    rows = monomials(n, d - 2)
    row_index = {e: i for i, e in enumerate(rows)}
    matrix = [[0] * len(columns) for _ in rows]
    for j, e in enumerate(columns):
        for k, power in enumerate(e):
            if power < 2:
                continue
            lowered = e[:k] + (power - 2,) + e[k + 1 :]
            matrix[row_index[lowered]][j] += power * (power - 1)
    return matrix, columns


def _primitive(row: List[int]) -> List[int]:
    divisor = reduce(math.gcd, (abs(x) for x in row if x), 0)
    if divisor > 1:
        return [x // divisor for x in row]
    return row


def _fraction_free_kernel(matrix: List[List[int]], ncols: int) -> List[List[int]]:
    """
    Integer basis of the kernel of an integer matrix.

    Gauss-Jordan elimination with integer row combinations (each row is
    kept primitive), then one kernel vector per free column.
    """
    rows = [list(r) for r in matrix]
    pivots = []
    rank = 0
    for col in range(ncols):
        pivot_row = next((i for i in range(rank, len(rows)) if rows[i][col] != 0), None)
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        pivot = rows[rank]
        for i in range(len(rows)):
            if i == rank or rows[i][col] == 0:
                continue
            a, b = pivot[col], rows[i][col]
            rows[i] = _primitive([a * x - b * y for x, y in zip(rows[i], pivot)])
        pivots.append((rank, col))
        rank += 1

    pivot_columns = {col for _, col in pivots}
    kernel = []
    for free in range(ncols):
        if free in pivot_columns:
            continue
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for r, col in pivots:
            vector[col] = Fraction(-rows[r][free], rows[r][col])
        scale = reduce(lambda acc, v: acc * v.denominator // math.gcd(acc, v.denominator), vector, 1)
        kernel.append(_primitive([int(v * scale) for v in vector]))
    return kernel


@lru_cache(maxsize=None)
def _harmonic_basis_cached(n: int, d: int) -> Tuple[Polynomial, ...]:
    matrix, columns = _laplacian_matrix(n, d)
    basis = []
    for vector in _fraction_free_kernel(matrix, len(columns)):
        basis.append(Polynomial(n, {e: c for e, c in zip(columns, vector) if c}))
    for b in basis:
        if not b.laplacian().is_zero():
            raise ArithmeticError(f"Kernel element {b} is not harmonic.")
    return tuple(basis)


def harmonic_basis(n: int, d: int) -> List[Polynomial]:
    """
    Basis of the homogeneous harmonic polynomials of degree d in n variables.

    Computed as the kernel of the Laplacian acting on degree-d coefficients;
    every element has an exactly vanishing Laplacian.

    Args:
        n (int): Number of variables, at least 2.
        d (int): Degree, at least 0.

    Returns:
        list[Polynomial]: harmonic_dimension(n, d) integer-coefficient polynomials.
    """
    if n < 2:
        raise InvalidParameterError(f"harmonic_basis needs n >= 2, got {n}.")
    if d < 0:
        raise InvalidParameterError(f"harmonic_basis needs d >= 0, got {d}.")
    return list(_harmonic_basis_cached(int(n), int(d)))


def basis_span_contains(basis: Sequence[Polynomial], p: Polynomial) -> bool:
    """True when p lies in the rational span of basis (exact elimination)"""
    polys = list(basis) + [p]
    den = 1
    for poly in polys:
        for c in poly.terms.values():
            den = den * c.denominator // math.gcd(den, c.denominator)

    exponents = sorted({e for poly in polys for e in poly.terms}, reverse=True)
    # columns are the basis elements then p; a kernel vector with a nonzero last entry expresses p
    matrix = [[int(poly.coefficient(e) * den) for poly in polys] for e in exponents]
    kernel = _fraction_free_kernel(matrix, len(polys))
    return any(v[-1] != 0 for v in kernel)
