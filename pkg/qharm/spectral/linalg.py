import numpy as np

from qharm.exceptions import NonSymmetricMatrixError

SYMMETRY_TOLERANCE = 1e-12
# stop when off-diagonal Frobenius mass < JACOBI_TOLERANCE * diagonal mass
JACOBI_TOLERANCE = 1e-14
MAX_SWEEPS = 64


def gram(J) -> np.ndarray:
    """Du Du^t (rows of J are differentiation variables), symmetrized after the product"""
    J = np.asarray(J, dtype=np.float64)
    G = J @ np.swapaxes(J, -1, -2)
    return 0.5 * (G + np.swapaxes(G, -1, -2))


def _check_symmetric(A: np.ndarray):
    asymmetry = np.max(np.abs(A - np.swapaxes(A, -1, -2)), axis=(-2, -1))
    scale = np.maximum(1.0, np.max(np.abs(A), axis=(-2, -1)))
    if np.any(asymmetry > SYMMETRY_TOLERANCE * scale):
        raise NonSymmetricMatrixError(
            f"Matrix is not symmetric (max |S - S^t| = {float(np.max(asymmetry)):.3e})."
        )


def sym_eigenvalues_batch(S) -> np.ndarray:
    """
    Eigenvalues of a stack of symmetric matrices by cyclic Jacobi sweeps.

    Every matrix in the stack takes the same (p, q) rotation order; matrices that
    already meet the stopping rule get the identity rotation.

    Args:
        S (array): Shape (m, n, n).

    Returns:
        np.ndarray: Shape (m, n), ascending per row.

    Raises:
        NonSymmetricMatrixError: If any matrix is asymmetric beyond 1e-12 (relative).
    """
    A = np.array(S, dtype=np.float64, copy=True)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise ValueError(f"Expected a stack of square matrices, got shape {A.shape}.")
    _check_symmetric(A)
    A = 0.5 * (A + np.swapaxes(A, 1, 2))
    n = A.shape[1]
    off_mask = ~np.eye(n, dtype=bool)

    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        for _ in range(MAX_SWEEPS):
            off = np.sqrt(np.sum(A[:, off_mask] ** 2, axis=1))
            diag = np.sqrt(np.sum(np.diagonal(A, axis1=1, axis2=2) ** 2, axis=1))
            active = off > JACOBI_TOLERANCE * diag
            if not active.any():
                break

            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = A[:, p, q]
                    rotate = active & (apq != 0.0)
                    if not rotate.any():
                        continue
                    theta = (A[:, q, q] - A[:, p, p]) / (2.0 * np.where(rotate, apq, 1.0))
                    t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
                    t = np.where(rotate & np.isfinite(t), t, 0.0)
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c

                    col_p = A[:, :, p].copy()
                    col_q = A[:, :, q].copy()
                    A[:, :, p] = c[:, None] * col_p - s[:, None] * col_q
                    A[:, :, q] = s[:, None] * col_p + c[:, None] * col_q

                    row_p = A[:, p, :].copy()
                    row_q = A[:, q, :].copy()
                    A[:, p, :] = c[:, None] * row_p - s[:, None] * row_q
                    A[:, q, :] = s[:, None] * row_p + c[:, None] * row_q

                    A[rotate, p, q] = 0.0
                    A[rotate, q, p] = 0.0

    return np.sort(np.diagonal(A, axis1=1, axis2=2), axis=1)


def sym_eigenvalues(S) -> list:
    """Ascending eigenvalues of one symmetric matrix (cyclic Jacobi)"""
    S = np.asarray(S, dtype=np.float64)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"Expected a square matrix, got shape {S.shape}.")
    return sym_eigenvalues_batch(S[None, :, :])[0].tolist()


def singular_values_batch(J) -> np.ndarray:
    """lambda_1 <= ... <= lambda_n of each Jacobian, negative round-off clamped to 0"""
    eigenvalues = sym_eigenvalues_batch(gram(J))
    return np.sqrt(np.clip(eigenvalues, 0.0, None))
