"""Symmetric 3x3 tensor algebra.

Tensors are plain ``(3, 3)`` numpy arrays. Fourth-order tensors with both
minor symmetries are represented as ``(6, 6)`` matrices acting on the
orthonormal 6-vector coordinates returned by :func:`to_basis6`, so that the
Frobenius inner product of two symmetric tensors is the ordinary dot product
of their coordinates.
"""

from typing import Callable, NamedTuple

import numpy as np

SQRT2 = np.sqrt(2.0)

# (row, col) of the six basis elements: three axial, then the 23, 13, 12 shears
_PAIRS = ((0, 0), (1, 1), (2, 2), (1, 2), (0, 2), (0, 1))
_ROW_I = np.array([i for i, _ in _PAIRS])
_ROW_J = np.array([j for _, j in _PAIRS])
_ROW_WEIGHT = np.array([1.0, 1.0, 1.0, SQRT2, SQRT2, SQRT2])
_COL_WEIGHT = np.array([0.5, 0.5, 0.5, 1 / SQRT2, 1 / SQRT2, 1 / SQRT2])

IDENTITY = np.eye(3)
# Id_sym in basis6 coordinates
IDENTITY66 = np.eye(6)
# 1 (x) 1
HYDROSTATIC6 = np.array([1.0, 1.0, 1.0, 0.0, 0.0, 0.0])
ONE_DYAD_ONE = np.outer(HYDROSTATIC6, HYDROSTATIC6)


class NotPositiveDefinite(ValueError):
    pass


class Spectral3(NamedTuple):
    """Eigenvalues in descending order and eigenvectors as matching columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T


def sym(X):
    return 0.5 * (X + X.T)


def eig_sym(X) -> Spectral3:
    X = np.asarray(X, dtype=float)
    w, v = np.linalg.eigh(sym(X))
    return Spectral3(w[::-1].copy(), v[:, ::-1].copy())


def spectral_apply(X, fn: Callable) -> np.ndarray:
    """Isotropic tensor function ``sum_i fn(x_i) v_i (x) v_i``."""
    w, v = eig_sym(X)
    return (v * fn(w)) @ v.T


def log_spd(X, tol: float = 0.0) -> np.ndarray:
    w, v = eig_sym(X)
    if w[-1] <= tol:
        raise NotPositiveDefinite(f"minimum eigenvalue {w[-1]:.3e} is not positive")
    return (v * np.log(w)) @ v.T


def exp_sym(X) -> np.ndarray:
    return spectral_apply(X, np.exp)


def sqrt_spd(X) -> np.ndarray:
    w, v = eig_sym(X)
    if w[-1] <= 0.0:
        raise NotPositiveDefinite(f"minimum eigenvalue {w[-1]:.3e} is not positive")
    return (v * np.sqrt(w)) @ v.T


def to_basis6(X) -> np.ndarray:
    return np.asarray(X, dtype=float)[_ROW_I, _ROW_J] * _ROW_WEIGHT


def from_basis6(x) -> np.ndarray:
    a, b, c, d, e, f = np.asarray(x, dtype=float) * [1, 1, 1, 1 / SQRT2, 1 / SQRT2, 1 / SQRT2]
    return np.array([[a, f, e], [f, b, d], [e, d, c]])


def basis6(a: int) -> np.ndarray:
    """The a-th orthonormal basis tensor of Sym(3)."""
    return _BASIS6[a].copy()


_BASIS6 = tuple(from_basis6(e) for e in np.eye(6))


def dyad66(A, B) -> np.ndarray:
    """6x6 representation of A (x) B, i.e. H -> A <B, H>."""
    return np.outer(to_basis6(A), to_basis6(B))


def apply66(T, H) -> np.ndarray:
    return from_basis6(np.asarray(T) @ to_basis6(H))


def quad66(T, H) -> float:
    h = to_basis6(H)
    return float(h @ np.asarray(T) @ h)


def tangent_eigvals(T) -> np.ndarray:
    """Eigenvalues (ascending) of the symmetric part of a 6x6 tangent."""
    T = np.asarray(T, dtype=float)
    return np.linalg.eigvalsh(0.5 * (T + T.T))


def tangent_min_eig(T) -> float:
    return float(tangent_eigvals(T)[0])


def restricted_eigvals(T, exclude) -> np.ndarray:
    """Eigenvalues of the symmetric part of ``T`` on the orthogonal complement of ``exclude``.

    ``exclude`` is a symmetric tensor (or its 6-vector); the returned five
    eigenvalues are ascending.
    """
    e = np.asarray(exclude, dtype=float)
    if e.shape == (3, 3):
        e = to_basis6(e)
    e = e / np.linalg.norm(e)
    # orthonormal basis of the complement from a full QR of [e | I]
    q, _ = np.linalg.qr(np.column_stack([e, np.eye(6)]))
    P = q[:, 1:6]
    T = np.asarray(T, dtype=float)
    return np.linalg.eigvalsh(P.T @ (0.5 * (T + T.T)) @ P)


def eigenframe66(vectors) -> np.ndarray:
    """Orthogonal 6x6 matrix whose columns are the eigenframe basis tensors in global coordinates.

    Column order follows :data:`_PAIRS`, so a tensor that is diagonal in the
    eigenframe 6-basis, ``D``, becomes ``R @ D @ R.T`` globally.
    """
    Q = np.asarray(vectors, dtype=float)
    Qi, Qj = Q[_ROW_I], Q[_ROW_J]
    M = Qi[:, _ROW_I] * Qj[:, _ROW_J] + Qj[:, _ROW_I] * Qi[:, _ROW_J]
    return M * _ROW_WEIGHT[:, None] * _COL_WEIGHT[None, :]


def _exprel_mid(k: float, xi, xj):
    """Divided difference ``(exp(k xi) - exp(k xj)) / (xi - xj)``, stable for xi ~ xj."""
    d = 0.5 * k * (xi - xj)
    small = np.abs(d) < 1e-4
    dsafe = np.where(small, 1.0, d)
    shc = np.where(small, 1.0 + d * d / 6.0 + d**4 / 120.0, np.sinh(dsafe) / dsafe)
    return k * np.exp(0.5 * k * (xi + xj)) * shc


def exp_derivative66(logs, vectors, k: float = 1.0) -> np.ndarray:
    """Derivative of ``X -> exp(k X)`` at ``X = sum_i logs_i v_i (x) v_i`` as a 6x6 tangent."""
    x = np.asarray(logs, dtype=float)
    diag = _exprel_mid(k, x[_ROW_I], x[_ROW_J])
    R = eigenframe66(vectors)
    return (R * diag) @ R.T
