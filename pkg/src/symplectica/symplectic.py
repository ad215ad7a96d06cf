"""Real symplectic transformations and their optical generators.

Matrices act on the quadrature vector in interleaved ordering
``(x1, p1, ..., xn, pn)``.  A transformation ``S`` maps a covariance matrix
to ``S.T @ sigma @ S``; circuits compose left to right in time order.
Mode indices in the public API are 1-based.
"""

from dataclasses import dataclass

import numpy as np

from . import numkernel as nk
from .config import DEFAULT
from .errors import BadModeIndex, DimensionMismatch, NonPositiveSqueeze, NotSymplectic


def symplectic_form(n):
    """Direct sum of ``n`` copies of ``[[0, 1], [-1, 0]]``."""
    if n < 1:
        raise DimensionMismatch("mode count must be positive")
    return np.kron(np.eye(n), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def mode_count(matrix):
    size = matrix.shape[0]
    if size % 2 or matrix.shape[1] != size:
        raise DimensionMismatch(f"expected a square matrix of even size, got {matrix.shape}")
    return size // 2


def blocked_permutation(n):
    """Index array ``perm`` such that ``v[perm]`` is ``v`` in blocked ordering."""
    return np.concatenate([np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)])


def to_blocked(matrix):
    matrix = np.asarray(matrix, dtype=float)
    perm = blocked_permutation(mode_count(matrix))
    return matrix[np.ix_(perm, perm)]


def to_interleaved(matrix):
    matrix = np.asarray(matrix, dtype=float)
    inv = np.argsort(blocked_permutation(mode_count(matrix)))
    return matrix[np.ix_(inv, inv)]


def symplectic_residual(s):
    s = np.asarray(s, dtype=float)
    omega = symplectic_form(mode_count(s))
    return nk.inf_norm(s @ omega @ s.T - omega)


def is_symplectic(s, tol=DEFAULT.symp):
    s = nk.as_matrix(s)
    return symplectic_residual(s) <= tol


def orthogonality_residual(o):
    o = np.asarray(o, dtype=float)
    return nk.inf_norm(o.T @ o - np.eye(o.shape[0]))


def as_symplectic(s, tol=DEFAULT.symp):
    """Validate ``s`` as an element of Sp(2n, R) and return it as an array."""
    s = nk.as_matrix(s)
    mode_count(s)
    res = symplectic_residual(s)
    if res > tol:
        raise NotSymplectic(f"symplectic residual {res:.3e} exceeds {tol:.1e}")
    if abs(np.linalg.det(s) - 1.0) > 1e-8:
        raise NotSymplectic("determinant differs from +1")
    return s


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def squeezer(z):
    if not z > 0:
        raise NonPositiveSqueeze(f"squeezing factor must be positive, got {z}")
    return np.diag([z, 1.0 / z])


def phase_shifter():
    """Quarter rotation, sign fixed so that seraphique = P.T B P on mode 2."""
    return np.array([[0.0, 1.0], [-1.0, 0.0]])


def beam_splitter(theta):
    c, s = np.cos(theta), np.sin(theta)
    eye = np.eye(2)
    return np.block([[c * eye, s * eye], [-s * eye, c * eye]])


def seraphique(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([
        [c, 0.0, 0.0, s],
        [0.0, c, -s, 0.0],
        [0.0, s, c, 0.0],
        [-s, 0.0, 0.0, c],
    ])


def embed(op, modes, n):
    """Act with ``op`` on the listed (1-based) modes and as identity elsewhere."""
    op = np.asarray(op, dtype=float)
    k = mode_count(op)
    modes = [int(m) for m in np.atleast_1d(modes)]
    if len(modes) != k:
        raise BadModeIndex(f"operation acts on {k} modes, {len(modes)} indices given")
    if len(set(modes)) != k or any(m < 1 or m > n for m in modes):
        raise BadModeIndex(f"mode indices {modes} invalid for {n} modes")
    idx = np.ravel([[2 * (m - 1), 2 * (m - 1) + 1] for m in modes])
    out = np.eye(2 * n)
    out[np.ix_(idx, idx)] = op
    return out


def direct_sum(*blocks):
    size = sum(b.shape[0] for b in blocks)
    out = np.zeros((size, size))
    at = 0
    for b in blocks:
        d = b.shape[0]
        out[at:at + d, at:at + d] = b
        at += d
    return out


def conjugate_cm(sigma, s):
    """Return ``s.T @ sigma @ s`` (symmetrised)."""
    sigma = np.asarray(sigma, dtype=float)
    s = np.asarray(s, dtype=float)
    if sigma.shape != s.shape:
        raise DimensionMismatch(f"shapes {sigma.shape} and {s.shape} differ")
    out = s.T @ sigma @ s
    return 0.5 * (out + out.T)


def symplectic_inverse(s):
    """Inverse via ``-Omega S^T Omega``; exact for symplectic ``s``."""
    omega = symplectic_form(mode_count(s))
    return -omega @ s.T @ omega


@dataclass(frozen=True)
class EulerFactors:
    left: np.ndarray
    squeezing: np.ndarray
    right: np.ndarray

    @property
    def z(self):
        return np.diag(self.squeezing)[::2].copy()

    def reconstruct(self):
        return self.left @ self.squeezing @ self.right


def symplectic_basis_from_eigvecs(values, vectors, n):
    """Orthogonal symplectic matrix diagonalising a positive symplectic matrix.

    ``values``/``vectors`` are an ascending eigen-decomposition of a symmetric
    positive symplectic matrix ``P``.  Eigenvectors with eigenvalue ``z`` pair
    with ``Omega.T e`` at ``1/z``; candidates are taken by descending
    eigenvalue and projected off the span already used, which keeps the
    unit-eigenvalue cluster consistent.
    """
    omega_t = symplectic_form(n).T
    cand = vectors[:, ::-1]
    size = 2 * n
    used = np.zeros((size, 0))
    cols = []
    for k in range(size):
        if len(cols) == n:
            break
        u = cand[:, k]
        u = u - used @ (used.T @ u)
        norm = np.linalg.norm(u)
        if norm < 0.1:
            continue
        e = u / norm
        if e[np.argmax(np.abs(e))] < 0:
            e = -e
        f = omega_t @ e
        cols.append((e, f))
        used = np.column_stack([used, e, f])
    if len(cols) != n:
        raise NotSymplectic("could not build a symplectic eigenbasis")
    w = np.empty((size, size))
    for j, (e, f) in enumerate(cols):
        w[:, 2 * j] = e
        w[:, 2 * j + 1] = f
    return w


def euler_decompose(s, tol=DEFAULT.symp):
    """Factor ``s = left @ Z @ right`` with orthogonal symplectic outer factors.

    ``Z`` is the direct sum of ``diag(z_j, 1/z_j)`` with ``z_j >= 1`` sorted
    descending.  The polar decomposition ``s = P U`` supplies ``U``; the
    positive symplectic ``P`` is diagonalised in a symplectic eigenbasis.
    """
    s = as_symplectic(s, tol)
    n = mode_count(s)
    p = nk.sqrt_spd(s @ s.T)
    u = nk.solve(p, s)
    eig = nk.sym_eig(p)
    w = symplectic_basis_from_eigvecs(eig.eigenvalues, eig.eigenvectors, n)
    d = w.T @ p @ w
    z = np.maximum(np.diag(d)[::2], 1.0)
    zmat = np.diag(np.ravel(np.column_stack([z, 1.0 / z])))
    return EulerFactors(w, zmat, w.T @ u)
