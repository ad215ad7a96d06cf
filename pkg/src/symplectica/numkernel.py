"""Dense kernels for small real matrices.

The symmetric eigensolver is a cyclic Jacobi iteration in round-robin
(parallel) ordering: every round applies a set of disjoint plane rotations
at once, so one round costs two matrix products.  At the sizes used here
(up to 32x32) this is accurate to a few ulps of the norm and fast enough.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT
from .errors import DimensionMismatch, NoConvergence, NonSymmetric, Singular

MAX_SWEEPS = 100


def inf_norm(a):
    """Induced infinity norm (maximum absolute row sum)."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.abs(a).sum(axis=-1).max())


def as_matrix(a, square=True):
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] == 0 or a.shape[1] == 0:
        raise DimensionMismatch(f"expected a non-empty 2-D matrix, got shape {a.shape}")
    if square and a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def check_symmetric(a, rtol=DEFAULT.sym):
    a = as_matrix(a)
    scale = inf_norm(a)
    if inf_norm(a - a.T) > rtol * max(scale, np.finfo(float).tiny):
        raise NonSymmetric("matrix is not symmetric within tolerance")
    return a


def check_antisymmetric(a, rtol=DEFAULT.sym):
    a = as_matrix(a)
    scale = inf_norm(a)
    if inf_norm(a + a.T) > rtol * max(scale, np.finfo(float).tiny):
        raise NonSymmetric("matrix is not antisymmetric within tolerance")
    return a


@dataclass(frozen=True)
class SymEigResult:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # columns


@dataclass(frozen=True)
class SkewCanonResult:
    rotation: np.ndarray
    betas: np.ndarray  # descending, positive


def _round_robin(size):
    """Disjoint index pairs for each round of a tournament schedule."""
    players = list(range(size))
    rounds = []
    for _ in range(size - 1):
        half = size // 2
        rounds.append((np.array(players[:half]), np.array(players[half:][::-1])))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def sym_eig(a, rtol=DEFAULT.sym):
    """Eigen-decomposition of a real symmetric matrix by cyclic Jacobi.

    Parameters
    ----------
    a : array_like
        Symmetric matrix (checked to relative tolerance ``rtol``).

    Returns
    -------
    SymEigResult
        Ascending eigenvalues and an orthogonal matrix of eigenvectors
        (columns), so that ``Q @ diag(lam) @ Q.T`` reproduces ``a``.
    """
    a = check_symmetric(a, rtol)
    size = a.shape[0]
    work = 0.5 * (a + a.T)
    vecs = np.eye(size)
    scale = inf_norm(work)
    if size == 1 or scale == 0.0:
        return SymEigResult(np.diag(work).copy(), vecs)

    padded = size + (size % 2)
    if padded != size:
        # dummy index decouples from everything; dropped at the end
        work = np.pad(work, ((0, 1), (0, 1)))
        vecs = np.eye(padded)
    rounds = _round_robin(padded)
    target = 1e-14 * scale

    for _ in range(MAX_SWEEPS):
        off = work - np.diag(np.diag(work))
        if np.sqrt(np.sum(off * off)) <= target:
            break
        for p, q in rounds:
            apq = work[p, q]
            app = work[p, p]
            aqq = work[q, q]
            active = np.abs(apq) > 1e-300
            safe = np.where(active, apq, 1.0)
            tau = (aqq - app) / (2.0 * safe)
            t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            rot = np.eye(padded)
            rot[p, p] = c
            rot[q, q] = c
            rot[p, q] = s
            rot[q, p] = -s
            work = rot.T @ work @ rot
            work = 0.5 * (work + work.T)
            vecs = vecs @ rot
    else:
        raise NoConvergence(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")

    if padded != size:
        # the dummy index never mixes, so its eigenvector is the last unit vector
        keep = np.argsort(np.abs(vecs[size, :]))[:size]
        vecs = vecs[:size, keep]
        work = work[np.ix_(keep, keep)]
    lam = np.diag(work).copy()
    order = np.argsort(lam, kind="stable")
    return SymEigResult(lam[order], vecs[:, order])


def skew_canonical(a, rtol=DEFAULT.sym):
    """Orthogonal canonical form of a nonsingular antisymmetric matrix.

    Finds an orthogonal ``O`` with ``O.T @ a @ O`` equal to the direct sum of
    ``beta_j * [[0, 1], [-1, 0]]``, ``beta_j > 0`` sorted descending.

    The eigenvectors of the positive matrix ``-a @ a`` come in degenerate
    pairs.  Each pair is assembled as ``(e, -a e / beta)``; candidates are
    projected off the span already used, which is ``a``-invariant, so the
    projections stay eigenvectors even inside degenerate clusters.
    """
    a = check_antisymmetric(a, rtol)
    size = a.shape[0]
    if size % 2:
        raise DimensionMismatch("antisymmetric canonical form needs even dimension")
    a = 0.5 * (a - a.T)
    scale = inf_norm(a)
    eig = sym_eig(a.T @ a)
    lam = eig.eigenvalues[::-1]
    cand = eig.eigenvectors[:, ::-1]
    if scale == 0.0 or lam[-1] <= (1e-12 * scale) ** 2:
        raise Singular("antisymmetric matrix is singular")

    cols = []
    betas = []
    used = np.zeros((size, 0))
    for k in range(size):
        if len(betas) == size // 2:
            break
        u = cand[:, k]
        u = u - used @ (used.T @ u)
        norm = np.linalg.norm(u)
        if norm < 0.1:
            continue
        e = u / norm
        ae = a @ e
        beta = np.linalg.norm(ae)
        f = -ae / beta
        # deterministic sign: largest-magnitude component of e positive
        if e[np.argmax(np.abs(e))] < 0:
            e, f = -e, -f
        cols.append((e, f))
        betas.append(float(e @ a @ f))
        used = np.column_stack([used, e, f])
    if len(betas) != size // 2:
        raise NoConvergence("could not pair the eigenvectors of -A^2")

    order = np.argsort(-np.asarray(betas), kind="stable")
    rot = np.empty((size, size))
    for slot, idx in enumerate(order):
        rot[:, 2 * slot] = cols[idx][0]
        rot[:, 2 * slot + 1] = cols[idx][1]
    return SkewCanonResult(rot, np.asarray(betas)[order])


def sqrt_spd(a):
    """Principal square root of a symmetric positive definite matrix."""
    eig = sym_eig(a)
    lam = eig.eigenvalues
    if lam[0] <= 0:
        raise Singular("matrix is not positive definite")
    q = eig.eigenvectors
    root = (q * np.sqrt(lam)) @ q.T
    return 0.5 * (root + root.T)


def inv_sqrt_spd(a):
    eig = sym_eig(a)
    lam = eig.eigenvalues
    if lam[0] <= 0:
        raise Singular("matrix is not positive definite")
    q = eig.eigenvectors
    root = (q / np.sqrt(lam)) @ q.T
    return 0.5 * (root + root.T)


def _check_rank(a):
    sv = np.linalg.svd(a, compute_uv=False)
    if sv[-1] <= 1e-14 * sv[0] or sv[0] == 0.0:
        raise Singular("matrix is numerically rank deficient")


def inverse(a):
    a = as_matrix(a)
    _check_rank(a)
    return np.linalg.inv(a)


def solve(a, b):
    a = as_matrix(a)
    _check_rank(a)
    return np.linalg.solve(a, np.asarray(b, dtype=float))


def det(a):
    a = as_matrix(a)
    return float(np.linalg.det(a))


def polar(a):
    """Orthogonal polar factor ``U`` and positive factor ``P``, ``a = U @ P``."""
    a = as_matrix(a)
    w, s, vt = np.linalg.svd(a)
    u = w @ vt
    p = (vt.T * s) @ vt
    return u, 0.5 * (p + p.T)
