"""Covariance matrices of zero-mean Gaussian states.

States are plain ``(2n, 2n)`` float arrays in interleaved ordering with the
vacuum normalised to the identity.  :func:`validate_cm` is the gate every
public entry point passes input through.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from . import numkernel as nk
from .config import DEFAULT
from .errors import (
    BadModeIndex,
    ConditionViolated,
    DimensionMismatch,
    NotPositiveDefinite,
    NotPure,
    UnphysicalState,
    UnphysicalTemperature,
)
from .symplectic import (
    blocked_permutation,
    mode_count,
    symplectic_form,
)


def validate_cm(sigma, tol=DEFAULT.phys):
    """Check symmetry, positivity and the uncertainty relation.

    Returns the symmetrised matrix.  Raises :class:`NotPositiveDefinite` or
    :class:`UnphysicalState` instead of repairing the input.
    """
    sigma = nk.check_symmetric(sigma)
    mode_count(sigma)
    sigma = 0.5 * (sigma + sigma.T)
    if nk.sym_eig(sigma).eigenvalues[0] <= 0:
        raise NotPositiveDefinite("covariance matrix is not positive definite")
    nu = _symplectic_spectrum(sigma)
    if nu[-1] < 1.0 - tol:
        raise UnphysicalState(
            f"smallest symplectic eigenvalue {nu[-1]:.12g} violates the uncertainty relation")
    return sigma


def vacuum(n):
    if n < 1:
        raise DimensionMismatch("mode count must be positive")
    return np.eye(2 * n)


def thermal(nu):
    nu = np.atleast_1d(np.asarray(nu, dtype=float))
    if nu.size == 0:
        raise DimensionMismatch("need at least one mode")
    if np.any(nu < 1.0):
        raise UnphysicalTemperature(f"symplectic eigenvalues below 1: {nu[nu < 1.0]}")
    return np.diag(np.repeat(nu, 2))


def two_mode_squeezed(r):
    if r < 0:
        raise ValueError("squeezing must be non-negative")
    c, s = np.cosh(r), np.sinh(r)
    return np.array([
        [c, 0.0, s, 0.0],
        [0.0, c, 0.0, -s],
        [s, 0.0, c, 0.0],
        [0.0, -s, 0.0, c],
    ])


def _symplectic_spectrum(sigma):
    n = mode_count(sigma)
    if n == 1:
        return np.array([np.sqrt(max(sigma[0, 0] * sigma[1, 1] - sigma[0, 1] ** 2, 0.0))])
    # -Omega sigma Omega sigma is similar to the symmetric R^T R below
    root = nk.sqrt_spd(sigma)
    r = root @ symplectic_form(n) @ root
    lam = nk.sym_eig(r.T @ r).eigenvalues[::-1]
    lam = np.maximum(lam, 0.0)
    return np.sqrt(0.5 * (lam[0::2] + lam[1::2]))


def symplectic_eigenvalues(sigma):
    """Symplectic spectrum, one value per mode, descending."""
    return _symplectic_spectrum(validate_cm(sigma))


def williamson(sigma):
    """Williamson normal form ``sigma = S.T @ diag(nu1, nu1, nu2, nu2, ...) @ S``.

    ``nu`` holds one descending value per mode.  Built from the antisymmetric canonical form of
    ``sigma^{-1/2} Omega sigma^{-1/2}``.

    Returns
    -------
    (ndarray, ndarray)
        The symplectic ``S`` and the spectrum ``nu``.
    """
    sigma = validate_cm(sigma)
    n = mode_count(sigma)
    eig = nk.sym_eig(sigma)
    if eig.eigenvalues[0] <= 0:
        raise NotPositiveDefinite("covariance matrix is not positive definite")
    q = eig.eigenvectors
    root = (q * np.sqrt(eig.eigenvalues)) @ q.T
    inv_root = (q / np.sqrt(eig.eigenvalues)) @ q.T
    canon = nk.skew_canonical(inv_root @ symplectic_form(n) @ inv_root)
    # ascending betas give descending nu; reorder whole pairs of columns
    o = canon.rotation.reshape(2 * n, n, 2)[:, ::-1, :].reshape(2 * n, 2 * n)
    nu = 1.0 / canon.betas[::-1]
    scale = np.repeat(1.0 / np.sqrt(nu), 2)
    s = (scale[:, None] * o.T) @ root
    return s, nu


def purity(sigma):
    """``Tr rho^2 = det(sigma)^(-1/2)``."""
    sigma = validate_cm(sigma)
    return float(np.prod(nk.sym_eig(sigma).eigenvalues) ** -0.5)


def cm_det(sigma):
    return float(np.prod(nk.sym_eig(sigma).eigenvalues))


def purity_residual(sigma):
    sigma = np.asarray(sigma, dtype=float)
    omega = symplectic_form(mode_count(sigma))
    return nk.inf_norm(-sigma @ omega @ sigma @ omega - np.eye(sigma.shape[0]))


def is_pure(sigma, tol=DEFAULT.pure):
    sigma = validate_cm(sigma)
    return purity_residual(sigma) <= tol


@dataclass(frozen=True)
class CmBlocks:
    sigma_x: np.ndarray
    sigma_p: np.ndarray
    sigma_xp: np.ndarray


def blocks(sigma):
    """Split into position, momentum and cross blocks (blocked ordering)."""
    sigma = validate_cm(sigma)
    n = mode_count(sigma)
    b = sigma[np.ix_(blocked_permutation(n), blocked_permutation(n))]
    return CmBlocks(b[:n, :n].copy(), b[n:, n:].copy(), b[:n, n:].copy())


def from_blocks(b):
    n = b.sigma_x.shape[0]
    for name, m in (("sigma_x", b.sigma_x), ("sigma_p", b.sigma_p), ("sigma_xp", b.sigma_xp)):
        if np.shape(m) != (n, n):
            raise DimensionMismatch(f"{name} has shape {np.shape(m)}, expected {(n, n)}")
    full = np.block([[b.sigma_x, b.sigma_xp], [b.sigma_xp.T, b.sigma_p]])
    inv = np.argsort(blocked_permutation(n))
    return validate_cm(full[np.ix_(inv, inv)])


def complete_pure(sigma_x, sigma_xp, tol=1e-9):
    """Assemble the pure state fixed by ``sigma_x`` and ``sigma_xp``.

    The momentum block follows as ``sigma_x^{-1} (1 + sigma_xp^2)``; the pair
    must satisfy ``sigma_xp sigma_x = sigma_x sigma_xp^T``.
    """
    sx = nk.check_symmetric(sigma_x)
    sxp = nk.as_matrix(sigma_xp)
    n = sx.shape[0]
    if sxp.shape != (n, n):
        raise DimensionMismatch("sigma_x and sigma_xp sizes differ")
    if nk.sym_eig(sx).eigenvalues[0] <= 0:
        raise NotPositiveDefinite("sigma_x is not positive definite")
    res = nk.inf_norm(sxp @ sx - sx @ sxp.T)
    if res > tol * max(1.0, nk.inf_norm(sx) * nk.inf_norm(sxp)):
        raise ConditionViolated(f"antisymmetric condition residual {res:.3e}")
    sp = nk.solve(sx, np.eye(n) + sxp @ sxp)
    sp = 0.5 * (sp + sp.T)
    return from_blocks(CmBlocks(sx, sp, sxp))


def _mode_indices(modes, n):
    modes = [int(m) for m in np.atleast_1d(modes)]
    if not modes or len(set(modes)) != len(modes) or any(m < 1 or m > n for m in modes):
        raise BadModeIndex(f"invalid mode subset {modes} for {n} modes")
    return modes


def quadrature_indices(modes):
    return np.ravel([[2 * (m - 1), 2 * (m - 1) + 1] for m in modes])


def reduced(sigma, modes):
    """Principal submatrix on the listed (1-based) modes, in the given order."""
    sigma = np.asarray(sigma, dtype=float)
    n = mode_count(sigma)
    idx = quadrature_indices(_mode_indices(modes, n))
    return sigma[np.ix_(idx, idx)].copy()


def entropy_term(nu):
    """Von Neumann entropy (nats) of a thermal mode with symplectic eigenvalue ``nu``."""
    nu = np.maximum(np.asarray(nu, dtype=float), 1.0)
    plus = 0.5 * (nu + 1.0)
    minus = 0.5 * (nu - 1.0)
    return xlogy(plus, plus) - xlogy(minus, minus)


def von_neumann_entropy(sigma):
    return float(np.sum(entropy_term(symplectic_eigenvalues(sigma))))


def entanglement_entropy(sigma, modes, tol=1e-8):
    sigma = validate_cm(sigma)
    if purity_residual(sigma) > tol:
        raise NotPure("entanglement entropy of reductions needs a pure state")
    return von_neumann_entropy(reduced(sigma, modes))


def mean_energy(sigma):
    return float(np.trace(validate_cm(sigma)) / 4.0)

