"""Phase-space Schmidt decomposition of pure bipartite Gaussian states."""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import gstate
from . import numkernel as nk
from .errors import DegenerateSpectrum, NotPure
from .symplectic import direct_sum, mode_count, symplectic_inverse

R_FLOOR = 1e-9


@dataclass(frozen=True)
class SchmidtForm:
    """Local factors bringing a pure state to two-mode squeezed pairs plus vacua.

    The state is first reordered as ``modes_a + modes_b``; in that ordering
    ``conjugate_cm(sigma, direct_sum(s_a, s_b))`` equals the direct sum of
    ``two_mode_squeezed(r_i)`` between A-mode ``i`` and B-mode ``i`` (with the
    remaining B modes in the vacuum), written in the same ``A..., B...``
    ordering.
    """

    modes_a: tuple
    modes_b: tuple
    s_a: np.ndarray
    s_b: np.ndarray
    r: np.ndarray
    swapped: bool = False
    notes: tuple = field(default_factory=tuple)

    @property
    def m(self):
        return len(self.modes_a)

    @property
    def n(self):
        return len(self.modes_b)


def schmidt_target(r, m, n):
    """Covariance matrix of the Schmidt form in ``A..., B...`` ordering."""
    size = 2 * (m + n)
    out = np.eye(size)
    for i, ri in enumerate(r):
        c, s = math.cosh(ri), math.sinh(ri)
        a = slice(2 * i, 2 * i + 2)
        b = slice(2 * (m + i), 2 * (m + i) + 2)
        out[a, a] = c * np.eye(2)
        out[b, b] = c * np.eye(2)
        out[a, b] = np.diag([s, -s])
        out[b, a] = np.diag([s, -s])
    return out


def reorder(sigma, modes):
    idx = gstate.quadrature_indices(modes)
    return sigma[np.ix_(idx, idx)]


def schmidt_decompose(sigma, modes_a, tol=1e-8):
    """Schmidt form of a pure state with respect to ``modes_a | rest``.

    If side A is the larger one the roles are swapped and ``swapped`` is set.
    """
    sigma = gstate.validate_cm(sigma)
    total = mode_count(sigma)
    if gstate.purity_residual(sigma) > tol:
        raise NotPure("Schmidt decomposition needs a pure state")
    modes_a = [int(m) for m in np.atleast_1d(modes_a)]
    gstate.reduced(sigma, modes_a)  # validates indices
    modes_b = [k for k in range(1, total + 1) if k not in modes_a]
    if not modes_b:
        raise ValueError("side A must be a proper subset")
    swapped = len(modes_a) > len(modes_b)
    if swapped:
        modes_a, modes_b = modes_b, modes_a
    m, n = len(modes_a), len(modes_b)

    work = reorder(sigma, modes_a + modes_b)
    sa_w, nu_a = gstate.williamson(work[:2 * m, :2 * m])
    t_a = symplectic_inverse(sa_w)
    sb_w, nu_b = gstate.williamson(work[2 * m:, 2 * m:])
    t_b = symplectic_inverse(sb_w)
    stage = direct_sum(t_a, t_b)
    work = stage.T @ work @ stage

    notes = []
    big = nu_a[nu_a > 1.0 + 1e-8]
    if big.size > 1 and np.any(np.abs(np.diff(big)) < 1e-8):
        notes.append("degenerate local spectrum: local factors are not unique")
        warnings.warn(notes[-1], DegenerateSpectrum, stacklevel=2)

    # align the A-B correlations of the paired modes with diag(s, -s)
    corr = work[:2 * m, 2 * m:4 * m]
    q, _ = nk.polar(corr)
    flip = np.kron(np.eye(m), np.diag([1.0, -1.0]))
    align = q.T @ flip
    active = np.repeat(nu_a > 1.0 + R_FLOOR, 2)
    align[~active, :] = 0.0
    align[:, ~active] = 0.0
    align[~active, ~active] = 1.0
    t_b = t_b @ direct_sum(align, np.eye(2 * (n - m))) if n > m else t_b @ align

    r = np.array([math.acosh(max(v, 1.0)) for v in nu_a])
    r[r < R_FLOOR] = 0.0
    return SchmidtForm(tuple(modes_a), tuple(modes_b), t_a, t_b, r, swapped, tuple(notes))


def reconstruct(sigma, form):
    """Apply the local factors of ``form`` to ``sigma`` (in ``A..., B...`` ordering)."""
    work = reorder(np.asarray(sigma, dtype=float), list(form.modes_a) + list(form.modes_b))
    s = direct_sum(form.s_a, form.s_b)
    out = s.T @ work @ s
    return 0.5 * (out + out.T)


def schmidt_entropy(form):
    return float(np.sum(gstate.entropy_term(np.cosh(form.r))))
