"""Standard forms under local (single-mode) symplectic operations.

Also home to the closed-form parameter counts for mixed, pure and
block-diagonal states.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from . import gstate
from . import numkernel as nk
from .errors import Not3Mode, NotPure
from .symplectic import conjugate_cm, direct_sum, mode_count, rotation


@dataclass(frozen=True)
class StandardFormResult:
    sigma_std: np.ndarray
    local_ops: list  # 2x2 symplectic per mode; their direct sum maps input to sigma_std
    local_eigenvalues: np.ndarray

    @property
    def transform(self):
        return direct_sum(*self.local_ops)


def _angle(rot):
    return math.atan2(rot[0, 1], rot[0, 0])


def rotation_svd(m):
    """Angles ``(a, b)`` with ``rotation(a).T @ m @ rotation(b)`` diagonal.

    Proper rotations only, so the diagonal may carry a negative entry.  The
    left angle is folded into ``[-pi/4, pi/4)`` so an already diagonal block
    is left alone, and the right factor is flipped by ``pi`` if needed to make
    the first diagonal entry nonnegative.
    """
    u, s, vt = np.linalg.svd(m)
    v = vt.T
    if np.linalg.det(u) < 0:
        u[:, 1] *= -1
    if np.linalg.det(v) < 0:
        v[:, 1] *= -1
    a = _angle(u)
    b = _angle(v)
    k = math.floor((a + math.pi / 4) / (math.pi / 2))
    a -= k * math.pi / 2
    b -= k * math.pi / 2
    d = rotation(a).T @ m @ rotation(b)
    if d[0, 0] < 0:
        b += math.pi
    return a, b


def _local_williamson(block):
    """Symmetric ``L`` with ``L.T @ block @ L = a I`` and ``det L = 1``."""
    a = math.sqrt(max(block[0, 0] * block[1, 1] - block[0, 1] ** 2, 0.0))
    return math.sqrt(a) * nk.inv_sqrt_spd(block), a


def reduce_mixed(sigma):
    """Local standard form of an arbitrary state.

    Local blocks become ``a_j I``.  Correlation blocks of the disjoint pairs
    (1,2), (3,4), ... are then diagonalised by rotations; for odd ``n`` the
    block between mode 1 and mode n is made lower triangular by a rotation
    of mode n.  Sign gauge: the (1,1) entry of each treated block is
    nonnegative.
    """
    sigma = gstate.validate_cm(sigma)
    n = mode_count(sigma)
    ops = []
    avals = np.empty(n)
    for j in range(n):
        blk = sigma[2 * j:2 * j + 2, 2 * j:2 * j + 2]
        ops_j, avals[j] = _local_williamson(blk)
        ops.append(ops_j)
    work = conjugate_cm(sigma, direct_sum(*ops))

    for j in range(0, n - 1, 2):
        corr = work[2 * j:2 * j + 2, 2 * j + 2:2 * j + 4]
        a, b = rotation_svd(corr)
        ops[j] = ops[j] @ rotation(a)
        ops[j + 1] = ops[j + 1] @ rotation(b)
    if n % 2 and n > 1:
        work = conjugate_cm(sigma, direct_sum(*ops))
        corr = work[0:2, 2 * n - 2:2 * n]
        # upper-right entry of corr @ rotation(t) vanishes
        t = math.atan2(-corr[0, 1], corr[0, 0])
        if (corr @ rotation(t))[0, 0] < 0:
            t += math.pi
        ops[n - 1] = ops[n - 1] @ rotation(t)

    return StandardFormResult(conjugate_cm(sigma, direct_sum(*ops)), ops, avals)


def reduce_pure_two_mode(sigma, tol=1e-8):
    """Bring a pure two-mode state to ``two_mode_squeezed(r)``.

    Returns
    -------
    (float, list)
        The squeezing ``r`` and the two local operations.
    """
    sigma = gstate.validate_cm(sigma)
    if mode_count(sigma) != 2:
        raise ValueError("expected a two-mode state")
    if gstate.purity_residual(sigma) > tol:
        raise NotPure("state is not pure")
    std = reduce_mixed(sigma)
    nu = gstate.symplectic_eigenvalues(gstate.reduced(sigma, [1]))[0]
    r = math.acosh(max(nu, 1.0))
    return r, std.local_ops


def check_tms_rotation_orbit(sigma, tol=1e-10):
    """Test the constraints obeyed by locally rotated two-mode squeezed states."""
    b = gstate.blocks(sigma)
    if b.sigma_x.shape != (2, 2):
        return False
    sx, sp, sxp = b.sigma_x, b.sigma_p, b.sigma_xp
    a = sx[0, 0]
    c1, c2 = sx[0, 1], sp[0, 1]
    y, z = sxp[0, 1], sxp[1, 0]
    checks = [
        abs(sx[1, 1] - a), abs(sp[0, 0] - a), abs(sp[1, 1] - a),
        abs(sxp[0, 0]), abs(sxp[1, 1]),
        abs(c1 + c2), abs(y - z),
        abs(a * a - c1 * c1 - 1.0 - y * y),
    ]
    return max(checks) <= tol


def annihilate_xp_three_mode(sigma, tol=1e-8):
    """Local reduction of a pure three-mode state to vanishing x-p block.

    The mixed standard form leaves only three cross entries; purity forces
    them to zero, so the result is the standard form itself.
    """
    sigma = gstate.validate_cm(sigma)
    if mode_count(sigma) != 3:
        raise Not3Mode("expected a three-mode state")
    if gstate.purity_residual(sigma) > tol:
        raise NotPure("state is not pure")
    return reduce_mixed(sigma)


def xp_norm(sigma):
    return nk.inf_norm(gstate.blocks(sigma).sigma_xp)


def min_xp_over_rotations(sigma, starts=8, rng=None):
    """Smallest ``|sigma_xp|`` reachable by local operations, searched numerically.

    After the local Williamson step the only local freedom that keeps the
    diagonal blocks proportional to the identity is one rotation per mode,
    so the search runs over ``n`` angles.  Returns the smallest Frobenius
    norm found from ``starts`` random initial points.
    """
    std = reduce_mixed(sigma)
    base = std.sigma_std
    n = mode_count(base)
    rng = np.random.default_rng(0) if rng is None else rng
    perm = np.concatenate([np.arange(0, 2 * n, 2), np.arange(1, 2 * n, 2)])

    def cost(angles):
        rot = direct_sum(*(rotation(t) for t in angles))
        out = (rot.T @ base @ rot)[np.ix_(perm, perm)]
        return float(np.sum(out[:n, n:] ** 2))

    best = math.inf
    for _ in range(starts):
        res = minimize(cost, rng.uniform(0, 2 * math.pi, n), method="BFGS")
        best = min(best, res.fun)
    return math.sqrt(best)


@dataclass(frozen=True)
class DofTable:
    n: int
    mixed_total: int
    mixed_invariant: int
    pure_total: int
    pure_invariant: int
    blockdiag_invariant: int


def dof(n):
    if n < 1:
        raise ValueError("mode count must be positive")
    if n == 1:
        pure_inv = 0
    elif n == 2:
        pure_inv = 1
    else:
        pure_inv = n * n - 2 * n
    return DofTable(
        n=n,
        mixed_total=2 * n * n + n,
        mixed_invariant=1 if n == 1 else 2 * n * n - 2 * n,
        pure_total=n * n + n,
        pure_invariant=pure_inv,
        blockdiag_invariant=n * (n - 1) // 2,
    )


def schmidt_dof_check(m, n):
    """Locally irreducible parameters of an (m + n)-mode pure state split m|n."""
    if m < 1 or n < 1:
        raise ValueError("both sides need at least one mode")
    # squeezings + local symplectics - vacuum invariance - TMS rotation invariance
    lhs = m + 2 * n * n + n + 2 * m * m + m - (m - n) ** 2 - m
    total = (m + n) ** 2 + (m + n)
    if lhs != total:
        raise AssertionError(f"parameter bookkeeping mismatch: {lhs} != {total}")
    return min(m, n)
