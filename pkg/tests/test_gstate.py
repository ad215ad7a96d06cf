import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symplectica import gstate as gs
from symplectica.errors import (
    BadModeIndex,
    ConditionViolated,
    NonSymmetric,
    NotPositiveDefinite,
    NotPure,
    UnphysicalState,
    UnphysicalTemperature,
)
from symplectica.symplectic import conjugate_cm, direct_sum, symplectic_residual

from .conftest import (
    inf_norm,
    oracle_symplectic_eigenvalues,
    random_mixed_cm,
    random_pure_cm,
    random_symplectic,
)

F_FIVE_QUARTERS = 0.3924361078234109  # f(5/4) = (9/8) ln(9/8) - (1/8) ln(1/8)


def f_oracle(nu):
    if nu == 1.0:
        return 0.0
    a, b = (nu + 1) / 2, (nu - 1) / 2
    return a * math.log(a) - b * math.log(b)


def test_frozen_entropy_value():
    assert f_oracle(1.25) == pytest.approx(F_FIVE_QUARTERS, abs=1e-15)


def test_constructors():
    np.testing.assert_array_equal(gs.two_mode_squeezed(0.0), np.eye(4))
    t = gs.two_mode_squeezed(math.log(2))
    np.testing.assert_allclose(np.diag(t), 1.25, atol=1e-15)
    np.testing.assert_allclose(abs(t[0, 2]), 0.75, atol=1e-15)
    np.testing.assert_allclose(abs(t[1, 3]), 0.75, atol=1e-15)
    np.testing.assert_array_equal(gs.thermal([1, 1]), gs.vacuum(2))
    with pytest.raises(UnphysicalTemperature):
        gs.thermal([0.5])


def test_validate_rejects():
    with pytest.raises(NonSymmetric):
        gs.validate_cm(np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(NotPositiveDefinite):
        gs.validate_cm(np.diag([1.0, -1.0]))
    with pytest.raises(UnphysicalState):
        gs.validate_cm(np.diag([0.5, 0.5]))


@pytest.mark.parametrize("sigma, nu", [
    (gs.vacuum(3), [1, 1, 1]),
    (gs.thermal([5, 2]), [5, 2]),
    (gs.two_mode_squeezed(0.8), [1, 1]),
])
def test_symplectic_eigenvalues_examples(sigma, nu):
    np.testing.assert_allclose(gs.symplectic_eigenvalues(sigma), nu, atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_spectrum_matches_oracle(seed, n):
    sigma, nu = random_mixed_cm(n, np.random.default_rng(seed))
    got = gs.symplectic_eigenvalues(sigma)
    np.testing.assert_allclose(got, nu, rtol=1e-8)
    np.testing.assert_allclose(got, oracle_symplectic_eigenvalues(sigma), rtol=1e-8)


def test_williamson_thermal():
    s, nu = gs.williamson(gs.thermal([3.0, 2.0]))
    np.testing.assert_allclose(nu, [3, 2], atol=1e-12)
    np.testing.assert_allclose(s.T @ np.diag([3, 3, 2, 2]) @ s, gs.thermal([3, 2]), atol=1e-12)


def test_williamson_round_trip(rng):
    s0 = random_symplectic(2, rng)
    sigma = conjugate_cm(gs.thermal([3.0, 2.0]), s0)
    s, nu = gs.williamson(sigma)
    np.testing.assert_allclose(nu, [3, 2], atol=1e-8)
    assert symplectic_residual(s) <= 1e-9


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 6))
def test_williamson_property(seed, n):
    sigma, nu = random_mixed_cm(n, np.random.default_rng(seed))
    s, got = gs.williamson(sigma)
    np.testing.assert_allclose(got, nu, rtol=1e-8)
    assert symplectic_residual(s) <= 1e-9
    rec = s.T @ np.diag(np.repeat(got, 2)) @ s
    assert inf_norm(rec - sigma) <= 1e-8 * inf_norm(sigma)


def test_williamson_pure(rng):
    _, nu = gs.williamson(gs.two_mode_squeezed(1.4))
    np.testing.assert_allclose(nu, [1, 1], atol=1e-9)


def test_purity_values():
    assert gs.purity(gs.vacuum(3)) == pytest.approx(1.0)
    assert gs.purity(gs.thermal([3, 3])) == pytest.approx(1 / 9)
    assert gs.purity(gs.two_mode_squeezed(1.1)) == pytest.approx(1.0, abs=1e-10)
    assert gs.is_pure(gs.vacuum(4))
    assert not gs.is_pure(gs.thermal([2, 1]))


@pytest.mark.parametrize("r", [0.3, 1.0, 2.5])
def test_tms_pure(r):
    assert gs.is_pure(gs.two_mode_squeezed(r), tol=1e-9)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
def test_purity_equivalence_pure(seed, n):
    sigma = random_pure_cm(n, np.random.default_rng(seed))
    assert gs.is_pure(sigma, tol=1e-8)
    assert np.all(np.abs(oracle_symplectic_eigenvalues(sigma) - 1) <= 1e-8)
    assert abs(gs.cm_det(sigma) - 1) <= 1e-8


def test_purity_equivalence_mixed(rng):
    for _ in range(20):
        sigma, _ = random_mixed_cm(3, rng, nu_max=3.0)
        assert not gs.is_pure(sigma, tol=1e-8)
        assert abs(gs.cm_det(sigma) - 1) > 1e-8
        assert np.any(oracle_symplectic_eigenvalues(sigma) > 1 + 1e-8)


def test_blocks_tms():
    r = 0.9
    c, s = math.cosh(r), math.sinh(r)
    b = gs.blocks(gs.two_mode_squeezed(r))
    np.testing.assert_allclose(b.sigma_xp, 0)
    np.testing.assert_allclose(b.sigma_x, [[c, s], [s, c]])
    np.testing.assert_allclose(b.sigma_p, [[c, -s], [-s, c]])


def test_blocks_vacuum():
    b = gs.blocks(gs.vacuum(3))
    np.testing.assert_array_equal(b.sigma_x, np.eye(3))
    np.testing.assert_array_equal(b.sigma_p, np.eye(3))
    np.testing.assert_array_equal(b.sigma_xp, np.zeros((3, 3)))


def test_blocks_round_trip(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        sigma, _ = random_mixed_cm(n, rng)
        np.testing.assert_allclose(gs.from_blocks(gs.blocks(sigma)), sigma, atol=1e-14)


def test_complete_pure_examples():
    np.testing.assert_allclose(gs.complete_pure(np.eye(2), np.zeros((2, 2))), np.eye(4))
    c, s = math.cosh(0.7), math.sinh(0.7)
    out = gs.blocks(gs.complete_pure(np.array([[c, s], [s, c]]), np.zeros((2, 2))))
    np.testing.assert_allclose(out.sigma_p, [[c, -s], [-s, c]], atol=1e-12)


def test_complete_pure_round_trip(rng):
    sigma = random_pure_cm(4, rng)
    b = gs.blocks(sigma)
    np.testing.assert_allclose(gs.complete_pure(b.sigma_x, b.sigma_xp), sigma, atol=1e-9)


def test_complete_pure_condition():
    with pytest.raises(ConditionViolated):
        gs.complete_pure(np.diag([2.0, 1.0]), np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NotPositiveDefinite):
        gs.complete_pure(np.diag([1.0, -1.0]), np.zeros((2, 2)))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
def test_redundant_conditions(seed, n):
    sigma = random_pure_cm(n, np.random.default_rng(seed))
    b = gs.blocks(sigma)
    out = gs.blocks(gs.complete_pure(b.sigma_x, b.sigma_xp))
    sx, sp, sxp = out.sigma_x, out.sigma_p, out.sigma_xp
    scale = max(1.0, inf_norm(sx) * inf_norm(sp))
    assert inf_norm(sp @ sx - np.eye(n) - sxp.T @ sxp.T) <= 1e-9 * scale
    assert inf_norm(sxp.T @ sp - sp @ sxp) <= 1e-9 * scale


def test_reduced():
    r = 1.3
    np.testing.assert_allclose(gs.reduced(gs.two_mode_squeezed(r), [1]), math.cosh(r) * np.eye(2))
    np.testing.assert_array_equal(gs.reduced(gs.vacuum(5), [2, 4]), np.eye(4))
    a = gs.thermal([2.0, 3.0])
    b = gs.two_mode_squeezed(0.4)
    np.testing.assert_array_equal(gs.reduced(direct_sum(a, b), [1, 2]), a)
    with pytest.raises(BadModeIndex):
        gs.reduced(gs.vacuum(2), [3])
    with pytest.raises(BadModeIndex):
        gs.reduced(gs.vacuum(2), [1, 1])


def test_entropies():
    assert gs.von_neumann_entropy(gs.vacuum(3)) == 0.0
    t = gs.two_mode_squeezed(math.log(2))
    assert gs.entanglement_entropy(t, [1]) == pytest.approx(F_FIVE_QUARTERS, abs=1e-12)
    assert gs.entanglement_entropy(t, [2]) == pytest.approx(gs.entanglement_entropy(t, [1]))
    assert gs.von_neumann_entropy(gs.thermal([3.0])) == pytest.approx(f_oracle(3.0))
    with pytest.raises(NotPure):
        gs.entanglement_entropy(gs.thermal([2, 1]), [1])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 6), data=st.data())
def test_complementary_entropy(seed, n, data):
    sigma = random_pure_cm(n, np.random.default_rng(seed))
    k = data.draw(st.integers(1, n - 1))
    modes = data.draw(st.permutations(range(1, n + 1)))[:k]
    rest = [m for m in range(1, n + 1) if m not in modes]
    assert gs.entanglement_entropy(sigma, modes) == pytest.approx(
        gs.entanglement_entropy(sigma, rest), abs=1e-8)


def test_mean_energy():
    assert gs.mean_energy(gs.vacuum(3)) == 1.5
    assert gs.mean_energy(gs.thermal([3, 1])) == 2.0
    assert gs.mean_energy(gs.two_mode_squeezed(0.6)) == pytest.approx(math.cosh(0.6))


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 5))
def test_spectrum_symplectic_invariance(seed, n):
    rng = np.random.default_rng(seed)
    sigma, nu = random_mixed_cm(n, rng)
    out = conjugate_cm(sigma, random_symplectic(n, rng))
    np.testing.assert_allclose(gs.symplectic_eigenvalues(out), nu, rtol=1e-8)
