import numpy as np
import pytest
from hypothesis import given, strategies as st

from choquet_roof.choquet import check_dominates
from choquet_roof.errors import UnsupportedInputError, ValidationError
from choquet_roof.linalg import trace_norm
from choquet_roof.states import (
    Ensemble,
    as_density,
    barycenter,
    ensemble_distance,
    ensemble_distance_bruteforce,
    is_pure,
    pure_density,
    rank,
    refine_to_pure,
    sample_ensemble,
    sample_state,
    steer_barycenter,
)

KET0 = np.diag([1.0, 0.0]).astype(complex)
KET1 = np.diag([0.0, 1.0]).astype(complex)


def test_as_density_validation():
    with pytest.raises(ValidationError):
        as_density(np.diag([0.6, 0.6]))
    with pytest.raises(ValidationError):
        as_density(np.diag([1.1, -0.1]))
    # tiny negative eigenvalue is clipped and the trace renormalised
    R = as_density(np.diag([1.0 + 5e-10, -5e-10]))
    assert np.linalg.eigvalsh(R).min() >= 0
    assert abs(np.trace(R).real - 1) < 1e-15


def test_ensemble_validation():
    with pytest.raises(ValidationError):
        Ensemble([0.5, 0.4], [KET0, KET1])
    with pytest.raises(ValidationError):
        Ensemble([1.0, 0.0], [KET0, KET1])
    with pytest.raises(ValidationError):
        Ensemble([1.0], [KET0, KET1])
    with pytest.raises(ValidationError):
        Ensemble([0.5, 0.5], [KET0, np.eye(3) / 3])
    with pytest.raises(ValidationError):
        Ensemble([1.0], [np.eye(4) / 4], dims=(2, 3))


def test_barycenter_examples():
    rho = sample_state(3, seed=0)
    assert np.allclose(barycenter(Ensemble.point_mass(rho)), rho)
    assert np.allclose(barycenter(Ensemble([0.5, 0.5], [KET0, KET1])), np.eye(2) / 2)
    E = sample_ensemble(3, 5, seed=2)
    direct = sum(w * s for w, s in zip(E.weights, E.states))
    assert np.max(np.abs(barycenter(E) - direct)) < 1e-12


def test_refine_examples():
    E = Ensemble.from_vectors([0.3, 0.7], [[1, 0], [1, 1j]])
    R = refine_to_pure(E)
    assert len(R) == 2 and np.allclose(R.weights, E.weights)
    assert np.allclose(R.states, E.states, atol=1e-12)

    R = refine_to_pure(Ensemble.point_mass(np.eye(2) / 2))
    assert np.allclose(R.weights, [0.5, 0.5])
    assert np.allclose(sorted(np.diag(s).real.tolist() for s in R.states), [[0, 1], [1, 0]])

    E = sample_ensemble(3, 3, seed=5)
    assert check_dominates(refine_to_pure(E), E).dominates


def test_refine_preserves_barycenter_many():
    for s in range(500):
        E = sample_ensemble(int(2 + s % 3), int(1 + s % 4), seed=s)
        R = refine_to_pure(E)
        assert R.is_pure()
        assert np.max(np.abs(barycenter(R) - barycenter(E))) < 1e-10


def test_refine_drops_zero_weights():
    R = refine_to_pure(Ensemble.point_mass(pure_density([1, 1j, 0])))
    assert len(R) == 1


def test_steer_closed_form():
    E = Ensemble([0.5, 0.5], [KET0, KET1])
    out, eps = steer_barycenter(E, np.diag([0.6, 0.4]))
    assert eps == pytest.approx(0.2, abs=1e-12)
    assert np.allclose(out.states[0], np.diag([1.0, 0.0]), atol=1e-12)
    assert np.allclose(out.states[1], np.diag([0.2, 0.8]), atol=1e-12)
    assert np.allclose(barycenter(out), np.diag([0.6, 0.4]), atol=1e-12)


def test_steer_identity_target():
    E = sample_ensemble(3, 4, seed=9, rank=3)
    out, eps = steer_barycenter(E, barycenter(E))
    assert eps == pytest.approx(1e-12)
    assert np.max(np.abs(out.states - E.states)) < 1e-9


def test_steer_small_perturbation(rng):
    E = sample_ensemble(3, 4, seed=11, rank=3)
    rho0 = barycenter(E)
    G = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    X = 0.5 * (G + G.conj().T)
    X -= np.trace(X) / 3 * np.eye(3)
    target = rho0 + 0.01 * X / trace_norm(X)
    out, eps = steer_barycenter(E, target)
    assert np.max(np.abs(barycenter(out) - target)) < 1e-9
    disp = max(trace_norm(a - b) for a, b in zip(out.states, E.states))
    assert disp <= 2 * eps + 1e-12


def test_steer_rank_deficient_rejected():
    E = Ensemble([0.5, 0.5], [pure_density([1, 0, 0]), pure_density([0, 1, 0])])
    with pytest.raises(UnsupportedInputError):
        steer_barycenter(E, np.eye(3) / 3)


def test_steer_continuity_and_inversion():
    for s in range(20):
        E = sample_ensemble(2 + s % 2, 3, seed=s, rank=2 + s % 2)
        rho0, rho1 = barycenter(E), sample_state(E.dim, seed=1000 + s)
        prev = np.inf
        for t in (0.1, 0.01, 0.001):
            target = (1 - t) * rho0 + t * rho1
            out, eps = steer_barycenter(E, target)
            assert np.max(np.abs(barycenter(out) - target)) < 1e-9
            dist = ensemble_distance(out, E)
            assert dist <= prev
            prev = dist


def test_sampling_contract():
    assert rank(sample_state(2, 1, seed=3)) == 1
    rho = sample_state(4, 4, seed=3)
    assert rank(rho) == 4 and abs(np.trace(rho).real - 1) < 1e-12
    assert np.array_equal(sample_state(3, 2, seed=8), sample_state(3, 2, seed=8))
    a, b = sample_ensemble(3, 4, seed=8), sample_ensemble(3, 4, seed=8)
    assert np.array_equal(a.weights, b.weights) and np.array_equal(a.states, b.states)
    with pytest.raises(ValidationError):
        sample_state(2, 3)
    with pytest.raises(ValidationError):
        sample_ensemble(2, 0)


def test_is_pure_threshold():
    assert is_pure(pure_density([1, 1]))
    assert not is_pure(np.diag([1 - 1e-6, 1e-6]))
    assert is_pure(np.diag([1 - 1e-10, 1e-10]))


def test_distance_examples():
    E = sample_ensemble(3, 3, seed=4)
    assert ensemble_distance(E, E) == pytest.approx(0.0, abs=1e-12)
    rho, sigma = sample_state(3, seed=1), sample_state(3, seed=2)
    d = ensemble_distance(Ensemble.point_mass(rho), Ensemble.point_mass(sigma))
    assert d == pytest.approx(trace_norm(rho - sigma), abs=1e-12)
    with pytest.raises(ValidationError):
        ensemble_distance(E, Ensemble.point_mass(np.eye(2) / 2))


@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 4))
def test_distance_matches_bruteforce(seed, n1, n2):
    E1 = sample_ensemble(2, n1, seed=seed)
    E2 = sample_ensemble(2, n2, seed=seed + 1)
    d = ensemble_distance(E1, E2)
    assert d == pytest.approx(ensemble_distance_bruteforce(E1, E2), abs=1e-12)
    assert d == pytest.approx(ensemble_distance(E2, E1), abs=1e-12)
    assert d >= 0


def test_distance_permutation_invariant():
    E = sample_ensemble(3, 4, seed=6)
    perm = [2, 0, 3, 1]
    F = Ensemble(E.weights[perm], E.states[perm])
    assert ensemble_distance(E, F) < 1e-12
