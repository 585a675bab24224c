import math

import numpy as np
import pytest

from choquet_roof.errors import UnsupportedInputError, ValidationError
from choquet_roof.functionals import affine_functional, quartic_functional, reduced_entropy_functional
from choquet_roof.oracles import MAX_GRID_POINTS, brute_force_roof, concurrence, wootters_eof
from choquet_roof.roof import RoofOptions, convex_roof
from choquet_roof.states import bell_state, pure_density, sample_state, sample_vector, werner_state

from conftest import random_hermitian, random_unitary

# mpmath at 30 digits, binary entropy of (1 + sqrt(1 - C^2)) / 2 with C = (3p - 1) / 2
WERNER_EOF = {
    0.5: 0.117618873770917911667680827942,
    0.7: 0.410641241336791402239189548155,
    0.9: 0.789354960988784572233285153615,
}


def test_wootters_examples():
    assert wootters_eof(bell_state()) == pytest.approx(1.0, abs=1e-12)
    assert concurrence(bell_state("psi-")) == pytest.approx(1.0, abs=1e-12)
    prod = pure_density(np.kron(sample_vector(2, 1), sample_vector(2, 2)))
    assert wootters_eof(prod) == pytest.approx(0.0, abs=1e-7)
    assert wootters_eof(np.eye(4) / 4) == 0.0
    assert wootters_eof(bell_state(), base="e") == pytest.approx(math.log(2), abs=1e-12)


@pytest.mark.parametrize("p", sorted(WERNER_EOF))
def test_wootters_werner_frozen(p):
    assert concurrence(werner_state(p)) == pytest.approx((3 * p - 1) / 2, abs=1e-12)
    assert wootters_eof(werner_state(p)) == pytest.approx(WERNER_EOF[p], abs=1e-12)


def test_wootters_werner_separable_range():
    for p in (0.1, 0.2, 1 / 3):
        assert wootters_eof(werner_state(p)) == pytest.approx(0.0, abs=1e-7)


def test_wootters_wrong_dims():
    with pytest.raises(ValidationError):
        wootters_eof(np.eye(6) / 6)


def test_wootters_local_unitary_invariance():
    rng = np.random.default_rng(0)
    for _ in range(100):
        omega = sample_state(4, int(rng.integers(1, 5)), seed=rng)
        U = np.kron(random_unitary(2, rng), random_unitary(2, rng))
        assert wootters_eof(U @ omega @ U.conj().T) == pytest.approx(wootters_eof(omega), abs=1e-10)


def test_wootters_agrees_with_pure_state_entropy():
    rng = np.random.default_rng(1)
    f = reduced_entropy_functional((2, 2))
    for _ in range(20):
        psi = sample_vector(4, rng)
        assert wootters_eof(pure_density(psi)) == pytest.approx(f.on_vectors(psi[None])[0], abs=1e-9)


def test_brute_force_affine():
    rng = np.random.default_rng(2)
    for _ in range(3):
        A = random_hermitian(2, rng)
        rho = sample_state(2, seed=rng)
        rep = brute_force_roof(affine_functional(A), rho, m=2, resolution=200)
        assert rep.value == pytest.approx(np.trace(A @ rho).real, abs=1e-3)
        assert rep.method == "brute-force-grid" and rep.params == {"m": 2, "resolution": 200}


def test_brute_force_resolution_monotone_and_deterministic():
    rng = np.random.default_rng(3)
    for _ in range(3):
        f = quartic_functional(random_hermitian(2, rng))
        rho = sample_state(2, seed=rng)
        v100 = brute_force_roof(f, rho, resolution=100).value
        v200 = brute_force_roof(f, rho, resolution=200).value
        assert v200 <= v100 + 1e-12
        assert brute_force_roof(f, rho, resolution=100).value == v100


def test_brute_force_three_members():
    rng = np.random.default_rng(4)
    f = quartic_functional(random_hermitian(2, rng))
    rho = sample_state(2, seed=rng)
    v3 = brute_force_roof(f, rho, m=3, resolution=12).value
    roof = convex_roof(f, rho, RoofOptions(members=3, restarts=8)).value
    assert roof <= v3 + 1e-9


def test_brute_force_brackets_roof():
    rng = np.random.default_rng(5)
    for _ in range(3):
        f = quartic_functional(random_hermitian(2, rng))
        rho = sample_state(2, seed=rng)
        oracle = brute_force_roof(f, rho, resolution=200).value
        roof = convex_roof(f, rho).value
        assert roof <= oracle + 1e-9


def test_brute_force_pure_state():
    f = quartic_functional(np.diag([1.0, -1.0]))
    psi = np.array([0.6, 0.8])
    assert brute_force_roof(f, pure_density(psi)).value == pytest.approx((0.36 - 0.64) ** 2)


def test_brute_force_errors():
    f = affine_functional(np.eye(2))
    with pytest.raises(UnsupportedInputError):
        brute_force_roof(affine_functional(np.eye(3)), np.eye(3) / 3)
    with pytest.raises(UnsupportedInputError):
        brute_force_roof(f, np.eye(2) / 2, m=4)
    with pytest.raises(ValidationError):
        brute_force_roof(f, np.eye(2) / 2, m=1)
    with pytest.raises(UnsupportedInputError):
        brute_force_roof(f, np.eye(2) / 2, m=3, resolution=int(MAX_GRID_POINTS ** (1 / 6)) + 1)
