import numpy as np
import pytest
from scipy.optimize import linprog

from choquet_roof.simplex import phase_one


def test_trivial_feasible():
    res = phase_one(np.array([[1.0, 1.0]]), np.array([1.0]))
    assert res.status == "feasible"
    assert res.x.sum() == pytest.approx(1.0)


def test_trivial_infeasible():
    res = phase_one(np.array([[1.0, 1.0]]), np.array([-1.0]))
    assert res.status == "infeasible"


def test_negative_rhs_rows_flipped():
    A = np.array([[-1.0, 0.0], [0.0, 1.0]])
    res = phase_one(A, np.array([-2.0, 3.0]))
    assert res.status == "feasible"
    assert np.allclose(res.x, [2.0, 3.0])


def test_shape_check():
    with pytest.raises(ValueError):
        phase_one(np.eye(2), np.ones(3))


def test_random_feasible(rng):
    for _ in range(50):
        m, n = rng.integers(2, 8), rng.integers(8, 20)
        A = rng.normal(size=(m, n))
        x0 = np.where(rng.random(n) < 0.5, 0.0, rng.random(n))
        b = A @ x0
        res = phase_one(A, b)
        assert res.status == "feasible"
        assert res.x.min() >= 0
        assert np.max(np.abs(A @ res.x - b)) < 1e-8


def test_random_infeasible_farkas(rng):
    # y with A^T y >= 0 and b.y < 0 certifies infeasibility
    for _ in range(50):
        m, n = rng.integers(2, 6), rng.integers(3, 12)
        y = rng.normal(size=m)
        A = rng.normal(size=(m, n))
        # push every column into the half-space A^T y >= 0
        proj = A.T @ y
        A += np.outer(y, np.maximum(0.0, -proj) + rng.random(n)) / (y @ y)
        b = rng.normal(size=m)
        b -= (b @ y + rng.random() + 0.1) / (y @ y) * y
        assert np.all(A.T @ y >= -1e-12) and b @ y < 0
        assert phase_one(A, b).status == "infeasible"


def test_agrees_with_scipy_on_random_systems(rng):
    for _ in range(100):
        m, n = rng.integers(2, 6), rng.integers(2, 10)
        A = rng.integers(-3, 4, size=(m, n)).astype(float)
        b = rng.integers(-3, 4, size=m).astype(float)
        ref = linprog(np.zeros(n), A_eq=A, b_eq=b, bounds=[(0, None)] * n, method="highs")
        ours = phase_one(A, b)
        assert (ours.status == "feasible") == (ref.status == 0)


def test_degenerate_system_terminates():
    # many redundant constraints with zero right-hand sides
    n = 12
    A = np.vstack([np.ones(n), np.eye(n)[:6] - np.eye(n)[6:], np.eye(n)[:6] - np.eye(n)[6:]])
    b = np.concatenate([[1.0], np.zeros(12)])
    res = phase_one(A, b)
    assert res.status == "feasible"
    assert np.max(np.abs(A @ res.x - b)) < 1e-8
