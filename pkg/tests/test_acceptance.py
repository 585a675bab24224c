"""The ten acceptance criteria, each at its stated tolerance and budget."""

import json
import math
import time

import numpy as np

from choquet_roof.choquet import NOT_DOMINATES, check_dominates, mass_on
from choquet_roof.cli import EXIT_OK, run_command
from choquet_roof.functionals import (
    _g_values,
    approx_char_fn,
    quartic_functional,
    validate_char_params,
)
from choquet_roof.linalg import partial_trace, trace_norm
from choquet_roof.oracles import brute_force_roof, wootters_eof
from choquet_roof.roof import RoofOptions, convex_roof, efn, eof
from choquet_roof.states import (
    barycenter,
    bell_state,
    ensemble_distance,
    pure_density,
    sample_ensemble,
    sample_state,
    sample_vector,
    steer_barycenter,
    werner_state,
)

from acceptance_log import record
from conftest import random_hermitian
from pairs import dominating_pair, mass_predicates, non_dominating_pair


def test_criterion_01_bell_eof():
    t = time.perf_counter()
    res = eof(bell_state(), opts=RoofOptions(restarts=32))
    elapsed = time.perf_counter() - t
    err = abs(res.value - 1.0)
    oracle_err = abs(wootters_eof(bell_state()) - 1.0)
    ok = err <= 1e-6 and oracle_err <= 1e-6 and elapsed <= 5.0
    record(1, ok, f"Bell EoF error {err:.1e}, {elapsed:.2f}s (<= 5s)")
    assert ok


def test_criterion_02_werner_sweep():
    t = time.perf_counter()
    errs = []
    for p in np.arange(1, 10) / 10:
        W = werner_state(p)
        errs.append(abs(eof(W).value - wootters_eof(W)))
    elapsed = time.perf_counter() - t
    ok = max(errs) <= 1e-3 and elapsed <= 60.0
    record(2, ok, f"Werner worst error {max(errs):.1e}, {elapsed:.1f}s (<= 60s)")
    assert ok


def test_criterion_03_random_two_qubit():
    errs = []
    for s in range(25):
        rho = sample_state(4, seed=(3, s))
        errs.append(abs(eof(rho).value - wootters_eof(rho)))
    ok = max(errs) <= 2e-3
    record(3, ok, f"25 random states, worst error {max(errs):.1e} (<= 2e-3)")
    assert ok


def _criterion4_states():
    rng = np.random.default_rng(4)
    out = []
    for k in range(50):
        dims = (2, 2) if k < 25 else (2, 3)
        D = dims[0] * dims[1]
        rank = int(rng.integers(1, min(D, 3 if dims == (2, 3) else 4) + 1))
        out.append((sample_state(D, rank, seed=rng), dims))
    return out


def _separable_state(k):
    rng = np.random.default_rng((44, k))
    dims = (2, 2) if k % 2 == 0 else (2, 3)
    terms = int(rng.integers(2, 4))
    q = rng.dirichlet(np.ones(terms))
    W = sum(
        qi * pure_density(np.kron(sample_vector(dims[0], rng), sample_vector(dims[1], rng))) for qi in q
    )
    return W, dims


def test_criterion_04_efn_properties():
    failures = []
    for k, (W, dims) in enumerate(_criterion4_states()):
        E = eof(W, dims).value
        vals = {n: efn(W, n, dims).value for n in (2, 3)}
        r = int(np.sum(np.linalg.eigvalsh(partial_trace(W, dims, "A")) > 1e-9))
        for n, v in vals.items():
            if not -1e-9 <= v <= math.log2(n) + 1e-9:
                failures.append(f"state {k}: bound n={n} ({v})")
            if v > E + 2e-3:
                failures.append(f"state {k}: efn_{n} > eof")
            if r <= n and abs(v - E) > 2e-3:
                failures.append(f"state {k}: efn_{n} != eof at reduced rank {r}")
        if vals[2] > vals[3] + 2e-3:
            failures.append(f"state {k}: not nondecreasing in n")
    sep = []
    for k in range(10):
        W, dims = _separable_state(k)
        sep.append(max(efn(W, n, dims).value for n in (2, 3)))
    if max(sep) > 1e-4:
        failures.append(f"separable efn {max(sep):.1e}")
    ok = not failures
    record(4, ok, f"50 states x n in {{2,3}}, {len(failures)} violations; separable max {max(sep):.1e}")
    assert ok, failures


CASES = ("set", "face", "rank")


def _criterion5_inputs(case, rng):
    d = int(rng.integers(2, 5))
    if case == "set":
        params = {"vectors": np.array([sample_vector(d, rng) for _ in range(int(rng.integers(1, 4)))])}
    elif case == "face":
        k = int(rng.integers(1, d))
        params = {"projector": np.diag([1.0] * k + [0.0] * (d - k))}
    else:
        params = {"k": int(rng.integers(1, d))}
    on_set = rng.random() < 0.3
    if on_set and case == "set":
        rho = pure_density(params["vectors"][0])
    elif on_set and case == "face":
        k = int(np.trace(params["projector"]).real)
        rho = np.zeros((d, d), complex)
        rho[:k, :k] = sample_state(k, seed=rng)
    elif on_set:
        rho = sample_state(d, params["k"], seed=rng)
    else:
        rho = sample_state(d, int(rng.integers(1, d + 1)), seed=rng)
    return params, rho


def test_criterion_05_approximators():
    t = time.perf_counter()
    rng = np.random.default_rng(5)
    failures, low_g = [], 0
    for case in CASES:
        for k in range(100):
            params, rho = _criterion5_inputs(case, rng)
            g = float(_g_values(case, validate_char_params(case, params, rho.shape[0]), rho[None])[0])
            vals = [approx_char_fn(case, params, n, rho) for n in range(1, 51)]
            if any(b > a + 1e-12 for a, b in zip(vals, vals[1:])):
                failures.append(f"{case} {k}: increasing")
            g_is_one = g >= 1.0 - 1e-10
            if any((v == 1.0) != g_is_one for v in vals):
                failures.append(f"{case} {k}: value 1 iff g = 1 broken (g={g})")
            if g <= 0.5:
                low_g += 1
                if vals[-1] > 0.2:
                    failures.append(f"{case} {k}: f_50 = {vals[-1]} with g = {g}")
    elapsed = time.perf_counter() - t
    ok = not failures and elapsed <= 10.0
    record(5, ok, f"300 cases x n=1..50, {len(failures)} violations ({low_g} with g<=0.5), {elapsed:.1f}s (<= 10s)")
    assert ok, failures


def test_criterion_06_choquet_order():
    t = time.perf_counter()
    failures, checked = [], 0
    for k in range(200):
        mu, nu = dominating_pair(k)
        if max(len(mu), len(nu)) > 6 or mu.dim > 4:
            failures.append(f"dominating pair {k}: outside the size budget")
        v = check_dominates(mu, nu)
        if not (v.dominates and v.plan.is_valid(mu, nu)):
            failures.append(f"dominating pair {k}: {v.status}")
            continue
        for pred in mass_predicates(mu, nu, seed=k):
            checked += 1
            if mass_on(mu, pred) < mass_on(nu, pred) - 1e-7:
                failures.append(f"pair {k}: mass monotonicity on {pred}")
    for k in range(200):
        mu, nu = non_dominating_pair(k)
        if max(len(mu), len(nu)) > 6 or mu.dim > 4:
            failures.append(f"non-dominating pair {k}: outside the size budget")
        v = check_dominates(mu, nu)
        if v.status != NOT_DOMINATES:
            failures.append(f"non-dominating pair {k}: {v.status}")
    elapsed = time.perf_counter() - t
    ok = not failures and elapsed <= 120.0
    record(6, ok, f"200 + 200 pairs, {checked} mass checks, {len(failures)} failures, {elapsed:.1f}s (<= 120s)")
    assert ok, failures


def _target_at(rho0, t, rng):
    while True:
        sigma = pure_density(sample_vector(rho0.shape[0], rng))
        dist = trace_norm(sigma - rho0)
        if dist >= t:
            return (1 - t / dist) * rho0 + (t / dist) * sigma


def test_criterion_07_steering():
    rng = np.random.default_rng(7)
    failures = []
    worst = 0.0
    for k in range(100):
        d = 2 if k % 2 == 0 else 3
        E = sample_ensemble(d, int(rng.integers(1, 5)), seed=rng, rank=d)
        rho0 = barycenter(E)
        dists = []
        for t in (1e-1, 1e-2, 1e-3):
            target = _target_at(rho0, t, rng)
            out, _ = steer_barycenter(E, target)
            err = float(np.max(np.abs(barycenter(out) - target)))
            worst = max(worst, err)
            if err > 1e-9:
                failures.append(f"ensemble {k}, t={t}: barycenter error {err:.1e}")
            dists.append(ensemble_distance(out, E))
        if not dists[0] > dists[1] > dists[2]:
            failures.append(f"ensemble {k}: distances {dists}")
    ok = not failures
    record(7, ok, f"100 ensembles x 3 scales, worst barycenter error {worst:.1e}, {len(failures)} failures")
    assert ok, failures


def test_criterion_08_purity_gap_demo():
    code, text = run_command(["demo", "remark1", "--deltas", "0.1,0.01,0.001"])
    rows = json.loads(text)["rows"]
    expected = {0.1: 0.905, 0.01: 0.99005, 0.001: 0.9990005}
    values = [r["value"] for r in rows]
    ok = (
        code == EXIT_OK
        and [r["lambda"] for r in rows] == [0.1, 0.01, 0.001]
        and all(abs(r["value"] - expected[r["lambda"]]) <= 1e-9 for r in rows)
        and all(abs(r["value"] - (1 - r["lambda"] + r["lambda"] ** 2 / 2)) <= 1e-9 for r in rows)
        and all(v < 1.0 for v in values)
        and values[0] < values[1] < values[2]
    )
    record(8, ok, "hull values " + ", ".join(f"{v:.9g}" for v in values) + " (< 1, increasing)")
    assert ok


def test_criterion_09_convexity_and_continuity():
    t = time.perf_counter()
    rng = np.random.default_rng(9)
    failures, worst_mid, worst_jump = [], -np.inf, 0.0
    for k in range(50):
        rho, sigma = sample_state(4, seed=rng), sample_state(4, seed=rng)
        mid = eof(0.5 * (rho + sigma)).value
        gap = mid - 0.5 * (eof(rho).value + eof(sigma).value)
        worst_mid = max(worst_mid, gap)
        if gap > 2e-3:
            failures.append(f"pair {k}: midpoint excess {gap:.1e}")
    for k in range(20):
        rho = sample_state(4, int(rng.integers(1, 5)), seed=rng)
        sigma = sample_state(4, seed=rng)
        delta = 1e-3 * (sigma - rho) / trace_norm(sigma - rho)
        jump = abs(efn(rho + delta, 2).value - efn(rho, 2).value)
        worst_jump = max(worst_jump, jump)
        if jump > 5e-2:
            failures.append(f"state {k}: jump {jump:.1e}")
    elapsed = time.perf_counter() - t
    ok = not failures and elapsed <= 600.0
    record(
        9, ok,
        f"midpoint excess max {worst_mid:.1e} (<= 2e-3), continuity jump max {worst_jump:.1e} (<= 5e-2), "
        f"{elapsed:.0f}s (<= 600s)",
    )
    assert ok, failures


def test_criterion_10_brute_force_bracket():
    lows, highs = [], []
    for s in range(10):
        rng = np.random.default_rng((10, s))
        f = quartic_functional(random_hermitian(2, rng))
        rho = sample_state(2, seed=rng)
        oracle = brute_force_roof(f, rho, m=2, resolution=400).value
        value = convex_roof(f, rho).value
        lows.append(value - (oracle - 1e-9))
        highs.append((oracle + 1e-3) - value)
    ok = min(lows) >= 0 and min(highs) >= 0
    record(10, ok, f"10 instances, slack below {min(lows):.1e}, slack above {min(highs):.1e}")
    assert ok
