"""End-to-end acceptance criteria, each checked at its stated tolerance.

Every test records one PASS/FAIL line; the lines are printed in the pytest
terminal summary (and to stdout when this file is run directly).
"""

import time

import numpy as np
import pytest

from hv2q.caps import cap_correlation, correlation_bounds, solve_gamma
from hv2q.contextuality import matrix_signs, noncontextual_assignments, product_rule_violation
from hv2q.dynamics import evolve, local_hamiltonian, random_hamiltonian
from hv2q.frame import frame_of, reconstruction_residual
from hv2q.general import analytic_moments, assign_values, r_vector, response_cosines, solve_ahat, verify_general
from hv2q.linalg import EZ, sigma_dot
from hv2q.minimal import (
    MinimalParams,
    assign_minimal,
    factorization_defect,
    locality_probe,
    sup_defect_closed_form,
    verify_minimal,
)
from hv2q.sampling import DEFAULT_CHUNK, run_moments, sample_circle, sample_sphere
from hv2q.states import (
    TwoQubitState,
    canonicalize_observable,
    random_observable,
    random_product_state,
    random_schmidt_state,
    random_state,
    singlet,
    spin,
)

from conftest import ACCEPTANCE_LINES, unit_vectors


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({detail})"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


def random_case(seed: int):
    rng = np.random.default_rng([seed, 77])
    ss = rng.integers(0, 2**32, size=3)
    return random_state(int(ss[0])), random_observable(int(ss[1])), random_observable(int(ss[2]))


def test_c01_singlet_reproduction():
    t0 = time.perf_counter()
    rng = np.random.default_rng(101)
    pairs = unit_vectors(rng, 40).reshape(20, 2, 3)
    worst, worst_z = 0.0, 0.0
    for k, (a, b) in enumerate(pairs):
        rep = verify_general(singlet(), spin(a), spin(b), n_samples=1_000_000, seed=k, sigmas=4.0)
        worst = max(worst, rep.analytic.max_diff(type(rep.analytic)(0.0, 0.0, -float(a @ b))))
        worst_z = max(worst_z, max(abs(z) for z in rep.mc_zscores.values()))
        assert rep.mc_passed
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and worst_z <= 4.0 and elapsed < 10.0
    record(1, "singlet reproduction", ok, f"max err {worst:.1e}, max |z| {worst_z:.2f}, {elapsed:.1f}s")


def test_c02_general_state_reproduction():
    t0 = time.perf_counter()
    moments, tables = 0.0, 0.0
    for k in range(100):
        rep = verify_general(*random_case(k))
        moments = max(moments, rep.analytic_discrepancy)
        tables = max(tables, rep.table_discrepancy)
    elapsed = time.perf_counter() - t0
    ok = moments <= 1e-8 and tables <= 1e-8 and elapsed < 30.0
    record(2, "general-state reproduction", ok, f"moments {moments:.1e}, tables {tables:.1e}, {elapsed:.1f}s")


def test_c03_bound_bracketing():
    n = 100_000
    rng = np.random.default_rng(303)
    cos_xi, cos_chi, target = np.empty(n), np.empty(n), np.empty(n)
    for k in range(n):
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        st = TwoQubitState.from_amplitudes(z)
        ax = rng.normal(size=(2, 3))
        al = rng.uniform(-2, 2, size=2)
        x = canonicalize_observable(al[0], rng.uniform(0.01, 2), ax[0])
        y = canonicalize_observable(al[1], rng.uniform(0.01, 2), ax[1])
        fr = frame_of(st)
        cos_xi[k], cos_chi[k] = response_cosines(fr, x, y)
        target[k] = -float(r_vector(fr, x) @ y.axis)
    xi, chi = np.arccos(np.clip(cos_xi, -1, 1)), np.arccos(np.clip(cos_chi, -1, 1))
    e_min, e_max = correlation_bounds(xi, chi)
    slack = np.minimum(target - e_min, e_max - target).min()
    gamma, iters = solve_gamma(xi, chi, target)
    residual = np.abs(cap_correlation(gamma, xi, chi) - target).max()
    endpoint = max(
        np.abs(cap_correlation(0.0, xi, chi) - (np.abs(cos_xi - cos_chi) - 1)).max(),
        np.abs(cap_correlation(np.pi, xi, chi) - (1 - np.abs(cos_xi + cos_chi))).max(),
    )
    ok = slack >= -1e-12 and iters.max() <= 200 and endpoint <= 1e-9
    record(
        3, "bound bracketing and existence", ok,
        f"min slack {slack:.1e}, max iters {iters.max()}, endpoint err {endpoint:.1e}, residual {residual:.1e}",
    )


def test_c04_bell_reduction():
    rng = np.random.default_rng(404)
    fr = frame_of(singlet())
    worst_angle, worst_gamma = 0.0, 0.0
    for a, b in unit_vectors(rng, 100).reshape(50, 2, 3):
        p = solve_ahat(fr, spin(a), spin(b))
        worst_angle = max(worst_angle, abs(p.xi - np.pi / 2), abs(p.chi - np.pi / 2))
        worst_gamma = max(worst_gamma, abs(p.gamma - np.pi * (1 - a @ b) / 2))
    ok = worst_angle <= 1e-12 and worst_gamma <= 1e-9
    record(4, "Bell reduction", ok, f"angle err {worst_angle:.1e}, gamma err {worst_gamma:.1e}")


def test_c05_minimal_model():
    worst, worst_z, assumption = 0.0, 0.0, True
    draws = []

    def circle(rng, n):
        lam = sample_circle(rng, n)
        draws.append(lam.ndim == 1)
        return lam

    for k in range(100):
        st, x, y = random_case(500 + k)
        rep = verify_minimal(st, x, y)
        p = rep.params
        assumption &= p["theta_hat"] <= p["xi"] + p["chi"]
        worst = max(worst, rep.analytic_discrepancy, rep.table_discrepancy)
        params = MinimalParams(**p)
        mc = run_moments(lambda ang: assign_minimal(params, x, y, ang), circle, 1_000_000, k, DEFAULT_CHUNK)
        ref = rep.oracle.direct
        worst_z = max(worst_z, abs(mc.x.z(ref.x)), abs(mc.y.z(ref.y)), abs(mc.xy.z(ref.xy)))
    ok = assumption and worst <= 1e-8 and worst_z <= 4.0 and all(draws)
    record(5, "minimal model", ok, f"max err {worst:.1e}, max |z| {worst_z:.2f}, scalar hidden variable {all(draws)}")


def test_c06_locality_boundary():
    rng = np.random.default_rng(606)
    product_sup, entangled_sup = 0.0, np.inf
    for k in range(20):
        x = random_observable(6000 + k)
        partners = [spin(b) for b in unit_vectors(rng, 200)]
        fr = frame_of(random_product_state(600 + k))
        product_sup = max(product_sup, locality_probe(fr, x, partners).supremum,
                          sup_defect_closed_form(fr.phi, x.axis @ fr.n))
        fr = frame_of(random_schmidt_state(700 + k, (0.5, 0.9)))
        closed = sup_defect_closed_form(fr.phi, x.axis @ fr.n)
        v = r_vector(fr, x) - fr.sin2phi**2 * (x.axis @ fr.n) * fr.n_prime
        attained = factorization_defect(fr, x, spin(v / np.linalg.norm(v)))
        assert abs(attained - closed) <= 1e-10
        entangled_sup = min(entangled_sup, max(locality_probe(fr, x, partners).supremum, attained))
    ok = product_sup <= 1e-10 and entangled_sup > 0.05
    record(6, "locality boundary", ok, f"product sup {product_sup:.1e}, entangled min sup {entangled_sup:.3f}")


def test_c07_frame_correctness():
    residual, phi_err = 0.0, 0.0
    for k in range(1000):
        if k < 100:
            lo = 0.5 + 1e-6 * k / 100
            st = random_schmidt_state(k, (lo, lo))
        else:
            st = random_state(7000 + k)
        fr = frame_of(st)
        residual = max(residual, reconstruction_residual(st, fr))
        phi_err = max(phi_err, abs(fr.sin2phi - (2 * fr.schmidt.mu1 - 1)))
    ok = residual <= 1e-10 and phi_err <= 1e-10
    record(7, "frame correctness", ok, f"residual {residual:.1e}, sin2phi err {phi_err:.1e}")


def test_c08_marginal_consistency():
    rng = np.random.default_rng(808)
    spread, worst_z = 0.0, 0.0
    for k in range(50):
        st, x, _ = random_case(800 + k)
        fr = frame_of(st)
        marginals = []
        for j, b in enumerate(unit_vectors(rng, 5)):
            y = spin(b)
            p = solve_ahat(fr, x, y)
            marginals.append(analytic_moments(p, x, y).x)
            mc = run_moments(lambda lam: assign_values(p, x, y, lam), sample_sphere, 100_000, 1000 * k + j)
            worst_z = max(worst_z, abs(mc.x.z(marginals[0])))
        spread = max(spread, float(np.ptp(marginals)))
    ok = spread == 0.0 and worst_z <= 4.0
    record(8, "marginal consistency", ok, f"analytic spread {spread:.1e}, max |z| {worst_z:.2f}")


def test_c09_dynamics():
    worst, steps = 0.0, 0
    for k in range(10):
        st, x, y = random_case(900 + k)
        h = random_hamiltonian(9000 + k)
        for t in np.linspace(0.0, 3.0, 50):
            rep = verify_general(evolve(st, h, t), x, y)
            worst = max(worst, rep.analytic_discrepancy, rep.table_discrepancy)
            steps += 1
    drift = 0.0
    rng = np.random.default_rng(909)
    for k in range(10):
        st = random_state(9100 + k)
        c = rng.normal(size=(2, 4))
        hl = local_hamiltonian(c[0, 0] * np.eye(2) + sigma_dot(c[0, 1:]), c[1, 0] * np.eye(2) + sigma_dot(c[1, 1:]))
        mu0 = frame_of(st).schmidt.mu1
        for t in np.linspace(0.0, 3.0, 50):
            drift = max(drift, abs(frame_of(evolve(st, hl, t)).schmidt.mu1 - mu0))
    ok = worst <= 1e-8 and drift <= 1e-10
    record(9, "dynamics", ok, f"{steps} steps, max err {worst:.1e}, local-H mu1 drift {drift:.1e}")


def test_c10_contextuality():
    rows, cols = matrix_signs()
    signs_ok = rows == [1, 1, 1] and cols == [1, 1, -1]
    n_assign = len(noncontextual_assignments())
    worst_z = 0.0
    for k, ab in enumerate((-0.9, -0.5, 0.0, 0.5, 0.9)):
        a = np.array([np.sqrt(1 - ab * ab), 0.0, ab])
        rep = product_rule_violation(singlet(), spin(a), spin(EZ), n_samples=1_000_000, seed=k)
        expected = rep.axis_angles["a"] / np.pi
        assert abs(rep.analytic["a"] - expected) <= 1e-12
        if ab == 0.5:
            assert abs(expected - 1 / 12) <= 1e-9
        worst_z = max(worst_z, abs(rep.mc["a"].z(expected)))
    ok = signs_ok and n_assign == 0 and worst_z <= 4.0
    record(10, "contextuality", ok, f"signs {rows}/{cols}, noncontextual {n_assign}, max |z| {worst_z:.2f}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q"]))
