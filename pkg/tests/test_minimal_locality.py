import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from hv2q.frame import frame_of
from hv2q.general import r_vector
from hv2q.minimal import (
    arc_overlap,
    circle_correlation,
    factorization_defect,
    locality_probe,
    minimal_correlation,
    minimal_params,
    sup_defect_closed_form,
    verify_minimal,
)
from hv2q.sampling import sample_circle
from hv2q.states import random_observable, random_product_state, random_schmidt_state, random_state, singlet, spin

from conftest import unit_vectors as draw_units
from strategies import observables, states

angles = st.floats(0.0, np.pi)


class TestArcOverlap:
    def test_hand_cases(self):
        assert np.isclose(arc_overlap(1.0, 1.0, 0.0), 2.0 / (2 * np.pi))
        assert arc_overlap(0.5, 0.5, 2.0) == 0.0
        assert np.isclose(arc_overlap(np.pi, 0.3, 1.0), 0.6 / (2 * np.pi))

    def test_wraparound(self):
        # arcs [-3, 3] and [pi - 0.5, pi + 0.5] overlap near +-pi on both sides
        assert np.isclose(arc_overlap(3.0, 0.5, np.pi), 2 * (3.0 - (np.pi - 0.5)) / (2 * np.pi))

    def test_monte_carlo(self, rng):
        ang = sample_circle(rng, 400_000)
        xi, chi, d = 1.2, 0.8, 1.5
        hit = (np.cos(ang) >= np.cos(xi)) & (np.cos(ang - d) >= np.cos(chi))
        p = arc_overlap(xi, chi, d)
        assert abs(hit.mean() - p) < 4 * np.sqrt(p * (1 - p) / len(ang))

    @given(angles, angles, angles)
    def test_closed_form_in_its_domain(self, xi, chi, th):
        if th >= abs(xi - chi) and xi + chi + th <= 2 * np.pi:
            assert abs(circle_correlation(xi, chi, th) - minimal_correlation(xi, chi, th)) < 1e-12


class TestMinimalModel:
    @given(states(), observables(), observables())
    def test_reproduces_moments(self, s, x, y):
        rep = verify_minimal(s, x, y)
        assert rep.analytic_discrepancy <= 1e-8 and rep.table_discrepancy <= 1e-8
        assert not rep.notes

    @given(states(), observables(), observables())
    def test_angle_assumption(self, s, x, y):
        p = minimal_params(frame_of(s), x, y)
        assert p.assumption_ok and p.theta_hat <= p.xi + p.chi + 1e-12
        assert p.theta_hat >= abs(p.xi - p.chi) - 1e-12
        assert p.xi + p.chi + p.theta_hat <= 2 * np.pi + 1e-12

    def test_singlet(self):
        a = np.array([np.sin(1.0), 0.0, np.cos(1.0)])
        p = minimal_params(frame_of(singlet()), spin(a), spin([0, 0, 1]))
        assert np.isclose(p.xi, np.pi / 2) and np.isclose(p.theta_hat, np.pi * (1 - np.cos(1.0)) / 2)

    def test_monte_carlo(self):
        rep = verify_minimal(random_state(31), random_observable(32), random_observable(33), n_samples=300_000, seed=2)
        assert rep.passed


class TestLocality:
    def test_product_states_are_local(self, rng):
        for k in range(10):
            fr = frame_of(random_product_state(k))
            rep = locality_probe(fr, random_observable(k), [spin(b) for b in draw_units(rng, 64)])
            assert rep.supremum <= 1e-10 and rep.verdict == "local"

    def test_entangled_states_are_not(self, rng):
        fr = frame_of(random_schmidt_state(4, (0.5, 0.9)))
        rep = locality_probe(fr, spin([1, 0, 0]), [spin(b) for b in draw_units(rng, 256)])
        assert rep.verdict == "nonlocal" and rep.supremum > 0.05

    def test_defect_formula(self, rng):
        for k in range(20):
            fr = frame_of(random_state(k))
            x = random_observable(100 + k)
            b = draw_units(rng, 1)[0]
            a_p, n_p = fr.rotate(x.axis), fr.n_prime
            expected = abs(fr.cos2phi) * abs(a_p @ b - 2 * np.sin(fr.phi) ** 2 * (a_p @ n_p) * (b @ n_p))
            assert np.isclose(factorization_defect(fr, x, spin(b)), expected, atol=1e-12)

    def test_supremum_closed_form(self):
        for k in range(20):
            fr = frame_of(random_state(k))
            x = random_observable(200 + k)
            v = r_vector(fr, x) - fr.sin2phi ** 2 * (x.axis @ fr.n) * fr.n_prime
            best = spin(v / np.linalg.norm(v))
            closed = sup_defect_closed_form(fr.phi, x.axis @ fr.n)
            assert np.isclose(factorization_defect(fr, x, best), closed, atol=1e-12)

    def test_sup_shrinks_to_zero_with_phi(self):
        phis = np.linspace(0, np.pi / 4, 20)
        sup = [sup_defect_closed_form(p, 0.3) for p in phis]
        assert np.all(np.diff(sup) <= 1e-15) and sup[-1] < 1e-15

    def test_report_dict(self):
        rep = locality_probe(frame_of(singlet()), spin([0, 0, 1]), [spin([0, 0, 1])])
        d = rep.to_dict()
        assert d["verdict"] == "nonlocal" and np.isclose(d["supremum"], 1.0)
