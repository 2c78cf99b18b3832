import math

import numpy as np
import pytest

from qgraphs.graphs import (
    EdgeLengths,
    UniformLengths,
    complete_graph,
    graph_from_edges,
    random_regular_graph,
    sample_lengths,
    star_graph,
)
from qgraphs.quantum import (
    bond_scattering_matrix,
    count_eigenvalues,
    eigenphase_velocities,
    eigenphases,
    find_eigenvalues,
    make_quantum_graph,
    markov_eigenvalue_gap,
    markov_matrix,
    markov_spectral_gap,
    monte_carlo_ut_moments,
    orbit_sum_entry,
    secular_function,
)
from qgraphs.scattering import equitransmitting_smatrix, neumann_smatrix


def _random_qg(n, d, boundary, seed):
    g = random_regular_graph(n, d, seed=seed)
    lens = sample_lengths(g.edge_count, UniformLengths(2.0, 10.0), seed=seed + 1000)
    return make_quantum_graph(g, lens, boundary)


def _single_edge_qg(L=1.7):
    g = graph_from_edges(2, [(0, 1)])
    return make_quantum_graph(g, EdgeLengths(np.array([L])), "neumann")


class TestBondMatrix:
    @pytest.mark.parametrize("boundary", ["neumann", "equitransmitting"])
    @pytest.mark.parametrize("seed", range(3))
    def test_unitarity(self, boundary, seed):
        qg = _random_qg(12, 6, boundary, seed)
        rng = np.random.default_rng(seed)
        for k in rng.uniform(0.5, 30.0, size=4):
            u = bond_scattering_matrix(qg, float(k)).entries
            dev = np.abs(u @ u.conj().T - np.eye(len(u))).max()
            assert dev <= 1e-11

    def test_single_neumann_edge_closed_form(self):
        L = 1.7
        qg = _single_edge_qg(L)
        k = 2.3
        u = bond_scattering_matrix(qg, k).entries
        phase = np.exp(1j * k * L)
        assert np.allclose(u, [[0, phase], [phase, 0]], atol=1e-14)

    def test_entry_moduli_independent_of_k(self):
        qg = _random_qg(10, 3, "neumann", 0)
        u1 = np.abs(bond_scattering_matrix(qg, 1.0).entries)
        u2 = np.abs(bond_scattering_matrix(qg, 17.3).entries)
        assert np.allclose(u1, u2, atol=1e-14)

    def test_thousand_random_graph_wavenumber_samples(self):
        # 50 graphs x 20 wavenumbers, max unitarity deviation 1e-11
        rng = np.random.default_rng(99)
        worst = 0.0
        for i in range(50):
            boundary = "equitransmitting" if i % 2 else "neumann"
            d = 6 if i % 2 else [3, 4, 6][i % 3]
            qg = _random_qg(10 + 2 * (i % 3), d, boundary, 400 + i)
            u_abs = np.abs(qg.unitary(0.0))
            eye = np.eye(qg.bond_count)
            for k in rng.uniform(0.1, 50.0, size=20):
                u = qg.unitary(float(k))
                worst = max(worst, np.abs(u @ u.conj().T - eye).max())
        assert worst <= 1e-11

    def test_halfgirth_power_entries_bounded_for_et(self):
        # below half girth every entry of U^t is a single path of modulus
        # d^{-t/2}, so |u^(t)|^2 <= d^{-t}
        from qgraphs.graphs import girth as graph_girth
        for seed in (31, 32):
            qg = _random_qg(14, 6, "equitransmitting", seed)
            g = graph_girth(qg.graph)
            u = qg.unitary(3.3)
            ut = np.eye(qg.bond_count, dtype=complex)
            t = 1
            while t < g / 2 + 1:
                ut = ut @ u
                assert (np.abs(ut) ** 2).max() <= 5.0 ** (-t) + 1e-12
                t += 1

    def test_smatrix_degree_mismatch_rejected(self):
        from qgraphs.quantum import QuantumGraph
        g = star_graph(3)
        lens = EdgeLengths(np.ones(3))
        sms = tuple([neumann_smatrix(2)] + [neumann_smatrix(1)] * 3)
        with pytest.raises(ValueError):
            QuantumGraph(g, lens, sms)


class TestMarkov:
    def test_doubly_stochastic(self):
        for seed in range(3):
            qg = _random_qg(10, 4, "neumann", seed)
            m = markov_matrix(qg).entries
            assert np.abs(m.sum(axis=0) - 1).max() <= 1e-12
            assert np.abs(m.sum(axis=1) - 1).max() <= 1e-12

    def test_matches_squared_moduli_at_two_wavenumbers(self):
        qg = _random_qg(10, 3, "neumann", 1)
        m = markov_matrix(qg).entries
        for k in (0.7, 13.1):
            u = bond_scattering_matrix(qg, k).entries
            assert np.allclose(m, np.abs(u) ** 2, atol=1e-14)

    def test_neumann_star_transition_probabilities(self):
        d = 5
        qg = make_quantum_graph(star_graph(d), EdgeLengths(np.ones(d) + np.arange(d)),
                                "neumann")
        m = markov_matrix(qg).entries
        back = (1 - 2 / d) ** 2
        trans = (2 / d) ** 2
        # bond 1 = (1, 0) comes into the center; bond 0 = (0, 1) backscatters
        assert m[0, 1] == pytest.approx(back)
        assert m[2, 1] == pytest.approx(trans)
        assert back + (d - 1) * trans == pytest.approx(1.0)

    def test_equitransmitting_transitions(self):
        qg = _random_qg(10, 6, "equitransmitting", 0)
        m = markov_matrix(qg).entries
        bonds = qg.bonds
        for b2 in range(0, qg.bond_count, 7):
            rev = bonds.reversal[b2]
            assert m[rev, b2] == pytest.approx(0.0, abs=1e-14)
            nz = m[:, b2][m[:, b2] > 1e-14]
            assert np.allclose(nz, 0.2, atol=1e-12)

    def test_uniform_chain_gap_is_zero(self):
        B = 8
        m = np.ones((B, B)) / B
        assert markov_spectral_gap(m) == pytest.approx(0.0, abs=1e-12)
        assert markov_eigenvalue_gap(m) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("seed", range(4))
    def test_mixing_estimate_with_contraction_norm(self, seed):
        qg = _random_qg(12, 6, "equitransmitting" if seed % 2 else "neumann", seed)
        m = markov_matrix(qg).entries
        B = len(m)
        pi = np.ones((B, B)) / B
        mu = markov_spectral_gap(m)
        mt = np.eye(B)
        for t in range(1, 21):
            mt = mt @ m
            assert np.linalg.norm(mt - pi, 2) <= mu ** t + 1e-10

    @pytest.mark.parametrize("seed", range(4))
    def test_eigenvalue_gap_below_one_for_aperiodic_chains(self, seed):
        # random regular graphs contain odd cycles, so the bond chain mixes
        qg = _random_qg(14, 6, "neumann", seed)
        mu = markov_eigenvalue_gap(markov_matrix(qg))
        assert 0 < mu < 1
        # and M^t actually converges at that asymptotic rate
        m = markov_matrix(qg).entries
        B = len(m)
        pi = np.ones((B, B)) / B
        mt = np.linalg.matrix_power(m, 60)
        assert np.linalg.norm(mt - pi, 2) <= 5 * mu ** 60


class TestOrbitSums:
    def test_one_step_equals_matrix_entry(self):
        qg = _random_qg(8, 3, "neumann", 2)
        u = bond_scattering_matrix(qg, 3.1).entries
        for b, b2 in [(0, 1), (3, 7), (10, 4)]:
            assert orbit_sum_entry(qg, 3.1, b, b2, 1) == pytest.approx(u[b, b2], abs=1e-12)

    @pytest.mark.parametrize("boundary", ["neumann", "equitransmitting"])
    def test_matches_matrix_powers(self, boundary):
        d = 4 if boundary == "equitransmitting" else 3
        qg = _random_qg(8, d, boundary, 5)
        k = 2.456
        u = bond_scattering_matrix(qg, k).entries
        rng = np.random.default_rng(0)
        for t in (2, 3, 4):
            ut = np.linalg.matrix_power(u, t)
            for _ in range(4):
                b, b2 = rng.integers(0, qg.bond_count, size=2)
                assert orbit_sum_entry(qg, k, int(b), int(b2), t) == \
                    pytest.approx(ut[b, b2], abs=1e-10)

    def test_equitransmitting_amplitudes_have_uniform_modulus(self):
        # every contributing path of t steps has |sigma_gamma| = d^{-t/2}
        g = complete_graph(5)  # 4-regular, d = 3
        lens = sample_lengths(g.edge_count, UniformLengths(1.0, 2.0), seed=8)
        qg = make_quantum_graph(g, lens, "equitransmitting")
        from qgraphs.quantum import _orbit_sum_column

        t = 3
        col = _orbit_sum_column(qg, 0.0, 0, t, cap=10**7)
        # at k = 0 every path contributes d^{-t/2} times a sign
        counts = np.round(np.abs(col) * 3 ** (t / 2)).astype(int)
        residual = np.abs(np.abs(col) * 3 ** (t / 2) - counts).max()
        assert residual <= 1e-9

    def test_path_cap_enforced(self):
        qg = _random_qg(10, 6, "neumann", 3)
        from qgraphs.errors import NumericalError
        with pytest.raises(NumericalError):
            orbit_sum_entry(qg, 1.0, 0, 0, 12, cap=100)


class TestSecular:
    def test_single_edge_closed_form(self):
        L = 1.7
        qg = _single_edge_qg(L)
        for k in (0.3, 1.1, 2.9):
            expected = 1 - np.exp(2j * k * L)
            assert secular_function(qg, k) == pytest.approx(expected, abs=1e-12)

    def test_small_at_solver_roots(self):
        qg = _single_edge_qg(1.7)
        recs = find_eigenvalues(qg, 0.5, 6.0)
        for rec in recs:
            assert abs(secular_function(qg, rec.k)) < 1e-8


class TestEigenphases:
    def test_count_and_range(self):
        qg = _random_qg(8, 3, "neumann", 7)
        ph = eigenphases(qg, 2.2)
        assert len(ph) == qg.bond_count
        assert np.all((ph >= 0) & (ph < 2 * np.pi))
        assert np.all(np.diff(ph) >= 0)

    def test_velocity_identity_by_finite_differences(self):
        qg = _random_qg(8, 3, "neumann", 11)
        k, h = 2.345, 1e-6
        ph0, vel = eigenphase_velocities(qg, k)
        w0 = np.exp(1j * ph0)
        ph1 = eigenphases(qg, k + h)
        w1 = np.exp(1j * ph1)
        # match each eigenvalue to its nearest successor on the circle
        for j in range(len(w0)):
            jm = np.argmin(np.abs(np.angle(w1 * np.conj(w0[j]))))
            fd = np.angle(w1[jm] * np.conj(w0[j])) / h
            assert fd == pytest.approx(vel[j], abs=1e-4)

    def test_velocities_within_length_bounds(self):
        qg = _random_qg(8, 3, "neumann", 13)
        lens = qg.lengths.lengths
        _, vel = eigenphase_velocities(qg, 4.0)
        assert np.all(vel >= lens.min() - 1e-9)
        assert np.all(vel <= lens.max() + 1e-9)


class TestFindEigenvalues:
    def test_two_edge_star_interval_oracle(self):
        lens = EdgeLengths(np.array([1.31, 2.07]))
        qg = make_quantum_graph(star_graph(2), lens, "neumann")
        recs = find_eigenvalues(qg, 0.05, 51 * np.pi / lens.total)
        exact = np.arange(1, len(recs) + 1) * np.pi / lens.total
        got = np.array([r.k for r in recs])
        assert len(recs) >= 50
        assert np.abs(got - exact).max() <= 1e-9

    def test_residuals_and_normalization(self):
        qg = _random_qg(8, 3, "neumann", 17)
        recs = find_eigenvalues(qg, 1.0, 2.5)
        assert recs
        for rec in recs:
            assert rec.residual <= 1e-8
            assert np.linalg.norm(rec.a) == pytest.approx(1.0, abs=1e-12)
            u = qg.unitary(rec.k)
            assert np.linalg.norm(u @ rec.a - rec.a) <= 1e-8

    def test_weyl_count(self):
        for seed in range(2):
            qg = _random_qg(10, 3, "neumann", seed)
            B = qg.bond_count
            k1, k2 = 3.0, 3.0 + 60 * np.pi / qg.total_length
            n = count_eigenvalues(qg, k1, k2)
            assert abs(n - (k2 - k1) * qg.total_length / np.pi) <= B / 2 + 2
            recs = find_eigenvalues(qg, k1, k2)
            assert sum(r.multiplicity_hint for r in recs) == n

    def test_degenerate_roots_merged(self):
        # equal lengths force exact degeneracies on the 3-star
        lens = EdgeLengths(np.array([1.0, 1.0, 1.0]))
        qg = make_quantum_graph(star_graph(3), lens, "neumann")
        # at k = pi, cos(kL) = -1 on all edges: degenerate eigenvalue
        recs = find_eigenvalues(qg, 1.0, 4.0)
        multiplicities = {round(r.k, 6): r.multiplicity_hint for r in recs}
        assert multiplicities[round(np.pi / 2, 6)] == 2
        assert sum(r.multiplicity_hint for r in recs) == count_eigenvalues(qg, 1.0, 4.0)

    def test_parameter_validation(self):
        qg = _single_edge_qg()
        with pytest.raises(ValueError):
            find_eigenvalues(qg, -1.0, 2.0)
        with pytest.raises(ValueError):
            find_eigenvalues(qg, 2.0, 1.0)
        with pytest.raises(ValueError):
            find_eigenvalues(qg, 1.0, 2.0, tol=0.0)


class TestMonteCarloMoments:
    def test_first_power_second_moment_is_markov(self):
        g = complete_graph(5)
        sms = tuple(equitransmitting_smatrix(3) for _ in range(5))
        dist = UniformLengths(2.0, 10.0)
        out = monte_carlo_ut_moments(g, sms, dist, k=5.0, t=1, trials=120, seed=4)
        qg = make_quantum_graph(g, sample_lengths(g.edge_count, dist, 0),
                                "equitransmitting")
        m = markov_matrix(qg).entries
        assert np.allclose(out["mean_sq"], m, atol=1e-13)

    def test_lemma_bounds_at_large_k(self):
        from qgraphs.graphs import girth as graph_girth
        n, deg = 12, 6  # d = 5 branching
        g = random_regular_graph(n, deg, seed=21)
        sms = tuple(equitransmitting_smatrix(5) for _ in range(n))
        dist = UniformLengths(2.0, 10.0)
        gi = graph_girth(g)
        k = 40.0
        trials = 400
        t = int(gi)  # lemma requires t >= girth
        out = monte_carlo_ut_moments(g, sms, dist, k=k, t=t, trials=trials, seed=9)
        f = dist.envelope(k)
        from qgraphs.graphs import nonbacktracking_transition_matrix
        T = nonbacktracking_transition_matrix(g)
        nt = np.linalg.matrix_power(T, t)
        d = deg - 1
        # pairs without a non-backtracking path carry exactly zero amplitude
        assert np.all(out["mean_abs"][nt == 0] == 0.0)
        bound_mean = nt * f ** gi / d ** (t / 2)
        # 5 standard errors: thousands of entries are tested at once
        se = 5.0 / math.sqrt(trials) * np.sqrt(nt / d ** t)
        assert np.all(out["mean_abs"] <= bound_mean + se + 1e-12)
        bound_sq = nt / d ** t * (1 + nt * f ** gi)
        se_sq = 5.0 / math.sqrt(trials) * nt / d ** t
        assert np.all(out["mean_sq"] <= bound_sq + se_sq + 1e-12)

    def test_second_moment_tracks_classical_power(self):
        n, deg = 10, 6
        g = random_regular_graph(n, deg, seed=2)
        sms = tuple(equitransmitting_smatrix(5) for _ in range(n))
        dist = UniformLengths(2.0, 10.0)
        t = 3
        out = monte_carlo_ut_moments(g, sms, dist, k=60.0, t=t, trials=600, seed=3)
        qg = make_quantum_graph(g, sample_lengths(g.edge_count, dist, 0),
                                "equitransmitting")
        mt = np.linalg.matrix_power(markov_matrix(qg).entries, t)
        # diagonal (classical) part dominates; sampling error a few/sqrt(trials)
        assert np.abs(out["mean_sq"] - mt).max() <= 0.25 * mt.max() + 0.02

    def test_requires_equitransmitting(self):
        g = complete_graph(4)
        sms = tuple(neumann_smatrix(3) for _ in range(4))
        with pytest.raises(ValueError):
            monte_carlo_ut_moments(g, sms, UniformLengths(1, 2), 1.0, 2, 100, 0)

    def test_requires_enough_trials(self):
        g = complete_graph(5)
        sms = tuple(equitransmitting_smatrix(3) for _ in range(5))
        with pytest.raises(ValueError):
            monte_carlo_ut_moments(g, sms, UniformLengths(1, 2), 1.0, 2, 50, 0)
