import numpy as np
import pytest

from qgraphs.scattering import (
    custom_smatrix,
    equitransmitting_smatrix,
    is_odd_prime,
    legendre_symbol,
    neumann_smatrix,
    unitarity_deviation,
)

UNITARY_TOL = 1e-12


class TestNeumann:
    def test_degree_two_is_full_transmission(self):
        sm = neumann_smatrix(2)
        assert np.array_equal(sm.entries.real, [[0, 1], [1, 0]])

    def test_dead_end_reflects_with_plus_one(self):
        sm = neumann_smatrix(1)
        assert sm.entries[0, 0] == 1.0

    def test_degree_four_entries_exact(self):
        sm = neumann_smatrix(4)
        assert np.all(sm.entries[~np.eye(4, dtype=bool)] == 0.5)
        assert np.all(np.diag(sm.entries) == -0.5)

    @pytest.mark.parametrize("d", [1, 2, 3, 4, 6, 10, 50])
    def test_entries_exact_and_orthogonal(self, d):
        sm = neumann_smatrix(d)
        expected = np.full((d, d), 2.0 / d) - np.eye(d)
        assert np.array_equal(sm.entries.real, expected)
        assert sm.unitarity_deviation() <= UNITARY_TOL

    def test_backscattering_dominates_at_large_degree(self):
        # entries 2/d - delta converge to minus the identity, so the
        # backscattering probability tends to 1
        for d in (10, 100, 1000):
            sm = neumann_smatrix(d)
            assert np.abs(sm.entries + np.eye(d)).max() == pytest.approx(2.0 / d)
            assert abs(sm.entries[0, 0]) ** 2 == pytest.approx(1.0, abs=4.0 / d)

    def test_zero_degree_rejected(self):
        with pytest.raises(ValueError):
            neumann_smatrix(0)


class TestLegendre:
    def test_zero_case(self):
        assert legendre_symbol(0, 5) == 0
        assert legendre_symbol(10, 5) == 0

    def test_known_values_mod_5(self):
        # squares mod 5 are {1, 4}
        assert legendre_symbol(4, 5) == 1
        assert legendre_symbol(2, 5) == -1

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
    def test_against_brute_force_squares(self, p):
        squares = {(x * x) % p for x in range(1, p)}
        for k in range(p):
            expected = 0 if k == 0 else (1 if k in squares else -1)
            assert legendre_symbol(k, p) == expected

    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13, 17, 19, 23, 29, 31])
    def test_multiplicativity(self, p):
        for a in range(1, p):
            for b in range(1, p):
                assert legendre_symbol(a * b, p) == \
                    legendre_symbol(a, p) * legendre_symbol(b, p)

    @pytest.mark.parametrize("p", [1, 2, 4, 9, 15])
    def test_non_prime_rejected(self, p):
        assert not is_odd_prime(p)
        with pytest.raises(ValueError):
            legendre_symbol(1, p)


class TestEquiTransmitting:
    @pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
    def test_unitary_and_equitransmitting(self, p):
        sm = equitransmitting_smatrix(p)
        assert sm.degree == p + 1
        assert sm.unitarity_deviation() <= UNITARY_TOL
        prob = np.abs(sm.entries) ** 2
        assert np.abs(np.diag(prob)).max() <= UNITARY_TOL
        off = prob[~np.eye(p + 1, dtype=bool)]
        assert np.abs(off - 1.0 / p).max() <= UNITARY_TOL

    def test_p3_border_row(self):
        sm = equitransmitting_smatrix(3)
        assert np.allclose(sm.entries[0], np.array([0, 1, 1, 1]) / np.sqrt(3))

    def test_row_and_column_probability_sums(self):
        for p in (3, 5, 7):
            prob = np.abs(equitransmitting_smatrix(p).entries) ** 2
            assert np.allclose(prob.sum(axis=0), 1.0, atol=UNITARY_TOL)
            assert np.allclose(prob.sum(axis=1), 1.0, atol=UNITARY_TOL)

    def test_p5_real_orthogonal(self):
        m = equitransmitting_smatrix(5).entries
        assert np.abs(m.imag).max() == 0
        assert np.abs(m.real @ m.real.T - np.eye(6)).max() <= UNITARY_TOL

    def test_composite_rejected(self):
        with pytest.raises(ValueError):
            equitransmitting_smatrix(9)


class TestCustom:
    def test_identity_accepted(self):
        sm = custom_smatrix(np.eye(3))
        assert sm.kind == "Custom"

    def test_non_unitary_rejected(self):
        with pytest.raises(ValueError):
            custom_smatrix(np.diag([1.0, 2.0]))

    def test_other_constructors_round_trip(self):
        for sm in (neumann_smatrix(5), equitransmitting_smatrix(5)):
            again = custom_smatrix(sm.entries)
            assert np.array_equal(again.entries, sm.entries)

    def test_random_unitary_accepted(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
        q, _ = np.linalg.qr(x)
        assert unitarity_deviation(q) <= 1e-12
        custom_smatrix(q)
