import math
from itertools import product

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hybridqmc.algebra import (NEG_INF, PolyGF, PrimeBase, digit_matrix, encode_digits,
                               euler_totient_prime_power, find_irreducible, is_irreducible,
                               laurent_expand, laurent_matrix, multiplication_matrix,
                               poly_mul_mod, poly_pow_mod, power_table, primitive_element,
                               unit_group_table)


def P(b, text):
    return PolyGF.from_digits(b, text)


def test_prime_base_rejects_composites():
    assert PrimeBase(7) == 7
    for bad in (0, 1, 4, 9, -3):
        with pytest.raises(ValueError):
            PrimeBase(bad)


def test_zero_polynomial_has_no_integer_degree():
    z = PolyGF(2, (0, 0))
    assert z.coeffs == () and z.is_zero()
    assert z.deg == NEG_INF
    assert z.to_digits() == "0"


def test_encoding_round_trip():
    for code in range(200):
        p = PolyGF.from_int(3, code)
        assert p.to_int() == code
        assert PolyGF.from_digits(3, p.to_digits()) == p


def test_rejects_out_of_range_coefficients():
    with pytest.raises(ValueError):
        PolyGF(2, (0, 2))
    with pytest.raises(ValueError):
        PolyGF.from_digits(3, "13")


class TestMulMod:
    def test_zero_annihilates(self):
        f = P(2, "111")
        assert poly_mul_mod(PolyGF(2), P(2, "11"), f).is_zero()

    def test_x_squared_mod_x2_x_1(self):
        assert poly_mul_mod(P(2, "10"), P(2, "10"), P(2, "111")) == P(2, "11")

    def test_base3_reduction(self):
        assert poly_mul_mod(P(3, "11"), P(3, "12"), P(3, "100")) == P(3, "2")

    @given(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.data())
    def test_commutative_and_reduced(self, b, n, data):
        f = PolyGF.from_int(b, data.draw(st.integers(b**n, b ** (n + 1) - 1)))
        a = PolyGF.from_int(b, data.draw(st.integers(0, b**8)))
        c = PolyGF.from_int(b, data.draw(st.integers(0, b**8)))
        r = poly_mul_mod(a, c, f)
        assert r == poly_mul_mod(c, a, f)
        assert r.deg < f.deg

    def test_matches_divmod(self):
        f = P(5, "1021")
        a, c = P(5, "4321"), P(5, "33")
        assert poly_mul_mod(a, c, f) == (a * c) % f
        q, r = divmod(a * c, f)
        assert q * f + r == a * c

    def test_pow_matches_repeated_product(self):
        f, a = P(3, "1021"), P(3, "12")
        acc = PolyGF(3, (1,))
        for e in range(12):
            assert poly_pow_mod(a, e, f) == acc
            acc = poly_mul_mod(acc, a, f)


class TestIrreducible:
    @pytest.mark.parametrize("b,text,expect", [(2, "111", True), (2, "101", False),
                                               (3, "101", True)])
    def test_examples(self, b, text, expect):
        assert is_irreducible(P(b, text)) is expect

    @pytest.mark.parametrize("m,text", [(1, "10"), (2, "111"), (3, "1011")])
    def test_find_smallest(self, m, text):
        assert find_irreducible(2, m) == P(2, text)

    @pytest.mark.parametrize("b", [2, 3, 5])
    @pytest.mark.parametrize("m", range(1, 9))
    def test_found_modulus_is_monic_irreducible(self, b, m):
        f = find_irreducible(b, m)
        assert f.deg == m and f.is_monic() and is_irreducible(f)

    def test_found_modulus_is_encoding_minimal(self):
        for b, m in [(2, 4), (3, 2), (3, 3)]:
            f = find_irreducible(b, m)
            for code in range(b**m, f.to_int()):
                g = PolyGF.from_int(b, code)
                assert not (g.is_monic() and is_irreducible(g))

    def test_counts_match_necklace_formula(self):
        # number of monic irreducibles of degree n over F_q is (1/n) sum_{d|n} mu(d) q^(n/d)
        expect = {(2, 4): 3, (2, 5): 6, (3, 3): 8}
        for (b, n), cnt in expect.items():
            got = sum(is_irreducible(PolyGF.from_int(b, c)) for c in range(b**n, 2 * b**n))
            assert got == cnt


class TestLaurent:
    def test_zero_numerator(self):
        assert laurent_expand(PolyGF(2), P(2, "111"), 5).digits == (0,) * 5

    def test_examples(self):
        f = P(2, "111")
        assert laurent_expand(P(2, "1"), f, 2).digits == (0, 1)
        assert laurent_expand(P(2, "10"), f, 2).digits == (1, 1)
        assert laurent_expand(P(2, "10"), f, 2).numerator == 3

    def test_rejects_improper_fraction(self):
        with pytest.raises(ValueError):
            laurent_expand(P(2, "111"), P(2, "111"), 3)

    @given(st.sampled_from([2, 3, 5]), st.integers(1, 5), st.integers(1, 8), st.data())
    def test_reconstruction(self, b, n, m, data):
        f = PolyGF.from_int(b, data.draw(st.integers(b**n, b ** (n + 1) - 1)))
        r = PolyGF.from_int(b, data.draw(st.integers(0, b**n - 1)))
        digits = laurent_expand(r, f, m + n).digits
        # x^(m+n) * r = f * (sum t_l x^(m+n-l)) + remainder of degree < n
        series = PolyGF(b, tuple(reversed(digits)))
        lhs = r * PolyGF.x_power(b, m + n)
        rem = lhs - f * series
        assert rem.deg < n


def test_totient_examples():
    assert euler_totient_prime_power(2, 1) == 1
    assert euler_totient_prime_power(2, 3) == 4
    assert euler_totient_prime_power(3, 2) == 6


@pytest.mark.parametrize("b,m", [(b, m) for b in (2, 3) for m in range(1, 8) if b**m <= 3**7])
def test_totient_brute_force(b, m):
    n = b**m
    assert euler_totient_prime_power(b, m) == sum(math.gcd(k, n) == 1 for k in range(1, n))


def test_digit_matrix_round_trip():
    d = digit_matrix(3, 4)
    assert d.shape == (81, 4)
    assert np.array_equal(encode_digits(3, d), np.arange(81))


def test_multiplication_matrix_acts_like_mul_mod():
    f = P(3, "1021")
    c = P(3, "21")
    mat = multiplication_matrix(c, f)
    for code in range(27):
        h = PolyGF.from_int(3, code)
        dig = digit_matrix(3, 3, np.array([code]))
        got = encode_digits(3, (dig @ mat) % 3)[0]
        assert got == poly_mul_mod(h, c, f).to_int()


def test_laurent_matrix_agrees_with_long_division():
    for b, m in [(2, 4), (3, 3), (5, 2)]:
        f = find_irreducible(b, m)
        for g_code in (1, b + 1, b**m - 1):
            g = PolyGF.from_int(b, g_code)
            mat = laurent_matrix(g, f)
            for code in range(b**m):
                h = PolyGF.from_int(b, code)
                dig = digit_matrix(b, m, np.array([code]))
                got = encode_digits(b, (dig @ mat) % b)[0]
                want = laurent_expand(poly_mul_mod(h, g, f), f, m).numerator
                assert got == want


@pytest.mark.parametrize("b,m", [(2, 1), (2, 5), (3, 3), (5, 2), (7, 2)])
def test_power_table_enumerates_nonzero_residues(b, m):
    f = find_irreducible(b, m)
    gen, powers = power_table(f)
    assert gen == primitive_element(f)
    assert sorted(powers.tolist()) == list(range(1, b**m))
    for t in {0, min(1, len(powers) - 1), len(powers) // 2, len(powers) - 1}:
        assert powers[t] == poly_pow_mod(gen, t, f).to_int()


@pytest.mark.parametrize("b,k", [(2, 1), (2, 2), (2, 3), (2, 7), (3, 1), (3, 4), (5, 3), (7, 2)])
def test_unit_group_table_is_a_coordinate_chart(b, k):
    n = b**k
    table = unit_group_table(b, k)
    e, length = table.shape
    assert sorted(table.ravel().tolist()) == [u for u in range(1, n) if u % b]
    for i, s, i2, s2 in product(range(e), range(0, length, max(1, length // 5)),
                                range(e), range(0, length, max(1, length // 7))):
        assert table[i, s] * table[i2, s2] % n == table[(i + i2) % e, (s + s2) % length]
