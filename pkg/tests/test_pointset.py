from fractions import Fraction
from itertools import product

import pytest

from hybridqmc.algebra import PolyGF, find_irreducible
from hybridqmc.kernels import BaseFraction, digit_sub
from hybridqmc.pointset import (HybridRule, RuleError, assemble, format_rule, lattice_column,
                                lattice_points, parse_key_values, parse_rule,
                                polynomial_lattice_points, read_rule, walsh_column, write_rule)


def P(b, text):
    return PolyGF.from_digits(b, text)


F2 = P(2, "111")


def test_polynomial_lattice_example():
    pts = polynomial_lattice_points(F2, [P(2, "1")], 2)
    assert [float(p[0]) for p in pts] == [0.0, 0.25, 0.75, 0.5]


def test_zero_row_is_origin():
    f = find_irreducible(3, 3)
    pts = polynomial_lattice_points(f, [P(3, "12"), P(3, "201")], 3)
    assert all(x.numerator == 0 for x in pts[0])


def test_lattice_examples():
    assert lattice_points([1], 4) == [(Fraction(k, 4),) for k in range(4)]
    assert lattice_points([1, 3], 5)[2] == (Fraction(2, 5), Fraction(1, 5))
    assert [p[0] for p in lattice_points([3], 4)] == [0, Fraction(3, 4), Fraction(1, 2),
                                                      Fraction(1, 4)]


def test_assemble_example_and_empty_parts():
    rule = HybridRule(2, 2, F2, (P(2, "1"),), (1,))
    ps = assemble(rule)
    assert ps.row(1) == ((BaseFraction(2, 1, 2),), (Fraction(1, 4),))
    assert ps.row(0) == ((BaseFraction(2, 0, 2),), (Fraction(0),))
    assert assemble(HybridRule(2, 2, F2, (P(2, "1"),), ())).trig.shape == (4, 0)
    assert assemble(HybridRule(2, 2, F2, (), (3,))).walsh.shape == (4, 0)


@pytest.mark.parametrize("b,m", [(2, 1), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_projections_are_full_grids(b, m):
    f = find_irreducible(b, m)
    n = b**m
    for code in range(1, n, max(1, n // 7)):
        col = walsh_column(f, PolyGF.from_int(b, code))
        assert sorted(col.tolist()) == list(range(n))
    for z in (z for z in range(1, n) if z % b):
        assert sorted(lattice_column(z, n).tolist()) == list(range(n))


@pytest.mark.parametrize("b,m", [(2, 3), (3, 2), (5, 2)])
def test_generator_matrix_route_matches_long_division(b, m):
    f = find_irreducible(b, m)
    gs = [PolyGF.from_int(b, c) for c in (0, 1, b**m - 1, b + 2)]
    rows = polynomial_lattice_points(f, gs, m)
    for j, g in enumerate(gs):
        assert walsh_column(f, g).tolist() == [r[j].numerator for r in rows]


def _closed(rows, diff):
    table = {r: i for i, r in enumerate(rows)}
    return all(diff(a, c) in table for a, c in product(rows, repeat=2))


def test_each_part_is_a_group():
    b, m = 2, 4
    f = find_irreducible(b, m)
    rule = HybridRule(b, m, f, (P(2, "1"), P(2, "1011")), (1, 7))
    ps = assemble(rule)
    walsh = [tuple(x.numerator for x in ps.walsh_row(n)) for n in range(16)]
    trig = [tuple(ps.trig[n].tolist()) for n in range(16)]
    wsub = lambda a, c: tuple(digit_sub(BaseFraction(2, x, m), BaseFraction(2, y, m)).numerator
                              for x, y in zip(a, c))
    tsub = lambda a, c: tuple((x - y) % 16 for x, y in zip(a, c))
    assert _closed(walsh, wsub) and _closed(trig, tsub)


def test_parts_do_not_share_difference_index():
    # digit subtraction of row indices and subtraction mod N differ, so the
    # two parts close under different index maps
    rule = HybridRule(2, 2, F2, (P(2, "1"),), (1,))
    ps = assemble(rule)
    rows = [ps.row(n) for n in range(4)]
    n, n2 = 0, 1
    wdiff = tuple(digit_sub(a, c) for a, c in zip(rows[n][0], rows[n2][0]))
    tdiff = tuple((a - c) % 1 for a, c in zip(rows[n][1], rows[n2][1]))
    assert all(r != (wdiff, tdiff) for r in rows)


class TestRuleValidation:
    def test_reducible_modulus(self):
        with pytest.raises(RuleError):
            HybridRule(2, 2, P(2, "101"), (), (1,))

    def test_degree_mismatch(self):
        with pytest.raises(RuleError):
            HybridRule(2, 3, F2, (), (1,))

    def test_generator_degree(self):
        with pytest.raises(RuleError):
            HybridRule(2, 2, F2, (P(2, "100"),), ())

    @pytest.mark.parametrize("z", [0, 2, 4, 5])
    def test_lattice_generator_must_be_unit(self, z):
        with pytest.raises(RuleError):
            HybridRule(2, 2, F2, (), (z,))


class TestRuleFile:
    def test_round_trip(self, tmp_path):
        rule = HybridRule(3, 3, find_irreducible(3, 3), (P(3, "1"), P(3, "212")), (1, 5, 13))
        path = tmp_path / "rule.txt"
        write_rule(rule, path)
        assert read_rule(path) == rule
        assert path.read_bytes() == format_rule(rule).encode()
        assert b"\r" not in path.read_bytes()

    def test_comments_and_blank_lines(self):
        text = "# hybrid rule\nb=2\n\nm=2  # precision\nf=111\ng=1\nz=3\n"
        assert parse_rule(text) == HybridRule(2, 2, F2, (P(2, "1"),), (3,))

    def test_empty_parts(self):
        rule = HybridRule(2, 2, F2, (), (3,))
        assert parse_rule(format_rule(rule)) == rule

    @pytest.mark.parametrize("text", ["b=2\nm=2\nf=111\ng=1\n", "b=2\nb=2\nm=2\nf=111\ng=\nz=\n",
                                      "b=2\nm=2\nf=111\ng=1\nz=1\njunk\n"])
    def test_malformed(self, text):
        with pytest.raises(ValueError):
            parse_rule(text)

    def test_key_values(self):
        assert parse_key_values("a = 1\n b=x=y\n") == {"a": "1", "b": "x=y"}
