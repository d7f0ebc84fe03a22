from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gpdext.exact import (
    CircleScalar,
    Cyclo,
    cyclotomic_polynomial,
    frac_mod1,
    smul,
    sadd,
    solve_mod1,
)

angles = st.fractions(min_value=0, max_value=1, max_denominator=24).map(lambda a: a % 1)


def test_cyclotomic_polynomials():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(3) == (1, 1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("k", range(2, 13))
def test_full_root_sums_vanish(k):
    s = Cyclo.zero()
    for j in range(k):
        s = s + Cyclo.from_root(Fraction(j, k))
    assert s.is_zero()
    assert abs(s.to_complex()) < 1e-12


def test_partial_root_sums_do_not_vanish():
    s = Cyclo.from_root(Fraction(1, 5)) + Cyclo.from_root(Fraction(2, 5))
    assert not s.is_zero()
    assert (Cyclo.from_root(Fraction(0)) + Cyclo.from_root(Fraction(1, 2))).is_zero()
    assert not (Cyclo.from_root(Fraction(0), 2) + Cyclo.from_root(Fraction(1, 2), 3)).is_zero()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(angles, st.integers(-3, 3)), min_size=1, max_size=5))
def test_cyclo_zero_test_matches_complex_evaluation(terms):
    x = Cyclo.zero()
    for a, c in terms:
        x = x + Cyclo.from_root(a, c)
    assert x.is_zero() == (abs(x.to_complex()) < 1e-9)


@settings(max_examples=40, deadline=None)
@given(angles, angles, st.integers(-3, 3), st.integers(-3, 3))
def test_cyclo_ring_laws(a, b, c, d):
    x = Cyclo.from_root(a, c)
    y = Cyclo.from_root(b, d)
    assert (x * y - y * x).is_zero()
    assert abs((x + y).to_complex() - (x.to_complex() + y.to_complex())) < 1e-12
    assert abs((x * y).to_complex() - x.to_complex() * y.to_complex()) < 1e-12
    assert abs(x.conj().to_complex() - x.to_complex().conjugate()) < 1e-12


@settings(max_examples=40, deadline=None)
@given(angles, angles)
def test_circle_scalar_products_stay_exact(a, b):
    x = CircleScalar.from_angle(a)
    y = CircleScalar.from_angle(b)
    z = x * y
    assert z.is_exact
    assert z.angle == frac_mod1(a + b)
    assert abs(z.to_complex() - x.to_complex() * y.to_complex()) < 1e-12
    assert (x * x.conj()).is_one()


def test_circle_scalar_approx():
    z = CircleScalar.from_complex(1j)
    assert not z.is_exact
    assert (z ** 4).isclose(CircleScalar.one())
    with pytest.raises(ValueError):
        CircleScalar.from_complex(2.0)
    mixed = z * CircleScalar.from_angle(Fraction(1, 4))
    assert not mixed.is_exact
    assert abs(mixed.to_complex() + 1) < 1e-12


def test_circle_scalar_coerce():
    assert CircleScalar.coerce(1).is_one()
    assert CircleScalar.coerce(-1).angle == Fraction(1, 2)
    assert CircleScalar.coerce("2/3").angle == Fraction(2, 3)
    assert CircleScalar.coerce(Fraction(5, 4)).angle == Fraction(1, 4)
    with pytest.raises(ValueError):
        CircleScalar.coerce(3)


def test_scalar_helpers_mix_modes():
    assert smul(Fraction(1, 2), 4) == 2
    assert isinstance(smul(Fraction(1, 2), 0.5), complex)
    x = smul(Cyclo.from_root(Fraction(1, 3)), Fraction(2))
    assert isinstance(x, Cyclo)
    assert sadd(1, Fraction(1, 2)) == Fraction(3, 2)


class TestSolveMod1:
    def test_scalar_division(self):
        assert solve_mod1([[2]], [Fraction(1, 2)]) == [Fraction(1, 4)]

    def test_wraparound_consistency(self):
        # x - y = 1/2 and y - x = 1/2 agree modulo 1 though not over Q
        x = solve_mod1([[1, -1], [-1, 1]], [Fraction(1, 2), Fraction(1, 2)])
        assert x is not None
        assert frac_mod1(x[0] - x[1]) == Fraction(1, 2)

    def test_inconsistent(self):
        assert solve_mod1([[1, -1], [1, -1]], [Fraction(1, 2), Fraction(1, 3)]) is None

    def test_zero_row(self):
        assert solve_mod1([[0]], [Fraction(1, 2)]) is None
        assert solve_mod1([[0]], [Fraction(0)]) == [Fraction(0)]

    @settings(max_examples=50, deadline=None)
    @given(
        st.lists(
            st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=1, max_size=5
        ),
        st.lists(st.fractions(min_value=0, max_value=1, max_denominator=6), min_size=5, max_size=5),
    )
    def test_solutions_verify(self, rows, rhs):
        rhs = [r % 1 for r in rhs[: len(rows)]]
        x = solve_mod1(rows, rhs)
        if x is None:
            return
        for row, w in zip(rows, rhs):
            total = sum(c * xi for c, xi in zip(row, x))
            assert frac_mod1(total - w) == 0

    @settings(max_examples=40, deadline=None)
    @given(
        st.lists(
            st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=1, max_size=4
        ),
        st.lists(st.fractions(min_value=0, max_value=1, max_denominator=4), min_size=4, max_size=4),
    )
    def test_never_misses_small_solutions(self, rows, rhs):
        # brute-force oracle: if a solution exists on the 1/12 grid, the
        # solver must not report unsolvable
        from itertools import product

        rhs = [r % 1 for r in rhs[: len(rows)]]
        x = solve_mod1(rows, rhs)
        if x is not None:
            return
        grid = [Fraction(j, 12) for j in range(12)]
        for cand in product(grid, repeat=2):
            if all(
                frac_mod1(sum(c * xi for c, xi in zip(row, cand)) - w) == 0
                for row, w in zip(rows, rhs)
            ):
                raise AssertionError(f"solver missed the solution {cand}")
