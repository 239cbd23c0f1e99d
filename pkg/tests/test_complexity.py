import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from symtract.complexity import (Criterion, NoFiniteIndex, Problem, closed_form_finite_rank,
                                 exact_antisymmetric_count, i_index, info_complexity, initial_error,
                                 initial_error_sq, nth_minimal_error)
from symtract.enumeration import InfiniteCount, brute_force_count, count_above
from symtract.spectrum import FiniteRank, Geometric, PowerDecay, ShiftedPower
from symtract.symmetry import Group, SymmetryStructure

S = SymmetryStructure
Q = Fraction


def test_initial_error_examples():
    assert initial_error(Problem(S.fully_antisymmetric(3), PowerDecay(1))) == pytest.approx(1 / 6, rel=1e-15)
    assert initial_error(Problem(S.fully_symmetric(5), PowerDecay(2))) == 1.0
    mixed = S(3, (Group((1, 2), "antisymmetric"),))
    assert initial_error(Problem(mixed, PowerDecay(1))) == pytest.approx(0.5, rel=1e-15)
    assert initial_error_sq(Problem(mixed, PowerDecay(1, mode="rational"))) == Q(1, 4)


def test_initial_error_matches_brute_force_max():
    mixed = S(3, (Group((1, 2), "antisymmetric"),))
    seq = PowerDecay(1, mode="rational")
    best = max(math.prod(seq.exact(m) for m in k) for k in
               __import__("symtract.enumeration", fromlist=["x"]).canonical_in_cube(mixed, 6))
    assert initial_error_sq(Problem(mixed, seq)) == best


def test_nth_minimal_error_examples():
    p = Problem(S.fully_antisymmetric(2), PowerDecay(1))
    assert nth_minimal_error(p, 0) == initial_error(p)
    assert nth_minimal_error(p, 1) == pytest.approx(1 / 3, rel=1e-15)
    assert nth_minimal_error(Problem(S.fully_antisymmetric(2), FiniteRank([1] * 4)), 6) == 0.0


def test_info_complexity_examples():
    assert info_complexity(Problem(S.entire(3), FiniteRank([1, 1])), 0.9) == 8
    assert info_complexity(Problem(S.fully_antisymmetric(3), FiniteRank([1, 1])), 0.5) == 0
    seq = PowerDecay(1, mode="rational")
    p = Problem(S.fully_antisymmetric(3), seq)
    n = info_complexity(p, Q(1, 2), Criterion.NORMALIZED)
    assert n >= 3
    assert n == brute_force_count(S.fully_antisymmetric(3), seq, Q(1, 12), 20)[0]


def test_normalized_requires_eps_below_one():
    with pytest.raises(ValueError):
        info_complexity(Problem(S.entire(2), PowerDecay(1)), 1.0, "normalized")
    with pytest.raises(ValueError):
        info_complexity(Problem(S.entire(2), PowerDecay(1)), 0.0)


def test_i_index_examples():
    assert i_index(PowerDecay(1), 2, 0.01) == 3
    assert i_index(PowerDecay(1), 3, 1.0) == 1
    assert i_index(FiniteRank([1, 1]), 2, 0.3) == 2
    with pytest.raises(NoFiniteIndex):
        i_index(ShiftedPower(0), 2, 0.5)


def test_i_index_relates_to_univariate_count():
    seq = PowerDecay(1)
    for delta_sq in (0.5, 0.1, 0.003):
        assert i_index(seq, 1, delta_sq) - 1 == count_above(S.entire(1), seq, math.sqrt(delta_sq))


def test_exact_recursion_examples():
    assert exact_antisymmetric_count(PowerDecay(1), 2, 0.1) == 10
    assert exact_antisymmetric_count(PowerDecay(1), 3, 1 / 6) == 0
    assert exact_antisymmetric_count(FiniteRank([1] * 4, mode="rational"), 3, Q(1, 2)) == 4
    assert exact_antisymmetric_count(PowerDecay(1), 1, 0.1) == count_above(S.entire(1), PowerDecay(1), 0.1)
    assert isinstance(exact_antisymmetric_count(ShiftedPower(0), 2, 0.5), InfiniteCount)


@given(st.integers(1, 5), st.sampled_from([0.5, 1.0, 2.0]), st.fractions(min_value=Q(1, 200), max_value=Q(1)))
def test_recursion_equals_count(d, alpha, eps):
    seq = PowerDecay(alpha, mode="rational")
    assert exact_antisymmetric_count(seq, d, eps) == count_above(S.fully_antisymmetric(d), seq, eps)


def test_closed_forms():
    assert closed_form_finite_rank(2, 5, "symmetric", 0.5) == 6
    assert closed_form_finite_rank(4, 2, "antisymmetric", 0.5) == 6
    assert closed_form_finite_rank(3, 3, "entire", 0.5) == 27
    assert closed_form_finite_rank(3, 4, "antisymmetric", 0.5) == 0
    with pytest.raises(ValueError):
        closed_form_finite_rank(3, 3, "entire", 1.0)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("d", [1, 2, 3, 4, 5])
def test_symmetric_closed_form_against_counting(m, d):
    seq = FiniteRank([1] * m, mode="rational")
    assert count_above(S.fully_symmetric(d), seq, Q(1, 2)) == closed_form_finite_rank(m, d, "symmetric", 0.5)


def test_binomial_growth_exhibited():
    m = 12
    for d in range(1, m // 2 + 1):
        n = count_above(S.fully_antisymmetric(d), FiniteRank([1] * m, mode="rational"), Q(1, 2))
        assert n >= 2 ** (d - 1)


@pytest.mark.parametrize("seq", [PowerDecay(1), PowerDecay(0.5), Geometric(0.6, 0.9)])
def test_complexity_error_duality(seq):
    p = Problem(S.fully_antisymmetric(2), seq)
    for n in (0, 1, 5, 20):
        e = nth_minimal_error(p, n)
        assert info_complexity(p, e) <= n
        assert info_complexity(p, e * (1 - 1e-9)) >= n + 1


@given(st.integers(1, 4), st.floats(0.05, 0.9))
def test_monotone_in_structure_and_eps(d, eps):
    seq = PowerDecay(1)
    a = count_above(S.fully_antisymmetric(d), seq, eps)
    s = count_above(S.fully_symmetric(d), seq, eps)
    e = count_above(S.entire(d), seq, eps)
    assert a <= s <= e
    assert count_above(S.entire(d), seq, eps * 1.1) <= e
