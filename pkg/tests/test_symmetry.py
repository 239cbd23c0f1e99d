import math
from fractions import Fraction
from itertools import permutations, product

import pytest
from hypothesis import given, strategies as st

from symtract.symmetry import (Group, InvalidCanonicalIndex, Kind, SymmetryStructure, inner, multiplicity_vector,
                               norm_sq, parity, project, xi_expansion, xi_expansion_exact)

ANTI2 = SymmetryStructure.fully_antisymmetric(2)
SYM2 = SymmetryStructure.fully_symmetric(2)


def _parity_by_swaps(images):
    # oracle: count transpositions needed to sort
    arr, swaps = list(images), 0
    for i in range(len(arr)):
        while arr[i] != sorted(images)[i]:
            j = sorted(images).index(arr[i])
            arr[i], arr[j] = arr[j], arr[i]
            swaps += 1
    return -1 if swaps % 2 else 1


def test_parity_examples():
    assert parity((1, 2, 3)) == 1
    assert parity((2, 1, 3)) == -1
    assert parity((2, 3, 1)) == 1
    assert parity({1: 2, 2: 3, 3: 1}) == 1
    with pytest.raises(ValueError):
        parity((1, 1, 2))


@given(st.permutations(list(range(1, 7))))
def test_parity_matches_transposition_count(p):
    assert parity(tuple(p)) == _parity_by_swaps(p)


def test_multiplicity_vector_examples():
    s = SymmetryStructure(7, (Group(range(1, 7), "symmetric"),))
    assert multiplicity_vector(s, 0, (12, 4, 4, 12, 6, 4, 4)) == (3, 2, 1, 0, 0, 0)
    assert multiplicity_vector(s, 0, (1, 2, 3, 4, 5, 6, 9)) == (1,) * 6
    assert multiplicity_vector(s, 0, (5,) * 7) == (6, 0, 0, 0, 0, 0)


@given(st.lists(st.integers(1, 4), min_size=4, max_size=4), st.permutations([0, 1, 2, 3]))
def test_multiplicity_vector_permutation_invariant(j, p):
    s = SymmetryStructure.fully_symmetric(4)
    assert multiplicity_vector(s, 0, tuple(j)) == multiplicity_vector(s, 0, tuple(j[i] for i in p))


def test_project_examples():
    assert project(ANTI2, 0, {(1, 1): 1}) == {}
    assert project(ANTI2, 0, {(1, 2): 1}) == {(1, 2): Fraction(1, 2), (2, 1): Fraction(-1, 2)}
    f = {(1, 2): 1, (2, 1): 3}
    once = project(SYM2, 0, f)
    assert once == {(1, 2): 2, (2, 1): 2}
    assert project(SYM2, 0, once) == once


def test_project_kind_override():
    assert project(SYM2, 0, {(1, 2): 1}, kind="antisymmetric") == project(ANTI2, 0, {(1, 2): 1})


def test_xi_expansion_examples():
    xi = xi_expansion(ANTI2, (1, 2))
    assert xi[(1, 2)] == pytest.approx(1 / math.sqrt(2))
    assert xi[(2, 1)] == pytest.approx(-1 / math.sqrt(2))
    assert xi_expansion(SYM2, (1, 1)) == {(1, 1): 1.0}
    free = SymmetryStructure(3, (Group((1,), "symmetric"), Group((2,), "antisymmetric")))
    assert xi_expansion(free, (4, 2, 7)) == {(4, 2, 7): 1.0}


def test_invalid_canonical_index():
    with pytest.raises(InvalidCanonicalIndex):
        xi_expansion(ANTI2, (2, 1))
    with pytest.raises(InvalidCanonicalIndex):
        xi_expansion(ANTI2, (1, 1))
    with pytest.raises(InvalidCanonicalIndex):
        xi_expansion(SYM2, (2, 1))


def test_structure_validation():
    with pytest.raises(ValueError):
        SymmetryStructure(3, (Group((1, 2), "symmetric"), Group((2, 3), "symmetric")))
    with pytest.raises(ValueError):
        SymmetryStructure(2, (Group((1, 3), "symmetric"),))
    s = SymmetryStructure.blocks_of([2, 2], "antisymmetric", free=1)
    assert s.d == 5 and s.b == 1 and s.group_sizes == (2, 2)


def _canonical(structure, top):
    return [k for k in product(range(1, top + 1), repeat=structure.d) if structure.is_canonical(k)]


STRUCTURES = [
    SymmetryStructure.fully_antisymmetric(3),
    SymmetryStructure.fully_symmetric(3),
    SymmetryStructure(3, (Group((1, 3), "antisymmetric"),)),
    SymmetryStructure(4, (Group((1, 2), "symmetric"), Group((3, 4), "antisymmetric"))),
]


@pytest.mark.parametrize("structure", STRUCTURES)
def test_xi_orthonormal_exact(structure):
    top = 4 if structure.d == 3 else 3
    ks = _canonical(structure, top)
    exp = {k: xi_expansion_exact(structure, k) for k in ks}
    for a in ks:
        fa, ca = exp[a]
        assert fa * inner(ca, ca) == 1
        for b in ks:
            if a < b:
                assert inner(ca, exp[b][1]) == 0


@given(st.dictionaries(st.tuples(st.integers(1, 3), st.integers(1, 3), st.integers(1, 3)),
                       st.integers(-5, 5), max_size=6),
       st.sampled_from(["symmetric", "antisymmetric"]))
def test_projection_idempotent_and_contractive(coeffs, kind):
    s = SymmetryStructure(3, (Group((1, 2, 3), kind),))
    f = {j: Fraction(c) for j, c in coeffs.items()}
    once = project(s, 0, f)
    assert project(s, 0, once) == once
    assert norm_sq(once) <= norm_sq(f)


@given(st.dictionaries(st.tuples(st.integers(1, 3), st.integers(1, 3)), st.floats(-3, 3), max_size=5))
def test_float_projection_idempotent(coeffs):
    once = project(ANTI2, 0, coeffs)
    twice = project(ANTI2, 0, once)
    for j in set(once) | set(twice):
        assert abs(once.get(j, 0.0) - twice.get(j, 0.0)) <= 1e-14 * (1 + abs(once.get(j, 0.0)))


@given(st.lists(st.integers(1, 4), min_size=3, max_size=3))
def test_antisymmetrizer_annihilates_repeats(j):
    s = SymmetryStructure.fully_antisymmetric(3)
    out = project(s, 0, {tuple(j): Fraction(1)})
    assert (out == {}) == (len(set(j)) < 3)


def test_diagonal_map_commutes_with_projection():
    # scaling by sqrt(lam_{d,j}) is permutation invariant, so it commutes with P
    lam = {1: Fraction(1), 2: Fraction(1, 4), 3: Fraction(1, 9)}
    s = SymmetryStructure(3, (Group((1, 2), "antisymmetric"),))
    f = {(1, 2, 3): Fraction(2), (3, 1, 1): Fraction(-1), (2, 2, 1): Fraction(5)}

    def scale(c):
        return {j: v * lam[j[0]] * lam[j[1]] * lam[j[2]] for j, v in c.items()}

    assert scale(project(s, 0, f)) == project(s, 0, scale(f))


def test_kind_enum_roundtrip():
    assert Kind("symmetric") is Kind.SYMMETRIC
    perms = list(permutations(range(3)))
    assert sum(parity(p) for p in perms) == 0
