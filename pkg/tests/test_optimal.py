import math

import pytest

from symtract.complexity import Problem, initial_error, nth_minimal_error
from symtract.enumeration import SpectrumStream
from symtract.optimal import (apply_operator, apply_optimal, empirical_worst_case, eta_norm_check,
                              random_unit_elements, residual_error, verify_error_formula, witness)
from symtract.spectrum import FiniteRank, PowerDecay
from symtract.symmetry import Group, SymmetryStructure

S = SymmetryStructure
P_ASYM = Problem(S.fully_antisymmetric(2), PowerDecay(1))


def test_apply_optimal_examples():
    f = {(1, 2): 1.0, (1, 3): 0.5}
    assert apply_optimal(P_ASYM, f, 0) == {}
    top = witness(P_ASYM, 0)
    assert apply_optimal(P_ASYM, top, 1) == {(1, 2): pytest.approx(0.5)}
    assert apply_optimal(P_ASYM, {(5, 9): 1.0}, 3) == {}


def test_residual_error_examples():
    for n in range(4):
        assert residual_error(P_ASYM, witness(P_ASYM, n), n) == pytest.approx(nth_minimal_error(P_ASYM, n), rel=1e-15)
    f = next(random_unit_elements(P_ASYM, 0, 1, seed=3))
    assert residual_error(P_ASYM, f, 0) <= initial_error(P_ASYM) + 1e-15
    kept = {k: 0.6 for k, _ in SpectrumStream(P_ASYM.structure, P_ASYM.seq).take(2)}
    assert residual_error(P_ASYM, kept, 2) == 0.0


def test_rejects_non_canonical_support():
    with pytest.raises(ValueError):
        residual_error(P_ASYM, {(2, 1): 1.0}, 0)


def test_witness_examples():
    p = Problem(S.fully_antisymmetric(2), FiniteRank([1, 1]))
    assert residual_error(p, witness(p, 0), 0) == 1.0
    assert witness(p, 1) is None
    assert residual_error(P_ASYM, witness(P_ASYM, 1), 1) == pytest.approx(1 / 3)


@pytest.mark.parametrize("p", [P_ASYM, Problem(S.fully_symmetric(3), PowerDecay(0.5)),
                               Problem(S(3, (Group((2, 3), "antisymmetric"),)), PowerDecay(1))])
def test_pythagoras(p):
    for f in random_unit_elements(p, 4, 20, seed=1):
        full = apply_operator(p, f)
        kept = apply_optimal(p, f, 4)
        lhs = math.fsum(v * v for v in full.values())
        rhs = math.fsum(v * v for v in kept.values()) + residual_error(p, f, 4) ** 2
        assert abs(lhs - rhs) <= 1e-12 * lhs


def test_empirical_worst_case_is_deterministic_and_bounded(monkeypatch):
    a = empirical_worst_case(P_ASYM, 2, 300, seed=5)
    monkeypatch.setenv("SYMTRACT_THREADS", "4")
    b = empirical_worst_case(P_ASYM, 2, 300, seed=5)
    assert a == b
    assert a <= nth_minimal_error(P_ASYM, 2) + 1e-12
    with pytest.raises(ValueError):
        empirical_worst_case(P_ASYM, 2, 0)


def test_verify_error_formula():
    r = verify_error_formula(P_ASYM, 3, trials=200)
    assert r["bounded"] and r["attained"]


def test_xi_and_eta_representations_agree():
    p = Problem(S.fully_antisymmetric(3), PowerDecay(1))
    for f in random_unit_elements(p, 2, 5, seed=2):
        small = {k: c for k, c in f.items() if max(k) <= 6}
        assert eta_norm_check(p, small) <= 1e-14
