"""
Counting eigenvalues of finite-rank tensor problems
===================================================

With m unit eigenvalues every product eigenvalue equals 1, so the
information complexity for eps < 1 just counts admissible multi-indices:
m^d for the full tensor product, binomial(m+d-1, d) for symmetric
functions and binomial(m, d) for antisymmetric ones.
"""

from fractions import Fraction

from symtract import FiniteRank, SymmetryStructure, count_above, closed_form_finite_rank

m = 3
seq = FiniteRank([1] * m, mode="rational")
eps = Fraction(1, 2)

print(f"{'d':>3} {'entire':>8} {'sym':>6} {'asym':>6}")
for d in range(1, 8):
    row = [count_above(mk(d), seq, eps) for mk in
           (SymmetryStructure.entire, SymmetryStructure.fully_symmetric, SymmetryStructure.fully_antisymmetric)]
    print(f"{d:>3} {row[0]:>8} {row[1]:>6} {row[2]:>6}")
    # the closed forms agree with the counts
    assert row == [closed_form_finite_rank(m, d, k, eps) for k in ("entire", "symmetric", "antisymmetric")]

# The entire count grows like 3^d, the symmetric one only polynomially,
# and the antisymmetric one vanishes once d exceeds the rank.
