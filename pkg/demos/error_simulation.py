"""
Worst-case error of the optimal algorithm
=========================================

Random unit elements never beat the n-th minimal error, and the basis
element xi at position n+1 of the spectrum attains it exactly.
"""

from symtract import PowerDecay, SymmetryStructure
from symtract.complexity import Problem, nth_minimal_error
from symtract.optimal import empirical_worst_case, residual_error, witness

p = Problem(SymmetryStructure.fully_antisymmetric(3), PowerDecay(0.5))

for n in (0, 1, 5, 20):
    e = nth_minimal_error(p, n)
    emp = empirical_worst_case(p, n, trials=2000, seed=1)
    w = witness(p, n)
    print(f"n={n:3d}  e(n,d)={e:.5f}  random max={emp:.5f}  witness {next(iter(w))} -> "
          f"{residual_error(p, w, n):.5f}")
