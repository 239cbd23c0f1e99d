"""
Antisymmetric complexity for power-law eigenvalues
==================================================

For lam_m = m^(-2 alpha) we compare the best-first stream, the
threshold count and the exact recursion over the pivot index i_d.
"""

import numpy as np

from symtract import PowerDecay, SymmetryStructure, SpectrumStream, count_above, exact_antisymmetric_count
from symtract.complexity import Criterion, Problem, info_complexity, initial_error

seq = PowerDecay(1.0)
s = SymmetryStructure.fully_antisymmetric(3)

# the six largest eigenvalues of the 3-fold antisymmetric problem
for k, lam in SpectrumStream(s, seq).take(6):
    print(k, lam)

# the counting and the recursion agree for every threshold
for eps in np.geomspace(0.1, 0.001, 5):
    a = count_above(s, seq, eps)
    b = exact_antisymmetric_count(seq, 3, eps)
    print(f"eps={eps:.4f}  count={a}  recursion={b}")
    assert a == b

# Normalized criterion: reducing the initial error by eps' costs at
# least d((eps')^(-1/alpha) - 1) functionals, linear in d.
for d in range(2, 7):
    p = Problem(SymmetryStructure.fully_antisymmetric(d), seq)
    n = info_complexity(p, 0.5, Criterion.NORMALIZED)
    print(f"d={d}  init={initial_error(p):.3e}  n(0.5 init)={n}  bound={d * (0.5 ** -1 - 1):.0f}")
