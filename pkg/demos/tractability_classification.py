"""
Tractability verdicts for a few eigenvalue families
===================================================

The classifier walks the decision trees for symmetric and antisymmetric
families and reports the clause that decided the verdict.
"""

from symtract import tractability as tr
from symtract.spectrum import FiniteRank, LogDecay, PowerDecay, ShiftedPower

families = {"two ones": FiniteRank([1, 1]), "shifted power": ShiftedPower(1.0),
            "log decay": LogDecay(), "power decay": PowerDecay(1.0)}
schedules = [tr.entire(), tr.fully_symmetric(), tr.fully_antisymmetric()]

for fname, seq in families.items():
    for sched in schedules:
        for crit in ("absolute", "normalized"):
            rep = tr.classify(sched, seq, crit)
            print(f"{fname:14s} {sched.name:20s} {crit:10s} {rep.verdict}")

# A sum-condition trend: antisymmetric power decay has a sum over the
# spectrum that shrinks rapidly with d.
res = tr.check_sum_condition_abs(tr.fully_antisymmetric(), PowerDecay(1.0), 1.0, d_range=range(2, 11))
print(res.trend, [f"{v:.2e}" for v in res.per_d()])

# Exponent fit on measured complexities of the symmetric problem.
from symtract import SymmetryStructure, count_above  # noqa: E402

grid = [(e, d, count_above(SymmetryStructure.fully_symmetric(d), ShiftedPower(1.0), e))
        for e in (0.5, 0.3, 0.2) for d in (2, 4, 8, 16)]
fit = tr.fit_exponents([g for g in grid if g[2] >= 1])
print(f"n ~ {fit.C:.2f} eps^-{fit.p:.2f} d^{fit.q:.2f}  (rms {fit.residual:.3f})")
