"""Tractability of (anti-)symmetric tensor product problems.

A :class:`StructureSchedule` fixes the symmetry structure in every dimension
together with symbolic growth tags for the number of free coordinates
(``b_d``) and the size of the largest group (``a_d``). Verdicts are derived
from those tags and from analytic properties of the eigenvalue family; finite
samples are only used for the numeric side checks (sum conditions,
sufficient/necessary inequalities, exponent fits), never for a verdict.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Sequence

import numpy as np

from .complexity import Criterion
from .enumeration import SpectrumStream, spectral_sum
from .spectrum import EigenSequence, PowerDecay, find_tau_membership, to_fraction
from .symmetry import Kind, SymmetryStructure

DEFAULT_TAU_GRID = (0.25, 0.5, 1.0, 2.0, 4.0)

SPT = "StrongPolyTract"
PT_NOT_STRONG = "PolyTract-not-Strong"
INTRACTABLE = "PolyIntractable"
CURSE = "Curse"
INDETERMINATE = "Indeterminate"
VERDICTS = (SPT, PT_NOT_STRONG, INTRACTABLE, CURSE, INDETERMINATE)

# growth classes for b_d (free coordinates), ordered
FREE_ZERO, FREE_BOUNDED, FREE_LOG, FREE_LINEAR = "zero", "bounded", "log", "linear"
_FREE_ORDER = {FREE_ZERO: 0, FREE_BOUNDED: 1, FREE_LOG: 2, FREE_LINEAR: 3}
# growth classes for the largest group
GROUP_LINEAR, GROUP_SUBLINEAR, GROUP_LOG, GROUP_BOUNDED = "linear", "sublinear_superlog", "log_or_less", "bounded"


class UnknownAsymptotics(ValueError):
    pass


class DegenerateGrid(ValueError):
    pass


# ---------------------------------------------------------------------------
# schedules
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureSchedule:
    """Rule ``d -> SymmetryStructure`` plus its asymptotic tags.

    ``kind`` is the kind shared by all groups (``None`` when there are none).
    ``free_growth`` / ``group_growth`` may be ``None`` for custom rules, in
    which case :func:`classify` refuses to decide.
    """

    name: str
    rule: Callable[[int], SymmetryStructure] = field(compare=False, repr=False)
    kind: str | None
    free_growth: str | None
    group_growth: str | None
    params: dict = field(default_factory=dict, compare=False)

    def structure(self, d: int) -> SymmetryStructure:
        s = self.rule(d)
        if s.d != d:
            raise ValueError(f"schedule {self.name} produced dimension {s.d} for d={d}")
        return s

    def group_sizes(self, d: int) -> tuple:
        return tuple(a for a in self.structure(d).group_sizes if a > 1)

    def a(self, d: int) -> int:
        return sum(self.group_sizes(d))

    def b(self, d: int) -> int:
        return d - self.a(d)

    def describe(self) -> dict:
        return {"name": self.name, "kind": self.kind, "free_growth": self.free_growth,
                "group_growth": self.group_growth, **self.params}


def _blocks(sizes, kind, d):
    sizes = [a for a in sizes if a > 0]
    return SymmetryStructure.blocks_of(sizes, kind, free=d - sum(sizes))


def fully_symmetric() -> StructureSchedule:
    return StructureSchedule("fully_symmetric", SymmetryStructure.fully_symmetric,
                             "symmetric", FREE_ZERO, GROUP_LINEAR)


def fully_antisymmetric() -> StructureSchedule:
    return StructureSchedule("fully_antisymmetric", SymmetryStructure.fully_antisymmetric,
                             "antisymmetric", FREE_ZERO, GROUP_LINEAR)


def entire() -> StructureSchedule:
    return StructureSchedule("entire", SymmetryStructure.entire, None, FREE_LINEAR, None)


def fixed_free(b: int, kind: str = "antisymmetric") -> StructureSchedule:
    """``b`` free coordinates (fewer if d is smaller), one group for the rest."""
    kind = Kind(kind).value
    return StructureSchedule(f"fixed_free({b})", lambda d: _blocks([d - min(b, d)], kind, d),
                             kind, FREE_ZERO if b == 0 else FREE_BOUNDED, GROUP_LINEAR, {"b": b})


def log_free(c: float, kind: str = "antisymmetric") -> StructureSchedule:
    """``b_d = min(d, ceil(c ln d))`` free coordinates."""
    kind = Kind(kind).value

    def rule(d):
        b = min(d, math.ceil(c * math.log(d))) if d > 1 else 0
        return _blocks([d - b], kind, d)

    return StructureSchedule(f"log_free({c})", rule, kind, FREE_LOG, GROUP_LINEAR, {"c": c})


def grouped_wave() -> StructureSchedule:
    """Two antisymmetric groups of sizes ceil(d/2) and floor(d/2) (two spin species)."""
    return StructureSchedule("grouped_wave", lambda d: _blocks([(d + 1) // 2, d // 2], "antisymmetric", d),
                             "antisymmetric", FREE_ZERO, GROUP_LINEAR)


def fixed_group(a: int, kind: str = "antisymmetric") -> StructureSchedule:
    """One group of ``min(a, d)`` coordinates, the rest free."""
    kind = Kind(kind).value
    return StructureSchedule(f"fixed_group({a})", lambda d: _blocks([min(a, d)], kind, d),
                             kind, FREE_LINEAR, GROUP_BOUNDED, {"a": a})


def power_group(beta: float, kind: str = "antisymmetric") -> StructureSchedule:
    """One group of ``min(d, ceil(d**beta))`` coordinates."""
    kind = Kind(kind).value
    if beta <= 0:
        raise ValueError("beta must be positive")
    if beta >= 1:
        free, group = FREE_ZERO, GROUP_LINEAR
    else:
        free, group = FREE_LINEAR, GROUP_SUBLINEAR
    return StructureSchedule(f"power_group({beta})", lambda d: _blocks([min(d, math.ceil(d**beta))], kind, d),
                             kind, free, group, {"beta": beta})


def d_over_log_group(alpha: float, kind: str = "antisymmetric") -> StructureSchedule:
    """One group of ``min(d, ceil(d / (alpha ln d)))`` coordinates."""
    kind = Kind(kind).value
    if alpha <= 0:
        raise ValueError("alpha must be positive")

    def rule(d):
        a = d if d < 3 else min(d, math.ceil(d / (alpha * math.log(d))))
        return _blocks([a], kind, d)

    return StructureSchedule(f"d_over_log_group({alpha})", rule, kind, FREE_LINEAR, GROUP_SUBLINEAR,
                             {"alpha": alpha})


def custom(name: str, rule: Callable[[int], SymmetryStructure], kind=None,
           free_growth=None, group_growth=None) -> StructureSchedule:
    return StructureSchedule(name, rule, kind, free_growth, group_growth)


SCHEDULES = {
    "fully_symmetric": fully_symmetric,
    "fully_antisymmetric": fully_antisymmetric,
    "entire": entire,
    "fixed_free": fixed_free,
    "log_free": log_free,
    "grouped_wave": grouped_wave,
    "fixed_group": fixed_group,
    "power_group": power_group,
    "d_over_log_group": d_over_log_group,
}


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

@dataclass
class TractabilityReport:
    verdict: str
    criterion: str
    clause: str
    witnesses: dict = field(default_factory=dict)
    refutes: list = field(default_factory=list)
    evaluations: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, default=_jsonable)


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")


# ---------------------------------------------------------------------------
# sum conditions
# ---------------------------------------------------------------------------

@dataclass
class SumCondition:
    values: list  # (d, value, error)
    sup: float
    trend: str

    def per_d(self) -> list:
        return [v for _, v, _ in self.values]


def _trend(vals: Sequence[float]) -> str:
    if len(vals) < 2:
        return "bounded"
    diffs = np.diff(vals)
    if np.all(diffs < 0):
        return "decreasing"
    tail = diffs[len(diffs) // 2:]
    if np.all(tail > 0) and vals[-1] > 1.1 * vals[len(vals) // 2]:
        return "diverging"
    return "bounded"


def _f_value(f_rule, d):
    if f_rule is None:
        return 1
    return int(f_rule(d)) if callable(f_rule) else int(f_rule)


def _sum_condition(schedule, seq, tau, r, f_rule, d_range, normalized):
    rows = []
    for d in d_range:
        s = schedule.structure(d)
        total = spectral_sum(s, seq, tau, strict=True)
        drop = _f_value(f_rule, d) - 1
        top = SpectrumStream(s, seq).take(max(drop, 1))
        head = math.fsum(float(v) ** tau for _, v in top[:drop]) if drop > 0 else 0.0
        rest = max(float(total.value) - head, 0.0)
        err = float(total.error)
        if normalized:
            if not top:
                rows.append((d, 0.0, 0.0))
                continue
            scale = float(top[0][1]) ** tau
            rest, err = rest / scale, err / scale
        value = d ** (-r) * rest ** (1.0 / tau)
        # first-order propagation through x -> x^(1/tau)
        verr = d ** (-r) * ((rest + err) ** (1.0 / tau) - rest ** (1.0 / tau))
        rows.append((d, value, verr))
    vals = [v for _, v, _ in rows]
    return SumCondition(rows, max(vals) if vals else 0.0, _trend(vals))


def check_sum_condition_abs(schedule: StructureSchedule, seq: EigenSequence, tau: float, r: float = 0.0,
                            f_rule=None, d_range=range(1, 21)) -> SumCondition:
    """Per-d ``d^-r (sum_{i >= f(d)} lam_{d,psi(i)}^tau)^(1/tau)`` and its sup over ``d_range``."""
    if tau <= 0 or r < 0:
        raise ValueError("need tau > 0 and r >= 0")
    return _sum_condition(schedule, seq, tau, r, f_rule, d_range, False)


def check_sum_condition_norm(schedule: StructureSchedule, seq: EigenSequence, tau: float, r: float = 0.0,
                             f_rule=None, d_range=range(1, 21)) -> SumCondition:
    """As :func:`check_sum_condition_abs` with eigenvalues divided by the largest one."""
    if tau <= 0 or r < 0:
        raise ValueError("need tau > 0 and r >= 0")
    return _sum_condition(schedule, seq, tau, r, f_rule, d_range, True)


# ---------------------------------------------------------------------------
# antisymmetric sufficient / necessary conditions
# ---------------------------------------------------------------------------

@dataclass
class ConditionCheck:
    status: str  # holds | fails | shortcut | not_applicable
    d0: int | None = None
    rows: list = field(default_factory=list)  # (d, lhs, rhs, ok)


def _log_norm(seq, tau):
    ps = seq.power_sum(tau, strict=True)
    return math.log(float(ps.value))


def _d0(rows):
    d0 = None
    for d, _, _, ok in reversed(rows):
        if not ok:
            break
        d0 = d
    return d0


def sufficient_antisymmetric(schedule: StructureSchedule, seq: EigenSequence, tau: float,
                             d_range=range(1, 31)) -> ConditionCheck:
    """``(1/d) sum_m ln(a_{d,m}!) >= ln(||lam||_tau^tau)`` over ``d_range``.

    With several groups the left side sums over all of them. ``lam_1 < 1``
    makes the problem strongly tractable regardless, reported as "shortcut".
    """
    if seq.eigenvalue(1) < 1:
        return ConditionCheck("shortcut")
    rhs = _log_norm(seq, tau)
    rows = []
    for d in d_range:
        lhs = math.fsum(math.lgamma(a + 1) for a in schedule.group_sizes(d)) / d
        rows.append((d, lhs, rhs, lhs >= rhs))
    d0 = _d0(rows)
    return ConditionCheck("holds" if d0 is not None else "fails", d0, rows)


def necessary_antisymmetric_bound(schedule: StructureSchedule, seq: EigenSequence, tau: float, delta: float,
                                  d_range=range(1, 31)) -> ConditionCheck:
    """``ln(||lam||_tau^tau) - delta <= (1/d) sum_groups sum_{k<=a} ln(||lam||_tau^tau / lam_k^tau)``."""
    if delta <= 0:
        raise ValueError("delta must be positive")
    if seq.eigenvalue(1) < 1:
        return ConditionCheck("not_applicable")
    ln_norm = _log_norm(seq, tau)
    lhs = ln_norm - delta
    rows = []
    for d in d_range:
        terms = []
        for a in schedule.group_sizes(d):
            for k in range(1, a + 1):
                lv = seq.log_eigenvalue(k)
                terms.append(math.inf if lv == -math.inf else ln_norm - tau * lv)
        rhs = math.fsum(terms) / d if terms else 0.0
        rows.append((d, lhs, rhs, lhs <= rhs))
    d0 = _d0(rows)
    return ConditionCheck("holds" if d0 is not None else "fails", d0, rows)


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

def _tau_witness(seq, grid):
    tau = find_tau_membership(seq, grid)
    if tau is not None:
        return tau
    th = seq.l_tau_threshold()
    if th is None:
        return None
    t, inclusive = th
    return t if (inclusive and t > 0) else t + 1.0


def _at_most(growth, bound):
    return _FREE_ORDER[growth] <= _FREE_ORDER[bound]


def _report(verdict, criterion, clause, wit, **kw):
    return TractabilityReport(verdict, criterion.value, clause, wit, **kw)


def _symmetric_absolute(lam1, lam2, free, criterion, wit, normalized=False):
    """Decision tree for symmetric (or entire) structures given lam1 (1 when normalized)."""
    bounded = _at_most(free, FREE_BOUNDED)
    logarithmic = _at_most(free, FREE_LOG)
    pre = "normalized reduces to absolute on lam/lam_1; " if normalized else ""
    if lam1 < 1:
        return _report(SPT, criterion, pre + "symmetric absolute: lam_1 < 1 and lam in l_tau", wit)
    if lam1 == 1:
        if free == FREE_LINEAR and lam2 >= 1:
            return _report(CURSE, criterion,
                           pre + "lam_1 = lam_2 = 1 with linearly many free coordinates: n >= 2^b_d", wit)
        if lam2 < 1 and bounded:
            return _report(SPT, criterion, pre + "symmetric absolute: lam_1 = 1 > lam_2 and b_d in O(1)", wit)
        if logarithmic:
            why = "lam_2 = 1" if lam2 >= 1 else "b_d unbounded"
            return _report(PT_NOT_STRONG, criterion,
                           pre + f"symmetric absolute: lam_1 = 1 and b_d in O(ln d); not strong since {why}",
                           wit, refutes=[SPT])
        return _report(INTRACTABLE, criterion, pre + "symmetric absolute: lam_1 = 1 needs b_d in O(ln d)", wit,
                       refutes=[SPT, PT_NOT_STRONG])
    # lam_1 > 1: only necessary conditions are available
    if free == FREE_LINEAR and lam2 >= 1:
        return _report(CURSE, criterion, "lam_1 > 1, lam_2 >= 1 with linearly many free coordinates: n >= 2^b_d",
                       wit)
    if not logarithmic:
        return _report(INTRACTABLE, criterion, "symmetric necessary condition: lam_1 >= 1 needs b_d in O(ln d)", wit,
                       refutes=[SPT, PT_NOT_STRONG])
    refutes = [SPT] if (not bounded or lam2 >= 1 / lam1) else []
    return _report(INDETERMINATE, criterion,
                   "symmetric absolute with lam_1 > 1 is not characterized; only necessary conditions checked",
                   wit, refutes=refutes)


def classify(schedule: StructureSchedule, seq: EigenSequence, criterion=Criterion.ABSOLUTE,
             tau_grid: Sequence[float] = DEFAULT_TAU_GRID, d_range=range(1, 31)) -> TractabilityReport:
    """Tractability verdict for the family of problems ``(schedule(d), seq)``."""
    criterion = Criterion(criterion)
    if schedule.free_growth is None or (schedule.kind is not None and schedule.group_growth is None):
        raise UnknownAsymptotics(f"schedule {schedule.name} carries no growth tags for b_d / a_d")
    if schedule.kind not in (None, "symmetric", "antisymmetric"):
        raise UnknownAsymptotics(f"schedule {schedule.name} mixes group kinds")

    lam1, lam2 = seq.eigenvalue(1), seq.eigenvalue(2)
    tau = _tau_witness(seq, tau_grid)
    wit = {"schedule": schedule.describe(), "sequence": repr(seq), "lambda_1": lam1, "lambda_2": lam2,
           "tau": tau, "tau_grid": list(tau_grid)}
    if tau is not None:
        wit["norm_tau"] = float(seq.power_sum(tau).value) ** (1.0 / tau)

    if lam2 == 0:
        return _report(SPT, criterion, "lam_2 = 0: every problem is solved with at most one functional", wit)
    if tau is None:
        return _report(INTRACTABLE, criterion, "lam lies in no l_tau: polynomial tractability needs some l_tau",
                       wit, refutes=[SPT, PT_NOT_STRONG])

    free = schedule.free_growth
    if schedule.kind in (None, "symmetric"):
        if criterion is Criterion.ABSOLUTE:
            return _symmetric_absolute(lam1, lam2, free, criterion, wit)
        return _symmetric_absolute(1.0, lam2 / lam1, free, criterion, wit, normalized=True)

    # antisymmetric groups
    if criterion is Criterion.ABSOLUTE:
        if lam1 < 1:
            return _report(SPT, criterion, "antisymmetric absolute: lam_1 < 1 and lam in l_tau", wit)
        if schedule.group_growth == GROUP_LINEAR:
            return _report(SPT, criterion,
                           "antisymmetric absolute: group size grows linearly, so SPT iff lam in some l_tau", wit)
        if schedule.group_growth == GROUP_BOUNDED:
            return _report(INTRACTABLE, criterion,
                           "antisymmetric necessary condition: lam_1 >= 1 needs a_d -> infinity", wit,
                           refutes=[SPT, PT_NOT_STRONG])
        suf = sufficient_antisymmetric(schedule, seq, tau, d_range)
        nec = necessary_antisymmetric_bound(schedule, seq, tau, 0.05, d_range)
        return _report(INDETERMINATE, criterion,
                       "antisymmetric absolute, lam_1 >= 1, sublinear a_d: gap between necessary and sufficient "
                       "conditions", wit,
                       evaluations={"sufficient": asdict(suf), "necessary": asdict(nec)})

    # antisymmetric, normalized
    if free == FREE_LINEAR:
        return _report(INTRACTABLE, criterion, "antisymmetric normalized necessary condition: b_d in O(ln d)", wit,
                       refutes=[SPT, PT_NOT_STRONG])
    support = seq.positive_count()
    if support < math.inf and schedule.group_growth == GROUP_LINEAR:
        return _report(SPT, criterion,
                       f"finite rank {int(support)}: groups eventually exceed the rank and the problem is trivial",
                       wit)
    refutes = []
    reasons = []
    if free != FREE_ZERO and free != FREE_BOUNDED:
        refutes.append(SPT)
        reasons.append("b_d unbounded rules out SPT")
    if isinstance(seq, PowerDecay) and schedule.group_growth == GROUP_LINEAR:
        if SPT not in refutes:
            refutes.append(SPT)
        reasons.append("power decay: n(eps' eps_init, d) >= d((eps')^(-1/alpha) - 1) rules out SPT")
    clause = "antisymmetric normalized: only necessary conditions known"
    if reasons:
        clause += "; " + "; ".join(reasons)
    return _report(INDETERMINATE, criterion, clause, wit, refutes=refutes)


# ---------------------------------------------------------------------------
# appendix inequality and exponent fits
# ---------------------------------------------------------------------------

def _h(mu: Sequence[Fraction], length: int, start: int) -> Fraction:
    """Sum over non-decreasing index tuples of the given length, indices >= start (1-based)."""
    vals = mu[start - 1:]
    if length == 0:
        return Fraction(1)
    total = Fraction(0)
    for combo in combinations_with_replacement(vals, length):
        p = Fraction(1)
        for v in combo:
            p *= v
        total += p
    return total


def verify_appendix_inequality(mu: Sequence, d: int, V: int) -> dict:
    """Both sides of the estimate for the complete homogeneous sum of a finite ``mu``.

    LHS: sum over ``1 <= k_1 <= ... <= k_d`` of ``prod mu_k``.
    RHS: ``mu_1^d d^V (1 + V + sum_{L=1}^d mu_1^-L * sum_{V+2 <= j_1 <= ... <= j_L} prod mu_j)``.
    Everything is computed exactly with fractions.
    """
    mu = [to_fraction(x) for x in mu]
    if not mu or mu[0] <= 0:
        raise ValueError("mu_1 must be positive")
    if any(x < 0 for x in mu) or any(b > a for a, b in zip(mu, mu[1:])):
        raise ValueError("mu must be non-negative and non-increasing")
    if d < 1 or V < 0:
        raise ValueError("need d >= 1 and V >= 0")
    lhs = _h(mu, d, 1)
    inner = Fraction(1 + V)
    for L in range(1, d + 1):
        inner += _h(mu, L, V + 2) / mu[0] ** L
    rhs = mu[0] ** d * d**V * inner
    return {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs, "equal": lhs == rhs}


@dataclass
class ExponentFit:
    p: float
    q: float
    C: float
    residual: float
    polynomial: bool


def fit_exponents(grid: Sequence[tuple], tol: float = 0.05) -> ExponentFit:
    """Least squares ``ln n = ln C + p ln(1/eps) + q ln d`` over ``(eps, d, n)`` rows.

    ``residual`` is the RMS misfit in log space; ``polynomial`` is False when it
    exceeds ``tol``. Advisory only.
    """
    rows = [(float(e), float(d), float(n)) for e, d, n in grid]
    if any(n < 1 for _, _, n in rows):
        raise ValueError("every grid entry needs n >= 1")
    X = np.array([[1.0, math.log(1 / e), math.log(d)] for e, d, _ in rows])
    y = np.array([math.log(n) for _, _, n in rows])
    if np.linalg.matrix_rank(X) < 3:
        raise DegenerateGrid("grid needs at least two eps values and two dimensions")
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    return ExponentFit(p=float(coef[1]), q=float(coef[2]), C=float(math.exp(coef[0])),
                       residual=rms, polynomial=rms <= tol)
