"""Errors and information complexity of (anti-)symmetric tensor product problems.

Everything is expressed through the spectrum: the n-th minimal worst-case
error is the square root of the (n+1)-th largest eigenvalue on the canonical
index set, and the information complexity counts eigenvalues strictly above
``eps^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from .enumeration import (DEFAULT_HORIZON, CountResult, InfiniteCount, SpectrumStream,
                          count_in_domain)
from .spectrum import EigenSequence
from .symmetry import Kind, SymmetryStructure


class Criterion(str, Enum):
    ABSOLUTE = "absolute"
    NORMALIZED = "normalized"


class NoFiniteIndex(ArithmeticError):
    pass


@dataclass(frozen=True)
class Problem:
    structure: SymmetryStructure
    seq: EigenSequence

    @property
    def d(self) -> int:
        return self.structure.d


# ---------------------------------------------------------------------------
# errors
# ---------------------------------------------------------------------------

def _largest(p: Problem):
    """``lam_{d,psi(1)}`` as an element of the sequence's arithmetic domain."""
    dom = p.seq.domain()
    v = dom.one
    for kind, idx in p.structure.blocks():
        a = len(idx)
        if kind == Kind.ANTISYMMETRIC:
            for m in range(1, a + 1):
                v = dom.mul(v, dom.lam(m))
        else:
            v = dom.mul(v, dom.power(dom.lam(1), a))
    return dom, v


def initial_error_sq(p: Problem):
    """Largest eigenvalue; exact ``Fraction`` in rational mode."""
    dom, v = _largest(p)
    return v if dom.exact else dom.to_float(v)


def initial_error(p: Problem) -> float:
    dom, v = _largest(p)
    if dom.exact:
        return math.sqrt(v)
    return 0.0 if dom.is_zero(v) else math.exp(0.5 * v)


def nth_minimal_error(p: Problem, n: int) -> float:
    """``e(n, d) = sqrt(lam_{d,psi(n+1)})``; zero once the positive spectrum runs out."""
    if n < 0:
        raise ValueError("n must be non-negative")
    items = SpectrumStream(p.structure, p.seq).take(n + 1)
    if len(items) <= n:
        return 0.0
    return math.sqrt(items[n][1])


# ---------------------------------------------------------------------------
# information complexity
# ---------------------------------------------------------------------------

def _threshold(p: Problem, eps, criterion):
    criterion = Criterion(criterion)
    if not eps > 0:
        raise ValueError("eps must be positive")
    dom = p.seq.domain()
    thr = dom.threshold(eps)
    if criterion is Criterion.NORMALIZED:
        if not eps < 1:
            raise ValueError("normalized criterion needs eps < 1")
        _, init = _largest(p)
        # shares the domain's lam cache, so reuse one domain object
        thr = dom.mul(thr, init)
    return dom, thr


def info_complexity_detailed(p: Problem, eps, criterion=Criterion.ABSOLUTE,
                             horizon: int = DEFAULT_HORIZON) -> CountResult:
    dom, thr = _threshold(p, eps, criterion)
    return count_in_domain(p.structure, p.seq, dom, thr, horizon)


def info_complexity(p: Problem, eps, criterion=Criterion.ABSOLUTE, horizon: int = DEFAULT_HORIZON):
    """``n(eps, d)``; normalized thresholds are ``eps * initial_error``."""
    return info_complexity_detailed(p, eps, criterion, horizon).count


# ---------------------------------------------------------------------------
# the fully antisymmetric recursion
# ---------------------------------------------------------------------------

def _consecutive(dom, i, j):
    v = dom.one
    for m in range(i, i + j):
        v = dom.mul(v, dom.lam(m))
        if dom.is_zero(v):
            break
    return v


def _i_index(seq, dom, j, thr, horizon):
    """Smallest i with ``lam_i ... lam_{i+j-1} <= thr`` (thr in ``dom``)."""
    if not dom.greater(_consecutive(dom, 1, j), thr):
        return 1
    lim = seq.limit()
    if lim > 0 and dom.greater(dom.power(dom.from_value(lim), j), thr):
        raise NoFiniteIndex(f"products of {j} consecutive eigenvalues stay above the threshold")
    good, step = 1, 1
    while True:
        probe = good + step
        if probe > horizon:
            raise NoFiniteIndex(f"no index up to {horizon} brings the product below the threshold")
        if dom.greater(_consecutive(dom, probe, j), thr):
            good = probe
            step *= 2
        else:
            bad = probe
            break
    while bad - good > 1:
        mid = (good + bad) // 2
        if dom.greater(_consecutive(dom, mid, j), thr):
            good = mid
        else:
            bad = mid
    return bad


def i_index(seq: EigenSequence, d: int, delta_sq, horizon: int = DEFAULT_HORIZON) -> int:
    """``min{i : lam_i * ... * lam_{i+d-1} <= delta_sq}``."""
    if d < 1:
        raise ValueError("d must be positive")
    if not delta_sq > 0:
        raise ValueError("delta_sq must be positive")
    dom = seq.domain()
    return _i_index(seq, dom, d, dom.from_value(delta_sq), horizon)


def exact_antisymmetric_count_detailed(seq: EigenSequence, d: int, eps,
                                       horizon: int = DEFAULT_HORIZON) -> CountResult:
    """Count strictly increasing k with ``prod lam_{k_l} > eps^2`` by nested sums.

    The first coordinate runs up to ``i_d(eps^2) - 1``, beyond which even the
    best completion (consecutive indices) fails; the remaining ``d - 1``
    coordinates are counted recursively with the threshold divided by
    ``lam_{k_1}``. Depth one is the univariate count ``i_1 - 1``.
    """
    if d < 1:
        raise ValueError("d must be positive")
    if not eps > 0:
        raise ValueError("eps must be positive")
    dom = seq.domain()
    ties0 = dom.ties

    @lru_cache(maxsize=None)
    def count(j, thr, lo):
        # #{lo <= k_1 < ... < k_j : prod lam_k > thr}
        top = _i_index(seq, dom, j, thr, horizon) - 1
        if j == 1:
            return max(0, top - lo + 1)
        return sum(count(j - 1, dom.div(thr, dom.lam(k)), k + 1) for k in range(lo, top + 1))

    try:
        n = count(d, dom.threshold(eps), 1)
    except NoFiniteIndex as exc:
        return CountResult(InfiniteCount(str(exc)), dom.ties - ties0)
    return CountResult(n, dom.ties - ties0)


def exact_antisymmetric_count(seq: EigenSequence, d: int, eps, horizon: int = DEFAULT_HORIZON):
    return exact_antisymmetric_count_detailed(seq, d, eps, horizon).count


# ---------------------------------------------------------------------------
# closed forms for finite rank with unit eigenvalues
# ---------------------------------------------------------------------------

def closed_form_finite_rank(m: int, d: int, kind: str, eps) -> int:
    """Complexity for ``m`` unit eigenvalues and ``eps < 1``.

    ``kind`` is ``"entire"``, ``"antisymmetric"`` or ``"symmetric"``.
    """
    if not 0 < eps < 1:
        raise ValueError("closed forms need 0 < eps < 1")
    if m < 0 or d < 1:
        raise ValueError("need m >= 0 and d >= 1")
    if kind == "entire":
        return m**d
    if kind == Kind.ANTISYMMETRIC or kind == "antisymmetric":
        return math.comb(m, d)
    if kind == Kind.SYMMETRIC or kind == "symmetric":
        return math.comb(m + d - 1, d) if m else 0
    raise ValueError(f"unknown kind {kind!r}")
