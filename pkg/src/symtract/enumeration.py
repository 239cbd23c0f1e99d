"""Ordered enumeration and counting of the eigenvalues ``lam_{d,k} = prod lam_{k_l}``
over canonical indices, plus brute-force oracles and spectral sums.

Canonical indices are handled block by block (see
:meth:`SymmetryStructure.blocks`). Inside a block the index is encoded by
non-negative "gaps":

* symmetric:      k_1 = 1 + g_1,  k_i = k_{i-1} + g_i
* antisymmetric:  k_1 = 1 + g_1,  k_i = k_{i-1} + 1 + g_i
* free:           k_i = 1 + g_i

Every canonical index corresponds to exactly one gap vector, and raising any
gap can only lower the eigenvalue. That monotonicity drives both the
best-first stream and the pruning in the counter.
"""

from __future__ import annotations

import heapq
import math
from fractions import Fraction
from itertools import combinations, combinations_with_replacement, product
from typing import Iterator, NamedTuple

import numpy as np

from .spectrum import RATIONAL, DivergenceSignal, EigenSequence, PowerSum
from .symmetry import Kind, SymmetryStructure

DEFAULT_HORIZON = 10**6
HEAD_TERMS = 2048


class InfiniteCount(float):
    """``inf`` that remembers why the count is infinite."""

    def __new__(cls, reason: str = ""):
        obj = super().__new__(cls, math.inf)
        obj.reason = reason
        return obj

    def __repr__(self):
        return f"InfiniteCount({self.reason!r})"


def _kind(kind) -> str:
    return kind.value if isinstance(kind, Kind) else kind


def _layout(structure: SymmetryStructure):
    """``[(kind, positions)]`` with 0-based positions into k."""
    return [(_kind(kind), tuple(i - 1 for i in idx)) for kind, idx in structure.blocks()]


# ---------------------------------------------------------------------------
# best-first stream
# ---------------------------------------------------------------------------

class SpectrumStream:
    """Iterator over ``(k, lam_{d,k})`` in non-increasing order of the value.

    Equal values come out with the lexicographically smallest ``k`` first.
    Zero eigenvalues are never emitted. Values are ``Fraction`` in rational
    mode and ``float`` otherwise.
    """

    def __init__(self, structure: SymmetryStructure, seq: EigenSequence):
        self.structure = structure
        self.seq = seq
        self.dom = seq.domain()
        self._layout = _layout(structure)
        self._heap: list = []
        self.emitted = 0
        root = (0,) * structure.d
        self._push(root, -1)

    def _index(self, gaps) -> tuple:
        k = [0] * self.structure.d
        pos = 0
        for kind, positions in self._layout:
            prev = 0 if kind == "antisymmetric" else 1
            for p in positions:
                g = gaps[pos]
                pos += 1
                if kind == "free":
                    k[p] = 1 + g
                elif kind == "symmetric":
                    prev = prev + g
                    k[p] = prev
                else:
                    prev = prev + 1 + g
                    k[p] = prev
        return tuple(k)

    def _value(self, k):
        dom = self.dom
        v = dom.one
        for m in k:
            v = dom.mul(v, dom.lam(m))
            if dom.is_zero(v):
                break
        return v

    def _push(self, gaps, last):
        k = self._index(gaps)
        v = self._value(k)
        if self.dom.is_zero(v):
            # every descendant is zero as well
            return
        heapq.heappush(self._heap, (self.dom.sort_key(v), k, gaps, last, v))

    def __iter__(self) -> Iterator:
        return self

    def __next__(self):
        if not self._heap:
            raise StopIteration
        _, k, gaps, last, v = heapq.heappop(self._heap)
        # children raise one gap at or after the last nonzero one, so every
        # gap vector has exactly one parent
        for q in range(max(last, 0), len(gaps)):
            child = gaps[:q] + (gaps[q] + 1,) + gaps[q + 1:]
            self._push(child, q)
        self.emitted += 1
        return k, self._out(v)

    def _out(self, v):
        return v if self.dom.exact else self.dom.to_float(v)

    def take(self, n: int) -> list:
        out = []
        for _ in range(n):
            try:
                out.append(next(self))
            except StopIteration:
                break
        return out


def top_eigenvalues(structure: SymmetryStructure, seq: EigenSequence, n: int) -> list:
    """The ``n`` largest eigenvalues with their canonical indices."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return SpectrumStream(structure, seq).take(n)


# ---------------------------------------------------------------------------
# pruned counting
# ---------------------------------------------------------------------------

class CountResult(NamedTuple):
    count: int | float
    ties: int


def _block_max(dom, kind, size):
    if kind == "antisymmetric":
        v = dom.one
        for m in range(1, size + 1):
            v = dom.mul(v, dom.lam(m))
        return v
    return dom.power(dom.lam(1), size)


def count_in_domain(structure: SymmetryStructure, seq: EigenSequence, dom, thr,
                    horizon: int = DEFAULT_HORIZON) -> CountResult:
    """Count canonical k with ``lam_{d,k} > thr``; ``thr`` lives in ``dom``.

    Free coordinates are interchangeable, so a free block is enumerated as a
    non-decreasing tuple and weighted by the number of its distinct
    orderings (a multinomial coefficient).
    """
    layout = _layout(structure)
    nb = len(layout)
    later = [dom.one] * (nb + 1)
    for b in range(nb - 1, -1, -1):
        kind, pos = layout[b]
        later[b] = dom.mul(_block_max(dom, kind, len(pos)), later[b + 1])
    ties0 = dom.ties
    if not dom.greater(later[0], thr):
        return CountResult(0, dom.ties - ties0)

    lim = seq.limit()
    lim_el = dom.from_value(lim) if lim > 0 else dom.zero

    def completion(kind, k, r):
        # best product of r remaining block positions, the first set to k
        if kind != "antisymmetric":
            return dom.power(dom.lam(k), r)
        v = dom.one
        for j in range(r):
            v = dom.mul(v, dom.lam(k + j))
            if dom.is_zero(v):
                break
        return v

    class _Infinite(Exception):
        pass

    def leaf(prefix, lo):
        # number of k >= lo with prefix * lam_k > thr
        if not dom.greater(dom.mul(prefix, dom.lam(lo)), thr):
            return 0
        step, good = 1, lo
        while True:
            probe = lo + step
            if probe > horizon:
                raise _Infinite(f"values stay above the threshold up to index {horizon}")
            if dom.greater(dom.mul(prefix, dom.lam(probe)), thr):
                good = probe
                step *= 2
            else:
                bad = probe
                break
        while bad - good > 1:
            mid = (good + bad) // 2
            if dom.greater(dom.mul(prefix, dom.lam(mid)), thr):
                good = mid
            else:
                bad = mid
        return good - lo + 1

    def orderings(size, denom, run):
        return math.factorial(size) // (denom * math.factorial(run))

    def rec(b, i, prefix, prev, denom, run):
        # denom/run track repeated values inside a free block
        kind, pos = layout[b]
        size = len(pos)
        r = size - i
        tail = later[b + 1]
        if not dom.is_zero(lim_el):
            if dom.greater(dom.mul(dom.mul(prefix, dom.power(lim_el, r)), tail), thr):
                raise _Infinite("eigenvalues do not decay below the threshold (positive limit)")
        if i == 0:
            lo = 1
        else:
            lo = prev + 1 if kind == "antisymmetric" else prev
        if r == 1 and b == nb - 1:
            if kind != "free" or i == 0:
                return leaf(prefix, lo)
            total = 0
            if dom.greater(dom.mul(prefix, dom.lam(prev)), thr):
                total += orderings(size, denom, run + 1)
            return total + leaf(prefix, prev + 1) * orderings(size, denom * math.factorial(run), 1)
        total = 0
        k = lo
        while True:
            if k > horizon:
                raise _Infinite(f"branch still admissible at index {horizon}")
            bound = dom.mul(dom.mul(prefix, completion(kind, k, r)), tail)
            if not dom.greater(bound, thr):
                break
            p = dom.mul(prefix, dom.lam(k))
            if kind == "free" and i > 0 and k == prev:
                d2, r2 = denom, run + 1
            elif kind == "free" and i > 0:
                d2, r2 = denom * math.factorial(run), 1
            else:
                d2, r2 = 1, 1
            if r == 1:
                weight = orderings(size, d2, r2) if kind == "free" else 1
                total += weight * rec(b + 1, 0, p, 0, 1, 0)
            else:
                total += rec(b, i + 1, p, k, d2, r2)
            k += 1
        return total

    try:
        n = rec(0, 0, dom.one, 0, 1, 0)
    except _Infinite as exc:
        return CountResult(InfiniteCount(str(exc)), dom.ties - ties0)
    return CountResult(n, dom.ties - ties0)


def count_above_detailed(structure: SymmetryStructure, seq: EigenSequence, eps,
                         horizon: int = DEFAULT_HORIZON) -> CountResult:
    if not eps > 0:
        raise ValueError("eps must be positive")
    dom = seq.domain()
    return count_in_domain(structure, seq, dom, dom.threshold(eps), horizon)


def count_above(structure: SymmetryStructure, seq: EigenSequence, eps,
                horizon: int = DEFAULT_HORIZON):
    """``#{k canonical : lam_{d,k} > eps^2}``; may be an :class:`InfiniteCount`."""
    return count_above_detailed(structure, seq, eps, horizon).count


# ---------------------------------------------------------------------------
# brute-force oracles
# ---------------------------------------------------------------------------

def canonical_in_cube(structure: SymmetryStructure, s: int) -> Iterator[tuple]:
    """All canonical indices with every coordinate in ``1..s``."""
    layout = _layout(structure)
    per_block = []
    for kind, pos in layout:
        r = range(1, s + 1)
        if kind == "antisymmetric":
            per_block.append(list(combinations(r, len(pos))))
        elif kind == "symmetric":
            per_block.append(list(combinations_with_replacement(r, len(pos))))
        else:
            per_block.append(list(product(r, repeat=len(pos))))
    for choice in product(*per_block):
        k = [0] * structure.d
        for (kind, pos), vals in zip(layout, choice):
            for p, v in zip(pos, vals):
                k[p] = v
        yield tuple(k)


def brute_force_count(structure: SymmetryStructure, seq: EigenSequence, eps, s: int) -> tuple[int, bool]:
    """Exhaustive count over the cube ``{1..s}^d``.

    Returns ``(count, complete)``; ``complete`` certifies that no index
    outside the cube can exceed the threshold (``lam_s * lam_1^(d-1) <= eps^2``).
    """
    d = structure.d
    if s < d:
        raise ValueError("cube bound s must be at least d")
    dom = seq.domain()
    thr = dom.threshold(eps)
    n = 0
    for k in canonical_in_cube(structure, s):
        v = dom.one
        for m in k:
            v = dom.mul(v, dom.lam(m))
        if dom.greater(v, thr):
            n += 1
    cert = dom.mul(dom.lam(s), dom.power(dom.lam(1), d - 1))
    complete = not dom.greater(cert, thr)
    return n, complete


def brute_spectral_sum(structure: SymmetryStructure, seq: EigenSequence, tau: float, s: int) -> PowerSum:
    """``sum lam_{d,k}^tau`` over canonical k in the cube, with a bound on the rest."""
    d = structure.d
    lam = np.array([seq.eigenvalue(m) for m in range(1, s + 1)]) ** tau
    total = math.fsum(float(np.prod([lam[m - 1] for m in k])) for k in canonical_in_cube(structure, s))
    p1 = seq.power_sum(tau).value
    rest = seq.power_sum(tau, start=s + 1).value
    return PowerSum(total, d * p1 ** (d - 1) * rest)


# ---------------------------------------------------------------------------
# spectral sums via symmetric functions
# ---------------------------------------------------------------------------

def _exact_e_h(x: list, a: int, kind: str):
    out = [Fraction(1)] + [Fraction(0)] * a
    for xm in x:
        if kind == "antisymmetric":
            for j in range(a, 0, -1):
                out[j] += xm * out[j - 1]
        else:
            for j in range(1, a + 1):
                out[j] += xm * out[j - 1]
    return out[a]


def _head_e_h(x: np.ndarray, a: int, kind: str) -> np.ndarray:
    """``[e_0..e_a]`` (or h) of the finite vector x by the prefix recursion."""
    out = np.zeros(a + 1)
    out[0] = 1.0
    prev = np.ones(len(x))
    for j in range(1, a + 1):
        if kind == "antisymmetric":
            shifted = np.concatenate(([0.0 if j > 1 else 1.0], prev[:-1]))
            cur = np.cumsum(x * shifted)
        else:
            cur = np.cumsum(x * prev)
        out[j] = cur[-1]
        prev = cur
    return out


def _newton(p: np.ndarray, dp: np.ndarray, a: int, kind: str):
    """e_j (or h_j), j=0..a, from power sums p[1..a] with first-order error bounds."""
    val = np.zeros(a + 1)
    err = np.zeros(a + 1)
    val[0] = 1.0
    for j in range(1, a + 1):
        s = 0.0
        e = 0.0
        for i in range(1, j + 1):
            sign = -1.0 if (kind == "antisymmetric" and i % 2 == 0) else 1.0
            s += sign * val[j - i] * p[i]
            e += err[j - i] * (p[i] + dp[i]) + abs(val[j - i]) * dp[i]
        val[j] = s / j
        err[j] = e / j + 4 * j * np.finfo(float).eps * abs(val[j])
    return val, err


def _block_sum(seq: EigenSequence, tau: float, a: int, kind: str) -> PowerSum:
    support = seq.positive_count()
    if kind == "antisymmetric" and a > support:
        return PowerSum(0.0, 0.0)
    n_head = int(support) if support <= 4 * HEAD_TERMS else HEAD_TERMS
    logs = np.array([seq.log_eigenvalue(m) for m in range(1, n_head + 1)])
    x = np.exp(tau * logs)
    head = _head_e_h(x, a, kind)
    eps = np.finfo(float).eps
    head_err = np.array([j * (n_head + 1) * eps * head[j] for j in range(a + 1)])
    if n_head >= support:
        return PowerSum(float(head[a]), float(head_err[a]))
    p = np.zeros(a + 1)
    dp = np.zeros(a + 1)
    for i in range(1, a + 1):
        ps = seq.power_sum(i * tau, start=n_head + 1)
        p[i], dp[i] = ps.value, ps.error
    tail, tail_err = _newton(p, dp, a, kind)
    value = sum(head[a - j] * tail[j] for j in range(a + 1))
    error = sum(head_err[a - j] * (abs(tail[j]) + tail_err[j]) + head[a - j] * tail_err[j] for j in range(a + 1))
    return PowerSum(float(value), float(error + 2 * a * eps * value))


def spectral_sum(structure: SymmetryStructure, seq: EigenSequence, tau: float,
                 strict: bool = False) -> PowerSum:
    """``sum_{k canonical} lam_{d,k}^tau`` as ``(value, error)``.

    Antisymmetric groups contribute the elementary symmetric function ``e_a``
    of ``(lam_m^tau)``, symmetric groups the complete homogeneous ``h_a``,
    free coordinates ``(sum lam_m^tau)^b``. Divergence gives ``inf`` (or
    :class:`DivergenceSignal` when ``strict``). With finite support and
    rational values the result is an exact ``Fraction`` with zero error.
    """
    if not tau > 0:
        raise ValueError("tau must be positive")
    layout = _layout(structure)
    support = seq.positive_count()
    if any(kind == "antisymmetric" and len(pos) > support for kind, pos in layout):
        return PowerSum(Fraction(0) if seq.mode == RATIONAL else 0.0, 0.0)
    if not seq.in_l_tau(tau):
        if strict:
            raise DivergenceSignal(f"sum of lam_m^{tau} diverges for {seq!r}")
        return PowerSum(math.inf, 0.0)

    exact_tau = tau == int(tau)
    if seq.mode == RATIONAL and support < math.inf and exact_tau:
        x = [seq.exact(m) ** int(tau) for m in range(1, int(support) + 1)]
        total = Fraction(1)
        for kind, pos in layout:
            if kind == "free":
                total *= sum(x, Fraction(0)) ** len(pos)
            else:
                total *= _exact_e_h(x, len(pos), kind)
        return PowerSum(total, 0.0)

    value, error = 1.0, 0.0
    for kind, pos in layout:
        if kind == "free":
            p1 = seq.power_sum(tau)
            b = len(pos)
            part = PowerSum(p1.value**b, b * (p1.value + p1.error) ** (b - 1) * p1.error)
        else:
            part = _block_sum(seq, tau, len(pos), kind)
        error = value * part.error + part.value * error + error * part.error
        value *= part.value
    return PowerSum(float(value), float(error))
