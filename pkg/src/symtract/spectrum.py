"""Univariate eigenvalue sequences and their power sums.

A sequence describes the non-increasing eigenvalues ``lam_1 >= lam_2 >= ... >= 0``
of ``W_1 = S_1^* S_1``. Everything downstream only ever sees the sequence
through :meth:`EigenSequence.eigenvalue`, :meth:`EigenSequence.log_eigenvalue`,
:meth:`EigenSequence.exact` and :meth:`EigenSequence.power_sum`.

Two arithmetic domains are provided for products of eigenvalues:
:class:`LogScale` (sums of ``ln lam`` in float, no underflow at large ``d``)
and :class:`ExactScale` (``fractions.Fraction``), selected by ``mode``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import NamedTuple, Sequence

import numpy as np

FLOAT = "float"
RATIONAL = "rational"
MODES = (FLOAT, RATIONAL)

# Relative width (log domain) inside which a float comparison counts as a tie.
TIE_TOLERANCE = 1e-12


class DivergenceSignal(ArithmeticError):
    """Raised when a requested series provably diverges."""


class PowerSum(NamedTuple):
    value: float | Fraction
    error: float

    @property
    def finite(self) -> bool:
        return not (isinstance(self.value, float) and math.isinf(self.value))


def to_fraction(x) -> Fraction:
    """Exact rational for ``x``; floats are read through their decimal repr."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"not a finite number: {x!r}")
        return Fraction(repr(x))
    return Fraction(x)


def _is_integral(x) -> bool:
    return float(x).is_integer()


# ---------------------------------------------------------------------------
# Hurwitz-type tail sums  sum_{m >= n0} m^(-sigma)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def zeta_tail(sigma: float, n0: int) -> PowerSum:
    """``sum_{m>=n0} m^-sigma`` with a certified error bound.

    The first block is summed directly; the remainder from ``N`` on is
    enclosed between ``int_N^inf x^-sigma dx`` and
    ``N^-sigma + int_N^inf x^-sigma dx`` (integral comparison for a
    non-increasing summand), and the midpoint is reported.
    """
    if sigma <= 1.0:
        return PowerSum(math.inf, 0.0)
    n0 = max(int(n0), 1)
    n_terms = int(min(2**20, max(1024, math.ceil(10.0 ** (16.0 / sigma)))))
    m = np.arange(n0, n0 + n_terms, dtype=np.float64)
    head = float(np.sum(np.exp(-sigma * np.log(m))[::-1]))
    big_n = n0 + n_terms
    lower = math.exp((1.0 - sigma) * math.log(big_n)) / (sigma - 1.0)
    first = math.exp(-sigma * math.log(big_n))
    value = head + lower + 0.5 * first
    # enclosure half-width; roundoff: pairwise summation plus exp/log per term
    unit = float(np.finfo(float).eps)
    rounding = (2.0 * math.log2(n_terms) + sigma * math.log(big_n) + 4.0) * unit * head
    error = 0.5 * first + rounding
    return PowerSum(value, error)


# ---------------------------------------------------------------------------
# Sequence families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EigenSequence:
    """Base class. Subclasses define the closed form of ``lam_m``."""

    mode: str = field(default=FLOAT, kw_only=True)

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown value mode {self.mode!r}")
        if self.mode == RATIONAL and not self.is_rational:
            raise ValueError(f"{type(self).__name__} has irrational values; rational mode unavailable")
        if not self.eigenvalue(1) > 0:
            raise ValueError("lambda_1 must be positive (zero operator rejected)")

    # -- interface -----------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return False

    def log_eigenvalue(self, m: int) -> float:
        raise NotImplementedError

    def exact(self, m: int) -> Fraction:
        raise ValueError(f"{type(self).__name__} has no exact rational values")

    def eigenvalue(self, m: int) -> float:
        if m < 1:
            raise ValueError("eigenvalue index starts at 1")
        lv = self.log_eigenvalue(m)
        return 0.0 if lv == -math.inf else math.exp(lv)

    def limit(self) -> float:
        """``lim_{m->inf} lam_m``."""
        return 0.0

    def positive_count(self) -> float:
        """Number of strictly positive eigenvalues (``inf`` if unbounded)."""
        return math.inf

    def l_tau_threshold(self) -> tuple[float, bool] | None:
        """``(tau_star, inclusive)``: lam is in l_tau iff tau > tau_star
        (or ``>=`` when inclusive). ``None`` if lam lies in no l_tau."""
        return (0.0, False)

    def in_l_tau(self, tau: float) -> bool:
        th = self.l_tau_threshold()
        if th is None:
            return False
        t, inclusive = th
        return tau > t or (inclusive and tau == t)

    def power_sum(self, tau: float, start: int = 1, strict: bool = False) -> PowerSum:
        """``sum_{m>=start} lam_m^tau`` with an error bound.

        Divergent sums come back as ``(inf, 0.0)``, or raise
        :class:`DivergenceSignal` when ``strict``.
        """
        if tau <= 0:
            raise ValueError("tau must be positive")
        if start < 1:
            raise ValueError("start must be >= 1")
        if not self.in_l_tau(tau):
            if strict:
                raise DivergenceSignal(f"sum of lam_m^{tau} diverges for {self!r}")
            return PowerSum(math.inf, 0.0)
        return self._power_sum(float(tau), int(start))

    def _power_sum(self, tau: float, start: int) -> PowerSum:
        raise NotImplementedError

    def domain(self) -> "LogScale | ExactScale":
        return ExactScale(self) if self.mode == RATIONAL else LogScale(self)

    def head(self, n: int) -> np.ndarray:
        return np.array([self.eigenvalue(m) for m in range(1, n + 1)])


@dataclass(frozen=True)
class Explicit(EigenSequence):
    """Finite list of leading values continued by a tail rule.

    ``tail`` is ``"zero"``, ``("power", p)`` meaning ``lam_m = lam_L (L/m)^p``
    or ``("geometric", r)`` meaning ``lam_m = lam_L r^(m-L)`` for ``m > L``.
    """

    values: tuple = ()
    tail: object = "zero"

    def __post_init__(self):
        vals = tuple(self.values)
        object.__setattr__(self, "values", vals)
        tail = self.tail
        if isinstance(tail, list):
            tail = tuple(tail)
            object.__setattr__(self, "tail", tail)
        if not vals:
            raise ValueError("explicit sequence needs at least one value")
        for a, b in zip(vals, vals[1:]):
            if float(b) > float(a):
                raise ValueError(f"eigenvalues must be non-increasing: {a} < {b}")
        if float(vals[-1]) < 0:
            raise ValueError("eigenvalues must be non-negative")
        if tail != "zero":
            if not (isinstance(tail, tuple) and len(tail) == 2 and tail[0] in ("power", "geometric")):
                raise ValueError(f"unknown tail rule {tail!r}")
            if tail[0] == "power" and not float(tail[1]) > 0:
                raise ValueError("power tail needs a positive exponent")
            if tail[0] == "geometric" and not 0 < float(tail[1]) < 1:
                raise ValueError("geometric tail needs a ratio in (0, 1)")
            if not float(vals[-1]) > 0:
                raise ValueError("a decaying tail must start from a positive value")
        super().__post_init__()

    @property
    def is_rational(self) -> bool:
        try:
            [to_fraction(v) for v in self.values]
        except (TypeError, ValueError):
            return False
        if self.tail == "zero":
            return True
        kind, x = self.tail
        return _is_integral(x) if kind == "power" else True

    def log_eigenvalue(self, m: int) -> float:
        n = len(self.values)
        if m <= n:
            v = float(self.values[m - 1])
            return math.log(v) if v > 0 else -math.inf
        if self.tail == "zero":
            return -math.inf
        kind, x = self.tail
        last = math.log(float(self.values[-1]))
        if kind == "power":
            return last + float(x) * (math.log(n) - math.log(m))
        return last + (m - n) * math.log(float(x))

    def exact(self, m: int) -> Fraction:
        if m < 1:
            raise ValueError("eigenvalue index starts at 1")
        n = len(self.values)
        if m <= n:
            return to_fraction(self.values[m - 1])
        if self.tail == "zero":
            return Fraction(0)
        kind, x = self.tail
        last = to_fraction(self.values[-1])
        if kind == "power":
            p = int(float(x))
            return last * Fraction(n**p, m**p)
        return last * to_fraction(x) ** (m - n)

    def positive_count(self) -> float:
        if self.tail != "zero":
            return math.inf
        return sum(1 for v in self.values if float(v) > 0)

    def l_tau_threshold(self):
        if self.tail == "zero" or self.tail[0] == "geometric":
            return (0.0, False)
        return (1.0 / float(self.tail[1]), False)

    def _power_sum(self, tau, start):
        n = len(self.values)
        if self.mode == RATIONAL and _is_integral(tau) and self.tail == "zero":
            t = int(tau)
            return PowerSum(sum((self.exact(m) ** t for m in range(start, n + 1)), Fraction(0)), 0.0)
        head = sum(self.eigenvalue(m) ** tau for m in range(start, n + 1))
        if self.tail == "zero":
            return PowerSum(head, 0.0)
        kind, x = self.tail
        last = float(self.values[-1])
        m0 = max(start, n + 1)
        if kind == "geometric":
            r = float(x) ** tau
            first = (last * float(x) ** (m0 - n)) ** tau
            return PowerSum(head + first / (1.0 - r), 0.0)
        p = float(x)
        tail = zeta_tail(p * tau, m0)
        c = (last * n**p) ** tau
        return PowerSum(head + c * tail.value, c * tail.error)


@dataclass(frozen=True)
class FiniteRank(Explicit):
    """``values`` followed by zeros."""

    def __init__(self, values: Sequence, *, mode: str = FLOAT):
        object.__setattr__(self, "mode", mode)
        object.__setattr__(self, "values", tuple(values))
        object.__setattr__(self, "tail", "zero")
        self.__post_init__()

    def __repr__(self):
        return f"FiniteRank({list(self.values)!r}, mode={self.mode!r})"


@dataclass(frozen=True)
class PowerDecay(EigenSequence):
    """``lam_m = m^(-2 alpha)``."""

    alpha: float = 1.0

    def __post_init__(self):
        if not float(self.alpha) > 0:
            raise ValueError("alpha must be positive")
        super().__post_init__()

    @property
    def is_rational(self) -> bool:
        return _is_integral(2 * self.alpha)

    def log_eigenvalue(self, m):
        return -2.0 * float(self.alpha) * math.log(m)

    def exact(self, m):
        if not self.is_rational:
            return super().exact(m)
        return Fraction(1, m ** int(2 * self.alpha))

    def l_tau_threshold(self):
        return (1.0 / (2.0 * float(self.alpha)), False)

    def _power_sum(self, tau, start):
        return zeta_tail(2.0 * float(self.alpha) * tau, start)


@dataclass(frozen=True)
class ShiftedPower(EigenSequence):
    """``lam_1 = 1`` and ``lam_{j+1} = j^(-beta)``; ``beta = 0`` is non-compact."""

    beta: float = 1.0

    def __post_init__(self):
        if float(self.beta) < 0:
            raise ValueError("beta must be non-negative")
        super().__post_init__()

    @property
    def is_rational(self) -> bool:
        return _is_integral(self.beta)

    def log_eigenvalue(self, m):
        if m == 1:
            return 0.0
        return -float(self.beta) * math.log(m - 1)

    def exact(self, m):
        if not self.is_rational:
            return super().exact(m)
        if m == 1:
            return Fraction(1)
        return Fraction(1, (m - 1) ** int(self.beta))

    def limit(self):
        return 1.0 if float(self.beta) == 0 else 0.0

    def l_tau_threshold(self):
        if float(self.beta) == 0:
            return None
        return (1.0 / float(self.beta), False)

    def _power_sum(self, tau, start):
        first = 1.0 if start == 1 else 0.0
        rest = zeta_tail(float(self.beta) * tau, max(start - 1, 1))
        return PowerSum(first + rest.value, rest.error)


@dataclass(frozen=True)
class Geometric(EigenSequence):
    """``lam_m = scale * ratio^(m-1)``."""

    ratio: float = 0.5
    scale: float = 1.0

    def __post_init__(self):
        if not 0 < float(self.ratio) < 1:
            raise ValueError("ratio must lie in (0, 1)")
        if not float(self.scale) > 0:
            raise ValueError("scale must be positive")
        super().__post_init__()

    @property
    def is_rational(self) -> bool:
        return True

    def log_eigenvalue(self, m):
        return math.log(float(self.scale)) + (m - 1) * math.log(float(self.ratio))

    def exact(self, m):
        return to_fraction(self.scale) * to_fraction(self.ratio) ** (m - 1)

    def _power_sum(self, tau, start):
        c, r = float(self.scale), float(self.ratio)
        if self.mode == RATIONAL and _is_integral(tau):
            t = int(tau)
            rt = to_fraction(r) ** t
            return PowerSum(self.exact(start) ** t / (1 - rt), 0.0)
        first = math.exp(tau * (math.log(c) + (start - 1) * math.log(r)))
        return PowerSum(first / (1.0 - r**tau), 0.0)


@dataclass(frozen=True)
class LogDecay(EigenSequence):
    """``lam_m = 1 / ln(m + 1)``; in no l_tau space."""

    def log_eigenvalue(self, m):
        return -math.log(math.log(m + 1))

    def l_tau_threshold(self):
        return None

    def _power_sum(self, tau, start):  # pragma: no cover - guarded by in_l_tau
        return PowerSum(math.inf, 0.0)


def find_tau_membership(seq: EigenSequence, tau_grid: Sequence[float]) -> float | None:
    """Smallest ``tau`` of an increasing grid with a convergent power sum, else ``None``."""
    grid = list(tau_grid)
    if not grid:
        raise ValueError("tau grid must be non-empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("tau grid must be increasing")
    for tau in grid:
        if seq.power_sum(tau).finite:
            return tau
    return None


def rescaled(seq: EigenSequence) -> EigenSequence:
    """The sequence ``mu_m = lam_m / lam_1``."""
    return Rescaled(base=seq, mode=seq.mode)


@dataclass(frozen=True)
class Rescaled(EigenSequence):
    base: EigenSequence = None

    @property
    def is_rational(self) -> bool:
        return self.base.is_rational

    def log_eigenvalue(self, m):
        return self.base.log_eigenvalue(m) - self.base.log_eigenvalue(1)

    def exact(self, m):
        return self.base.exact(m) / self.base.exact(1)

    def limit(self):
        return self.base.limit() / self.base.eigenvalue(1)

    def positive_count(self):
        return self.base.positive_count()

    def l_tau_threshold(self):
        return self.base.l_tau_threshold()

    def _power_sum(self, tau, start):
        ps = self.base._power_sum(tau, start)
        if isinstance(ps.value, Fraction):
            return PowerSum(ps.value / self.base.exact(1) ** int(tau), 0.0)
        c = self.base.eigenvalue(1) ** tau
        return PowerSum(ps.value / c, ps.error / c)


# ---------------------------------------------------------------------------
# Arithmetic domains for eigenvalue products
# ---------------------------------------------------------------------------

class LogScale:
    """Products as sums of logarithms; ``-inf`` encodes zero.

    ``greater`` is strict: differences within ``TIE_TOLERANCE`` are treated
    as equality (hence "not greater") and counted in ``ties``.
    """

    exact = False
    one = 0.0
    zero = -math.inf

    def __init__(self, seq: EigenSequence, tol: float = TIE_TOLERANCE):
        self.seq = seq
        self.tol = tol
        self.ties = 0
        self._lam: dict[int, float] = {}

    def lam(self, m: int) -> float:
        v = self._lam.get(m)
        if v is None:
            v = self._lam[m] = self.seq.log_eigenvalue(m)
        return v

    def from_value(self, x) -> float:
        x = float(x)
        if x < 0:
            raise ValueError("negative value")
        return math.log(x) if x > 0 else -math.inf

    def threshold(self, eps) -> float:
        """Element for ``eps**2``."""
        return 2.0 * math.log(float(eps))

    @staticmethod
    def mul(a, b):
        if a == -math.inf or b == -math.inf:
            return -math.inf
        return a + b

    @staticmethod
    def div(a, b):
        if a == -math.inf:
            return -math.inf
        return a - b

    @staticmethod
    def power(a, k: int):
        if k == 0:
            return 0.0
        return -math.inf if a == -math.inf else a * k

    def greater(self, a, b) -> bool:
        if a == -math.inf:
            return False
        diff = a - b
        if diff > self.tol:
            return True
        if diff >= -self.tol:
            self.ties += 1
        return False

    @staticmethod
    def is_zero(a) -> bool:
        return a == -math.inf

    @staticmethod
    def to_float(a) -> float:
        return 0.0 if a == -math.inf else math.exp(a)

    @staticmethod
    def to_log(a) -> float:
        return a

    @staticmethod
    def sort_key(a):
        return -a


class ExactScale:
    """Products as exact fractions."""

    exact = True
    one = Fraction(1)
    zero = Fraction(0)
    ties = 0

    def __init__(self, seq: EigenSequence):
        self.seq = seq
        self._lam: dict[int, Fraction] = {}

    def lam(self, m: int) -> Fraction:
        v = self._lam.get(m)
        if v is None:
            v = self._lam[m] = self.seq.exact(m)
        return v

    @staticmethod
    def from_value(x) -> Fraction:
        x = to_fraction(x)
        if x < 0:
            raise ValueError("negative value")
        return x

    @staticmethod
    def threshold(eps) -> Fraction:
        return to_fraction(eps) ** 2

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def div(a, b):
        return a / b

    @staticmethod
    def power(a, k: int):
        return a**k

    @staticmethod
    def greater(a, b) -> bool:
        return a > b

    @staticmethod
    def is_zero(a) -> bool:
        return a == 0

    @staticmethod
    def to_float(a) -> float:
        return float(a)

    @staticmethod
    def to_log(a) -> float:
        if a == 0:
            return -math.inf
        return math.log(a.numerator) - math.log(a.denominator)

    @staticmethod
    def sort_key(a):
        return -a
