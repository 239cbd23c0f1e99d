"""Coordinate groups, permutation parity and the (anti-)symmetrizers.

Elements of the tensor product space are handled through their coefficients
in the product basis ``eta_{d,j}``: a :data:`SparseCoefficients` dict maps a
multi-index ``j`` (tuple of positive ints, 1-based coordinates) to its
coefficient. Coefficients may be floats or ``Fraction``; fractions stay exact
through every projection.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import permutations
from typing import Dict, Iterable, Mapping, Sequence, Tuple

MultiIndex = Tuple[int, ...]
SparseCoefficients = Dict[MultiIndex, object]

# Largest group the coefficient-level projections will enumerate (#I! terms).
MAX_PROJECTION_GROUP = 8
PRUNE_RELATIVE = 1e-15


class Kind(str, Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


class InvalidCanonicalIndex(ValueError):
    pass


@dataclass(frozen=True)
class Group:
    indices: Tuple[int, ...]
    kind: Kind

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(sorted(int(i) for i in self.indices)))
        object.__setattr__(self, "kind", Kind(self.kind))
        if not self.indices:
            raise ValueError("groups must be non-empty")
        if len(set(self.indices)) != len(self.indices):
            raise ValueError(f"repeated coordinate in group {self.indices}")

    @property
    def size(self) -> int:
        return len(self.indices)


@dataclass(frozen=True)
class SymmetryStructure:
    """Dimension ``d`` plus disjoint coordinate groups; the rest is free."""

    d: int
    groups: Tuple[Group, ...] = ()

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("d must be positive")
        groups = tuple(g if isinstance(g, Group) else Group(*g) for g in self.groups)
        seen = set()
        for g in groups:
            if g.indices[0] < 1 or g.indices[-1] > self.d:
                raise ValueError(f"group {g.indices} outside 1..{self.d}")
            if seen & set(g.indices):
                raise ValueError("groups must be pairwise disjoint")
            seen |= set(g.indices)
        object.__setattr__(self, "groups", tuple(sorted(groups, key=lambda g: g.indices[0])))

    # -- constructors --------------------------------------------------------
    @classmethod
    def entire(cls, d: int) -> "SymmetryStructure":
        return cls(d, ())

    @classmethod
    def fully_symmetric(cls, d: int) -> "SymmetryStructure":
        return cls(d, (Group(range(1, d + 1), Kind.SYMMETRIC),))

    @classmethod
    def fully_antisymmetric(cls, d: int) -> "SymmetryStructure":
        return cls(d, (Group(range(1, d + 1), Kind.ANTISYMMETRIC),))

    @classmethod
    def blocks_of(cls, sizes: Sequence[int], kind, free: int = 0) -> "SymmetryStructure":
        """Contiguous groups of the given sizes followed by ``free`` free coordinates."""
        groups, start = [], 1
        for a in sizes:
            if a > 0:
                groups.append(Group(range(start, start + a), Kind(kind)))
                start += a
        return cls(start - 1 + free, tuple(groups))

    # -- derived quantities --------------------------------------------------
    @property
    def free(self) -> Tuple[int, ...]:
        grouped = {i for g in self.groups for i in g.indices}
        return tuple(i for i in range(1, self.d + 1) if i not in grouped)

    @property
    def b(self) -> int:
        """Number of coordinates outside every group."""
        return self.d - sum(g.size for g in self.groups)

    @property
    def group_sizes(self) -> Tuple[int, ...]:
        return tuple(g.size for g in self.groups)

    def kinds(self) -> set:
        return {g.kind for g in self.groups if g.size > 1}

    def blocks(self) -> list:
        """``(kind, coordinates)`` per block, groups first, then one free block.

        Singleton groups carry no constraint and are folded into the free
        block. ``kind`` is ``"free"`` for that last block.
        """
        out = [(g.kind, g.indices) for g in self.groups if g.size > 1]
        free = tuple(sorted(set(self.free) | {g.indices[0] for g in self.groups if g.size == 1}))
        if free:
            out.append(("free", free))
        return out

    def group(self, group) -> Group:
        if isinstance(group, Group):
            return group
        return self.groups[group]

    def is_canonical(self, k: Sequence[int]) -> bool:
        if len(k) != self.d or any(int(x) < 1 for x in k):
            return False
        for g in self.groups:
            vals = [k[i - 1] for i in g.indices]
            if g.kind is Kind.SYMMETRIC:
                if any(b < a for a, b in zip(vals, vals[1:])):
                    return False
            elif any(b <= a for a, b in zip(vals, vals[1:])):
                return False
        return True

    def validate(self, k: Sequence[int]) -> MultiIndex:
        k = tuple(int(x) for x in k)
        if not self.is_canonical(k):
            raise InvalidCanonicalIndex(f"{k} is not a canonical index for {self}")
        return k


# ---------------------------------------------------------------------------
# permutations
# ---------------------------------------------------------------------------

def parity(perm) -> int:
    """Sign of a permutation.

    ``perm`` is a mapping ``{i: pi(i)}`` or the sequence of images of the
    sorted domain, e.g. ``(2, 3, 1)`` for the 3-cycle 1->2->3->1.
    """
    if isinstance(perm, Mapping):
        images = [perm[i] for i in sorted(perm)]
        domain = sorted(perm)
    else:
        images = list(perm)
        domain = sorted(images)
    if sorted(images) != domain or len(set(images)) != len(images):
        raise ValueError(f"not a bijection: {perm!r}")
    inversions = sum(1 for a in range(len(images)) for b in range(a + 1, len(images)) if images[a] > images[b])
    return -1 if inversions % 2 else 1


def multiplicity_vector(structure: SymmetryStructure, group, j: Sequence[int]) -> Tuple[int, ...]:
    """How often each distinct value occurs among the group's coordinates of ``j``,
    sorted non-increasingly and zero-padded to the group size."""
    g = structure.group(group)
    if len(j) != structure.d:
        raise ValueError(f"index has length {len(j)}, expected {structure.d}")
    counts = sorted(Counter(j[i - 1] for i in g.indices).values(), reverse=True)
    return tuple(counts + [0] * (g.size - len(counts)))


def multiplicity_factorial(structure: SymmetryStructure, group, j) -> int:
    return math.prod(math.factorial(c) for c in multiplicity_vector(structure, group, j))


def _prune(coeffs: SparseCoefficients) -> SparseCoefficients:
    out = {k: c for k, c in coeffs.items() if c != 0}
    floats = [abs(c) for c in out.values() if isinstance(c, float)]
    if floats:
        cut = PRUNE_RELATIVE * max(abs(c) for c in out.values())
        out = {k: c for k, c in out.items() if not (isinstance(c, float) and abs(c) < cut)}
    return out


def project(structure: SymmetryStructure, group, coeffs: Mapping, kind=None) -> SparseCoefficients:
    """Apply the (anti-)symmetrizer of one group to a coefficient expansion.

    Each ``eta_j`` becomes the (signed) average of ``eta_{sigma(j)}`` over all
    permutations ``sigma`` of the group's coordinates. ``kind`` defaults to the
    group's own kind.
    """
    g = structure.group(group)
    kind = g.kind if kind is None else Kind(kind)
    if g.size > MAX_PROJECTION_GROUP:
        raise ValueError(f"group of size {g.size} too large to enumerate (max {MAX_PROJECTION_GROUP})")
    pos = [i - 1 for i in g.indices]
    perms = [(p, parity(p)) for p in permutations(range(g.size))]
    n_perm = len(perms)
    out: dict = {}
    for j, c in coeffs.items():
        if c == 0:
            continue
        if len(j) != structure.d:
            raise ValueError(f"index {j} has wrong length")
        share = c / n_perm if isinstance(c, float) else Fraction(c) / n_perm
        for p, sign in perms:
            new = list(j)
            for a, b in enumerate(p):
                new[pos[a]] = j[pos[b]]
            new = tuple(new)
            term = share if (kind is Kind.SYMMETRIC or sign > 0) else -share
            out[new] = out.get(new, 0) + term
    return _prune(out)


def project_all(structure: SymmetryStructure, coeffs: Mapping) -> SparseCoefficients:
    """Compose the projections of every group (they commute)."""
    out = dict(coeffs)
    for g in structure.groups:
        if g.size > 1:
            out = project(structure, g, out)
    return out


def xi_expansion_exact(structure: SymmetryStructure, k: Sequence[int]) -> tuple[Fraction, SparseCoefficients]:
    """``(factor_sq, coeffs)`` with ``xi_k = sqrt(factor_sq) * sum coeffs[j] eta_j``, all exact."""
    k = structure.validate(k)
    factor_sq = Fraction(1)
    for g in structure.groups:
        if g.size > 1:
            factor_sq *= Fraction(math.factorial(g.size), multiplicity_factorial(structure, g, k))
    return factor_sq, project_all(structure, {k: Fraction(1)})


def xi_expansion(structure: SymmetryStructure, k: Sequence[int]) -> SparseCoefficients:
    """Coefficients of the orthonormal basis element ``xi_k`` over the product basis."""
    factor_sq, coeffs = xi_expansion_exact(structure, k)
    f = math.sqrt(factor_sq)
    return {j: f * float(c) for j, c in coeffs.items()}


def inner(a: Mapping, b: Mapping):
    if len(b) < len(a):
        a, b = b, a
    return sum((c * b[j] for j, c in a.items() if j in b), 0)


def norm_sq(a: Mapping):
    return sum((c * c for c in a.values()), 0)


def format_index(j: Iterable[int]) -> str:
    return "(" + ",".join(str(int(x)) for x in j) + ")"


def parse_index(s: str) -> MultiIndex:
    body = s.strip().strip("()[]")
    return tuple(int(x) for x in body.split(",") if x.strip())
