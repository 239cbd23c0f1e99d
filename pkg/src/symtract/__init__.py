"""Information complexity of tensor product problems on (anti-)symmetric subspaces."""

from .complexity import (Criterion, NoFiniteIndex, Problem, closed_form_finite_rank, exact_antisymmetric_count,
                         i_index, info_complexity, initial_error, nth_minimal_error)
from .enumeration import (InfiniteCount, SpectrumStream, brute_force_count, count_above, spectral_sum,
                          top_eigenvalues)
from .spectrum import (DivergenceSignal, EigenSequence, Explicit, FiniteRank, Geometric, LogDecay, PowerDecay,
                       ShiftedPower, rescaled)
from .symmetry import Group, InvalidCanonicalIndex, Kind, SymmetryStructure, parity, project, xi_expansion
from .tractability import TractabilityReport, classify

__version__ = "0.1.0"
