"""Coefficient-space simulation of the n-th optimal linear algorithm.

Problem elements are dicts mapping canonical indices k to the coefficient
``<f, xi_k>``. The solution operator acts diagonally in that basis with
singular values ``sqrt(lam_{d,k})``, so the optimal algorithm keeps the n
leading coefficients (in stream order) and drops the rest.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .complexity import Problem, nth_minimal_error
from .enumeration import SpectrumStream
from .symmetry import norm_sq, xi_expansion

WINDOW_EXTRA = 32


def _spectrum(p: Problem, n: int) -> list:
    return SpectrumStream(p.structure, p.seq).take(n)


def _lam(p: Problem, k) -> float:
    dom = p.seq.domain()
    v = dom.one
    for m in k:
        v = dom.mul(v, dom.lam(m))
    return dom.to_float(v)


def _check(p: Problem, f: dict) -> None:
    for k in f:
        p.structure.validate(k)


def apply_optimal(p: Problem, f: dict, n: int) -> dict:
    """``A*_n f`` in image coordinates: ``c_k * sqrt(lam_k)`` on the n leading
    canonical indices, nothing elsewhere."""
    if n < 0:
        raise ValueError("n must be non-negative")
    _check(p, f)
    out = {}
    for k, lam in _spectrum(p, n):
        c = f.get(k, 0.0)
        if c:
            out[k] = float(c) * math.sqrt(lam)
    return out


def apply_operator(p: Problem, f: dict) -> dict:
    """``S_d f`` in the same image coordinates."""
    _check(p, f)
    return {k: float(c) * math.sqrt(_lam(p, k)) for k, c in f.items() if c}


def residual_error(p: Problem, f: dict, n: int) -> float:
    """``||S_d f - A*_n f||`` computed from the dropped coefficients."""
    if n < 0:
        raise ValueError("n must be non-negative")
    _check(p, f)
    kept = {k for k, _ in _spectrum(p, n)}
    total = math.fsum(float(c) ** 2 * _lam(p, k) for k, c in f.items() if k not in kept)
    return math.sqrt(total)


def witness(p: Problem, n: int):
    """``xi_{psi(n+1)}`` as a unit element, or ``None`` if the spectrum has fewer entries."""
    items = _spectrum(p, n + 1)
    if len(items) <= n:
        return None
    return {items[n][0]: 1.0}


def _threads() -> int:
    raw = os.environ.get("SYMTRACT_THREADS")
    try:
        return max(1, int(raw)) if raw else 1
    except ValueError:
        return 1


def random_unit_elements(p: Problem, n: int, trials: int, seed: int = 0):
    """``trials`` random unit elements on the first ``n + 32`` canonical indices.

    Trial t draws from its own generator stream spawned from ``seed``, so the
    draws do not depend on how trials are scheduled.
    """
    window = [k for k, _ in _spectrum(p, n + WINDOW_EXTRA)]
    children = np.random.SeedSequence(seed).spawn(trials)
    for ss in children:
        x = np.random.default_rng(ss).standard_normal(len(window))
        x /= np.linalg.norm(x)
        yield dict(zip(window, x.tolist()))


def empirical_worst_case(p: Problem, n: int, trials: int, seed: int = 0) -> float:
    """Largest residual error over random unit elements; never exceeds ``e(n, d)``."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    items = _spectrum(p, n + WINDOW_EXTRA)
    kept = {k for k, _ in items[:n]}
    rest = [(k, lam) for k, lam in items[n:]]
    lam_rest = np.array([float(v) for _, v in rest])
    mask = np.array([k not in kept for k, _ in items])

    def one(ss):
        x = np.random.default_rng(ss).standard_normal(len(items))
        x /= np.linalg.norm(x)
        return math.sqrt(float(np.sum(x[mask] ** 2 * lam_rest)))

    children = np.random.SeedSequence(seed).spawn(trials)
    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        results = list(pool.map(one, children))
    return max(results)


def verify_error_formula(p: Problem, n: int, trials: int = 1000, seed: int = 0, tol: float = 1e-12) -> dict:
    """Random elements stay below ``e(n, d)`` and the witness attains it."""
    e = nth_minimal_error(p, n)
    emp = empirical_worst_case(p, n, trials, seed)
    w = witness(p, n)
    w_err = residual_error(p, w, n) if w is not None else 0.0
    attained = abs(w_err - e) <= tol * max(e, 1e-300) if e > 0 else w_err == 0.0
    return {"n": n, "error": e, "empirical_max": emp, "witness_error": w_err,
            "bounded": emp <= e + tol, "attained": attained}


def xi_to_eta(p: Problem, f: dict) -> dict:
    """Re-expand a xi-basis element in the product basis (small d only)."""
    out: dict = {}
    for k, c in f.items():
        for j, v in xi_expansion(p.structure, k).items():
            out[j] = out.get(j, 0.0) + float(c) * v
    return out


def eta_norm_check(p: Problem, f: dict) -> float:
    """``| ||f||_eta^2 - ||f||_xi^2 |``, zero up to rounding because xi is orthonormal."""
    g = xi_to_eta(p, f)
    return abs(norm_sq(g) - math.fsum(float(c) ** 2 for c in f.values()))

