"""``symtract`` command line front end.

Every command reads one JSON config (``--config``) and writes a table as CSV
or JSON lines. Each row carries the config hash and the value mode so output
files can be traced back to their inputs.

Exit codes: 0 ok, 1 failed invariant, 2 config error, 3 infinite/divergent result.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from . import spectrum as sp
from . import tractability as tr
from .complexity import (Criterion, Problem, closed_form_finite_rank, exact_antisymmetric_count_detailed,
                         info_complexity_detailed, initial_error, nth_minimal_error)
from .enumeration import InfiniteCount, brute_force_count, count_above
from .optimal import empirical_worst_case, residual_error, witness
from .spectrum import DivergenceSignal
from .symmetry import Group, SymmetryStructure, format_index, project, xi_expansion_exact

EXIT_OK, EXIT_INVARIANT, EXIT_CONFIG, EXIT_INFINITE = 0, 1, 2, 3
COMMANDS = ("complexity", "errors", "classify", "verify", "simulate", "project")


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def config_hash(cfg: dict) -> str:
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _number(x, mode):
    """Config numbers: ints, floats or strings like "1/3"."""
    if isinstance(x, bool):
        raise ConfigError(f"expected a number, got {x!r}")
    try:
        if mode == sp.RATIONAL:
            return Fraction(x) if isinstance(x, (int, str)) else sp.to_fraction(x)
        return float(Fraction(x)) if isinstance(x, str) else float(x)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise ConfigError(f"bad number {x!r}: {exc}") from None


def parse_sequence(spec: dict, mode: str) -> sp.EigenSequence:
    if not isinstance(spec, dict) or "family" not in spec:
        raise ConfigError("'lambda' must be an object with a 'family' key")
    fam = spec["family"]
    try:
        if fam == "finite_rank":
            return sp.FiniteRank([_number(v, mode) for v in spec["values"]], mode=mode)
        if fam == "explicit":
            tail = spec.get("tail", "zero")
            if isinstance(tail, dict):
                (key, val), = tail.items()
                tail = (key, float(Fraction(val)) if isinstance(val, str) else val)
            return sp.Explicit(tuple(_number(v, mode) for v in spec["values"]), tail, mode=mode)
        if fam == "power_decay":
            return sp.PowerDecay(float(Fraction(str(spec["alpha"]))), mode=mode)
        if fam == "shifted_power":
            return sp.ShiftedPower(float(Fraction(str(spec["beta"]))), mode=mode)
        if fam == "geometric":
            return sp.Geometric(_number(spec["ratio"], mode), _number(spec.get("scale", 1), mode), mode=mode)
        if fam == "log_decay":
            return sp.LogDecay(mode=mode)
    except KeyError as exc:
        raise ConfigError(f"family {fam!r} needs parameter {exc}") from None
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid {fam!r} sequence: {exc}") from None
    raise ConfigError(f"unknown family {fam!r}")


def parse_schedule(spec) -> tr.StructureSchedule:
    if isinstance(spec, str):
        spec = {"name": spec}
    if not isinstance(spec, dict) or "name" not in spec:
        raise ConfigError("'schedule' must be a name or an object with 'name'")
    args = {k: v for k, v in spec.items() if k != "name"}
    factory = tr.SCHEDULES.get(spec["name"])
    if factory is None:
        raise ConfigError(f"unknown schedule {spec['name']!r}; choose from {sorted(tr.SCHEDULES)}")
    try:
        return factory(**args)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"schedule {spec['name']!r}: {exc}") from None


def parse_structure(spec: dict) -> SymmetryStructure:
    try:
        groups = tuple(Group(g["indices"], g["kind"]) for g in spec.get("groups", []))
        return SymmetryStructure(int(spec["d"]), groups)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid structure: {exc}") from None


class Setup:
    def __init__(self, cfg: dict):
        if not isinstance(cfg, dict):
            raise ConfigError("config must be a JSON object")
        self.cfg = cfg
        self.mode = cfg.get("mode", sp.FLOAT)
        if self.mode not in sp.MODES:
            raise ConfigError(f"mode must be one of {sp.MODES}")
        self.hash = config_hash(cfg)
        self.seq = parse_sequence(cfg.get("lambda"), self.mode) if "lambda" in cfg else None
        self.schedule = parse_schedule(cfg["schedule"]) if "schedule" in cfg else None
        self.fixed = parse_structure(cfg["structure"]) if "structure" in cfg else None
        self.horizon = int(cfg.get("horizon", 10**6))

    def need_seq(self):
        if self.seq is None:
            raise ConfigError("config needs 'lambda'")
        return self.seq

    def dims(self) -> list:
        if self.fixed is not None:
            return [self.fixed.d]
        ds = self.cfg.get("d")
        if ds is None:
            raise ConfigError("config needs 'd' (list of dimensions)")
        ds = ds if isinstance(ds, list) else [ds]
        if not all(isinstance(d, int) and d >= 1 for d in ds):
            raise ConfigError("'d' entries must be positive integers")
        return ds

    def structure(self, d: int) -> SymmetryStructure:
        if self.fixed is not None:
            return self.fixed
        if self.schedule is None:
            raise ConfigError("config needs 'schedule' or 'structure'")
        return self.schedule.structure(d)

    def numbers(self, key, default=None) -> list:
        vals = self.cfg.get(key, default)
        if vals is None:
            raise ConfigError(f"config needs {key!r}")
        vals = vals if isinstance(vals, list) else [vals]
        return [_number(v, self.mode) for v in vals]

    def ints(self, key, default=None) -> list:
        vals = self.cfg.get(key, default)
        if vals is None:
            raise ConfigError(f"config needs {key!r}")
        vals = vals if isinstance(vals, list) else [vals]
        if not all(isinstance(v, int) and v >= 0 for v in vals):
            raise ConfigError(f"{key!r} entries must be non-negative integers")
        return vals

    def criteria(self) -> list:
        vals = self.cfg.get("criterion", "absolute")
        vals = vals if isinstance(vals, list) else [vals]
        try:
            return [Criterion(v) for v in vals]
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _threads() -> int:
    raw = os.environ.get("SYMTRACT_THREADS", "")
    try:
        return max(1, int(raw)) if raw else (os.cpu_count() or 1)
    except ValueError:
        return 1


def _pmap(fn, items):
    """Order-preserving map, parallel up to SYMTRACT_THREADS workers."""
    items = list(items)
    workers = min(_threads(), len(items)) or 1
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _fmt(x):
    if isinstance(x, InfiniteCount) or (isinstance(x, float) and math.isinf(x)):
        return "inf"
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    return x


def _unit_ones(seq) -> int | None:
    """m if seq is m unit eigenvalues followed by zeros."""
    if isinstance(seq, sp.FiniteRank):
        vals = [seq.eigenvalue(i) for i in range(1, int(seq.positive_count()) + 1)]
        if vals and all(v == 1 for v in vals):
            return len(vals)
    return None


def _kind_of(structure: SymmetryStructure) -> str | None:
    if not structure.groups:
        return "entire"
    if len(structure.groups) == 1 and structure.groups[0].size == structure.d:
        return structure.groups[0].kind.value
    return None


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_complexity(st: Setup):
    seq = st.need_seq()
    jobs = [(d, e, c) for d in st.dims() for e in st.numbers("eps") for c in st.criteria()]

    def run(job):
        d, eps, crit = job
        s = st.structure(d)
        p = Problem(s, seq)
        res = info_complexity_detailed(p, eps, crit, st.horizon)
        out = [("count", res.count, res.ties)]
        kind = _kind_of(s)
        if kind == "antisymmetric" and crit is Criterion.ABSOLUTE:
            rec = exact_antisymmetric_count_detailed(seq, d, eps, st.horizon)
            out.append(("recursion", rec.count, rec.ties))
        m = _unit_ones(seq)
        if m is not None and kind is not None and crit is Criterion.ABSOLUTE and eps < 1:
            out.append(("closed_form", closed_form_finite_rank(m, d, kind, eps), 0))
        agree = len({float(n) for _, n, _ in out}) == 1
        rows = []
        for method, n, ties in out:
            reason = getattr(n, "reason", "")
            rows.append({"d": d, "eps": _fmt(eps), "criterion": crit.value, "n": _fmt(n), "method": method,
                         "agreement": _fmt(agree), "ties": ties, "note": reason})
        return rows

    rows = [r for group in _pmap(run, jobs) for r in group]
    status = EXIT_INFINITE if any(r["n"] == "inf" for r in rows) else EXIT_OK
    if any(r["agreement"] == "false" for r in rows):
        status = EXIT_INVARIANT
    return rows, status


def cmd_errors(st: Setup):
    seq = st.need_seq()
    ns = st.ints("n")

    def run(d):
        p = Problem(st.structure(d), seq)
        init = initial_error(p)
        return [{"d": d, "n": n, "error": _fmt(nth_minimal_error(p, n)), "initial_error": _fmt(init)} for n in ns]

    rows = [r for group in _pmap(run, st.dims()) for r in group]
    return rows, EXIT_OK


def cmd_classify(st: Setup):
    seq = st.need_seq()
    if st.schedule is None:
        raise ConfigError("classify needs a 'schedule'")
    grid = [float(Fraction(str(t))) for t in st.cfg.get("tau_grid", tr.DEFAULT_TAU_GRID)]
    rows = []
    for crit in st.criteria():
        try:
            rep = tr.classify(st.schedule, seq, crit, grid)
        except tr.UnknownAsymptotics as exc:
            raise ConfigError(str(exc)) from None
        rows.append({"schedule": st.schedule.name, "criterion": crit.value, "verdict": rep.verdict,
                     "clause": rep.clause, "refutes": ";".join(rep.refutes), "report": rep.to_json()})
    return rows, EXIT_OK


def cmd_simulate(st: Setup):
    seq = st.need_seq()
    ns = st.ints("n")
    trials = int(st.cfg.get("trials", 1000))
    seed = int(st.cfg.get("seed", 0))
    if trials < 1:
        raise ConfigError("'trials' must be >= 1")
    rows = []
    for d in st.dims():
        p = Problem(st.structure(d), seq)
        for n in ns:
            e = nth_minimal_error(p, n)
            emp = empirical_worst_case(p, n, trials, seed)
            w = witness(p, n)
            rows.append({"d": d, "n": n, "error": _fmt(e), "empirical_max": _fmt(emp),
                         "witness": format_index(next(iter(w))) if w else "",
                         "witness_error": _fmt(residual_error(p, w, n) if w else 0.0),
                         "bounded": _fmt(emp <= e + 1e-12)})
    status = EXIT_OK if all(r["bounded"] == "true" for r in rows) else EXIT_INVARIANT
    return rows, status


def cmd_project(st: Setup):
    if st.fixed is None:
        raise ConfigError("project needs an explicit 'structure'")
    idx = st.cfg.get("indices")
    if not isinstance(idx, list) or not idx:
        raise ConfigError("project needs a non-empty 'indices' list")
    rows = []
    for k in idx:
        try:
            factor_sq, coeffs = xi_expansion_exact(st.fixed, k)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for j in sorted(coeffs):
            c = coeffs[j]
            val = c if st.mode == sp.RATIONAL else float(c) * math.sqrt(factor_sq)
            rows.append({"k": format_index(k), "j": format_index(j), "factor_sq": _fmt(factor_sq),
                         "coefficient": _fmt(val)})
    return rows, EXIT_OK


def _verify_battery(st: Setup) -> list:
    """Desk-scale oracle suites; each yields (suite, case, ok, detail)."""
    out = []
    fams = {
        "finite_rank_ones": sp.FiniteRank([1, 1, 1], mode=sp.RATIONAL),
        "power_decay_1": sp.PowerDecay(1.0, mode=sp.RATIONAL),
        "power_decay_half": sp.PowerDecay(0.5),
        "geometric": sp.Geometric(Fraction(1, 2), Fraction(1), mode=sp.RATIONAL),
    }
    if st.seq is not None:
        fams = {"config": st.seq}
    structures = {
        "entire": lambda d: SymmetryStructure.entire(d),
        "sym": SymmetryStructure.fully_symmetric,
        "asym": SymmetryStructure.fully_antisymmetric,
        "mixed": lambda d: SymmetryStructure.blocks_of([max(d - 1, 1)], "antisymmetric", free=1 if d > 1 else 0),
    }
    eps_list = [Fraction(1, 2), Fraction(1, 5), Fraction(1, 10)]
    for fname, seq in fams.items():
        for sname, mk in structures.items():
            for d in range(1, 4):
                s = mk(d)
                for eps in eps_list:
                    e = eps if seq.mode == sp.RATIONAL else float(eps)
                    n_fast = count_above(s, seq, e)
                    n_brute, complete = brute_force_count(s, seq, e, 12)
                    if complete:
                        out.append(("brute_vs_count", f"{fname}/{sname}/d={d}/eps={eps}", n_fast == n_brute,
                                    f"{n_fast} vs {n_brute}"))
                    if sname == "asym":
                        rec = exact_antisymmetric_count_detailed(seq, d, e).count
                        out.append(("recursion_vs_count", f"{fname}/d={d}/eps={eps}", rec == n_fast,
                                    f"{rec} vs {n_fast}"))
    # projector algebra, exact
    for kind in ("symmetric", "antisymmetric"):
        for d in (2, 3):
            s = SymmetryStructure(d, (Group(range(1, d + 1), kind),))
            for j in [(1,) * d, tuple(range(1, d + 1)), (2, 1) + (1,) * (d - 2)]:
                once = project(s, 0, {j: Fraction(1)})
                twice = project(s, 0, once)
                out.append(("projector_idempotent", f"{kind}/d={d}/j={j}", once == twice, ""))
    # appendix inequality
    for mu, d, V in [([1, Fraction(1, 2), Fraction(1, 4)], 3, 1), ([1, 1, Fraction(1, 3)], 2, 0),
                     ([2, 1, Fraction(1, 2), 0], 3, 2)]:
        r = tr.verify_appendix_inequality(mu, d, V)
        ok = r["holds"] and (r["equal"] if V == 0 else True)
        out.append(("appendix_inequality", f"mu={[str(m) for m in mu]}/d={d}/V={V}", ok, f"{r['lhs']} <= {r['rhs']}"))
    # constructor rejects increasing eigenvalues
    try:
        sp.Explicit((0.5, 1.0))
        out.append(("constructor_rejection", "increasing values", False, "accepted"))
    except ValueError as exc:
        out.append(("constructor_rejection", "increasing values", True, str(exc)))
    # boundary ties in float mode are flagged, not counted
    fixture = sp.FiniteRank([1.0, 0.25])
    res = info_complexity_detailed(Problem(SymmetryStructure.fully_symmetric(2), fixture), 0.5)
    out.append(("float_tie_flag", "sym d=2 lam=(1,1/4) eps=1/2", res.ties > 0 and res.count == 1,
                f"count={res.count} ties={res.ties}"))
    return out


def cmd_verify(st: Setup):
    rows = [{"suite": s, "case": c, "status": "pass" if ok else "fail", "detail": det}
            for s, c, ok, det in _verify_battery(st)]
    status = EXIT_OK if all(r["status"] == "pass" for r in rows) else EXIT_INVARIANT
    return rows, status


HANDLERS = {"complexity": cmd_complexity, "errors": cmd_errors, "classify": cmd_classify,
            "verify": cmd_verify, "simulate": cmd_simulate, "project": cmd_project}


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def render(rows: list, fmt: str, cfg_hash: str, mode: str) -> str:
    rows = [{**r, "config_hash": cfg_hash, "mode": mode} for r in rows]
    if fmt == "json":
        return "".join(json.dumps(r, sort_keys=False) + "\n" for r in rows)
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="symtract",
                                 description="Complexity of (anti-)symmetric tensor product problems.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON config file")
    ap.add_argument("--out", help="output file (default: stdout)")
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
        st = Setup(cfg)
        rows, status = HANDLERS[args.command](st)
    except (OSError, json.JSONDecodeError, ConfigError) as exc:
        print(f"symtract: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DivergenceSignal as exc:
        print(f"symtract: divergent: {exc}", file=sys.stderr)
        return EXIT_INFINITE
    text = render(rows, args.format, st.hash, st.mode)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
