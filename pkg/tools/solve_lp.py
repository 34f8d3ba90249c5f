#!/usr/bin/env python3
"""Solve emitted LP files with an external MILP solver and compare objectives.

Reads the LP dialect written by the package emitter (Maximize / Subject To
/ Bounds / Binaries sections, explicit +/- signed terms) and hands the
matrices to ``scipy.optimize.milp`` (HiGHS).  Pass several files to check
that their optima agree.

Usage:
    python tools/solve_lp.py model.lp
    python tools/solve_lp.py full.lp reduced.lp --rtol 1e-6

Exit codes: 0 solved (and objectives agree), 2 parse/solve failure,
3 objectives disagree beyond tolerance.
"""

from __future__ import annotations

import argparse
import math
import sys
import time


class ParsedLP:
    def __init__(self):
        self.obj: dict[str, float] = {}
        self.rows: list[tuple[dict[str, float], str, float]] = []
        self.free: set[str] = set()
        self.binaries: set[str] = set()
        self.variables: list[str] = []
        self._seen: set[str] = set()

    def note_var(self, name: str):
        if name not in self._seen:
            self._seen.add(name)
            self.variables.append(name)


def _parse_terms(tokens: list[str], lp: ParsedLP) -> dict[str, float]:
    terms: dict[str, float] = {}
    i = 0
    while i < len(tokens):
        sign = 1.0
        if tokens[i] in "+-":
            sign = -1.0 if tokens[i] == "-" else 1.0
            i += 1
        coef = sign * float(tokens[i])
        var = tokens[i + 1]
        terms[var] = terms.get(var, 0.0) + coef
        lp.note_var(var)
        i += 2
    return terms


def parse_lp(text: str) -> ParsedLP:
    lp = ParsedLP()
    section = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        lowered = line.lower()
        if lowered in ("maximize", "minimize"):
            if lowered == "minimize":
                raise ValueError("only maximization files are emitted")
            section = "obj"
            continue
        if lowered == "subject to":
            section = "rows"
            continue
        if lowered == "bounds":
            section = "bounds"
            continue
        if lowered == "binaries":
            section = "bin"
            continue
        if lowered == "end":
            break
        if section == "obj":
            body = line.split(":", 1)[1]
            lp.obj = _parse_terms(body.split(), lp)
        elif section == "rows":
            name, body = line.split(":", 1)
            tokens = body.split()
            sense_pos = next(
                k for k, tok in enumerate(tokens) if tok in ("<=", ">=", "=")
            )
            terms = _parse_terms(tokens[:sense_pos], lp)
            lp.rows.append((terms, tokens[sense_pos], float(tokens[sense_pos + 1])))
        elif section == "bounds":
            tokens = line.split()
            if len(tokens) == 2 and tokens[1].lower() == "free":
                lp.free.add(tokens[0])
                lp.note_var(tokens[0])
            else:
                raise ValueError(f"unsupported bounds line: {line}")
        elif section == "bin":
            lp.binaries.add(line)
            lp.note_var(line)
    return lp


def solve(lp: ParsedLP, time_limit: float | None = None):
    """Returns (objective value, wall seconds). Raises on failure."""
    import numpy as np
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import csr_array

    index = {v: k for k, v in enumerate(lp.variables)}
    nvar = len(lp.variables)
    c = np.zeros(nvar)
    for var, coef in lp.obj.items():
        c[index[var]] = -coef  # milp minimizes
    data, rows_ix, cols_ix = [], [], []
    lb = np.full(len(lp.rows), -np.inf)
    ub = np.full(len(lp.rows), np.inf)
    for k, (terms, sense, rhs) in enumerate(lp.rows):
        for var, coef in terms.items():
            rows_ix.append(k)
            cols_ix.append(index[var])
            data.append(coef)
        if sense in ("<=", "="):
            ub[k] = rhs
        if sense in (">=", "="):
            lb[k] = rhs
    A = csr_array((data, (rows_ix, cols_ix)), shape=(len(lp.rows), nvar))
    integrality = np.zeros(nvar)
    var_lb = np.full(nvar, -np.inf)
    var_ub = np.full(nvar, np.inf)
    for v in lp.binaries:
        j = index[v]
        integrality[j] = 1
        var_lb[j], var_ub[j] = 0.0, 1.0
    for v in lp.variables:
        if v not in lp.binaries and v not in lp.free:
            var_lb[index[v]] = 0.0
    options = {}
    if time_limit is not None:
        options["time_limit"] = time_limit
    start = time.perf_counter()
    res = milp(
        c,
        constraints=LinearConstraint(A, lb, ub),
        integrality=integrality,
        bounds=Bounds(var_lb, var_ub),
        options=options,
    )
    elapsed = time.perf_counter() - start
    if not res.success:
        raise RuntimeError(f"solver failed: {res.message}")
    return -res.fun, elapsed


def solve_file(path: str, time_limit: float | None = None):
    with open(path, "r", encoding="ascii") as fh:
        lp = parse_lp(fh.read())
    return solve(lp, time_limit=time_limit)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("files", nargs="+", help="LP files to solve")
    ap.add_argument("--rtol", type=float, default=1e-6,
                    help="relative tolerance when comparing objectives")
    ap.add_argument("--time-limit", type=float, default=None,
                    help="per-solve time limit in seconds")
    args = ap.parse_args(argv)
    values = []
    for path in args.files:
        try:
            value, secs = solve_file(path, time_limit=args.time_limit)
        except Exception as exc:
            print(f"{path}: FAILED ({exc})", file=sys.stderr)
            return 2
        values.append(value)
        print(f"{path}: objective {value:.9g} ({secs:.3f}s)")
    if len(values) > 1:
        lo, hi = min(values), max(values)
        scale = max(abs(lo), abs(hi), 1.0)
        gap = (hi - lo) / scale
        print(f"max relative gap: {gap:.3g}")
        if not math.isfinite(gap) or gap > args.rtol:
            return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
