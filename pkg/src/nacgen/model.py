"""MILP construction for the clinical-trial planning problem.

Builds the scenario-indexed trial-scheduling model over a scenario set
and a chosen pair list (full or reduced), linearizes the conditional
equality of start decisions across indistinguishable scenario pairs, and
writes deterministic LP or MPS files.

Variables per drug i, trial j, scenario s:
  X[i,j,t,s]  trial starts at period t            (t = 1..T)
  V[i,j,t,s]  trial completed by start of t       (t = 1..T + max duration)
  Z[i,j,t,s]  trial could start at t              (same extended range)
plus per-scenario cost / revenue / terminal-revenue accounting rows and
the probability-weighted objective variable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .casestudy import CaseStudy
from .errors import NacgenError
from .scenarios import ScenarioSet, differentiator_set
from .uncertainty import ENDOGENOUS, GradualParameter, make_stage_failure_param

SENSES = ("<=", ">=", "=")


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[float, str], ...]  # (coefficient, variable)
    sense: str
    rhs: float


@dataclass
class MsspModel:
    """Solver-agnostic model: variables, named constraint groups, objective."""

    name: str
    binaries: list[str]
    continuous: list[str]
    groups: dict[str, list[Constraint]] = field(default_factory=dict)
    objective: tuple[str, tuple[tuple[float, str], ...]] = ("maximize", ())
    probabilities: list[float] = field(default_factory=list)
    pairs: list[tuple[int, int]] = field(default_factory=list)

    def constraints(self) -> list[Constraint]:
        return [c for group in self.groups.values() for c in group]

    def nac_row_count(self) -> int:
        return len(self.groups.get("nac_first", [])) + len(
            self.groups.get("nac_cond", [])
        )

    def validate(self) -> None:
        declared = set(self.binaries) | set(self.continuous)
        if len(declared) != len(self.binaries) + len(self.continuous):
            raise NacgenError("duplicate variable declarations")
        for c in self.constraints():
            if c.sense not in SENSES:
                raise NacgenError(f"row {c.name}: bad sense {c.sense!r}")
            for _, var in c.terms:
                if var not in declared:
                    raise NacgenError(f"row {c.name}: undeclared variable {var}")
        for _, var in self.objective[1]:
            if var not in declared:
                raise NacgenError(f"objective references undeclared {var}")
        if self.probabilities:
            if any(p < 0 for p in self.probabilities):
                raise NacgenError("negative scenario probability")
            total = sum(self.probabilities)
            if abs(total - 1.0) > 1e-9:
                raise NacgenError(f"scenario probabilities sum to {total}, not 1")


def drug_outcome_probability(drug, outcome: int, trial_count: int) -> float:
    """Probability of one drug's outcome: fail at trial ``outcome`` or,
    for ``outcome == trial_count + 1``, pass everything."""
    probs = drug.success_probs
    if outcome == trial_count + 1:
        p = 1.0
        for pj in probs:
            p *= pj
        return p
    if not 1 <= outcome <= trial_count:
        raise NacgenError(f"outcome {outcome} out of range")
    p = 1.0
    for pj in probs[: outcome - 1]:
        p *= pj
    return p * (1.0 - probs[outcome - 1])


def scenario_probability(case: CaseStudy, outcomes: tuple[int, ...]) -> float:
    """Product over drugs of their outcome probabilities."""
    if len(outcomes) != len(case.drugs):
        raise NacgenError("outcome vector length != drug count")
    m = case.trial_count
    p = 1.0
    for drug, o in zip(case.drugs, outcomes):
        p *= drug_outcome_probability(drug, o, m)
    return p


def scenario_probabilities(case: CaseStudy, sset: ScenarioSet) -> list[float]:
    """Per-scenario probabilities, renormalized to sum to one.

    For the full Cartesian set the raw values already sum to one and the
    renormalization is a no-op up to rounding.
    """
    raw = [scenario_probability(case, s.outcomes) for s in sset.scenarios]
    total = sum(raw)
    if total <= 0:
        raise NacgenError("scenario probabilities sum to zero")
    return [p / total for p in raw]


def count_nacs(
    pair_count: int, n_drugs: int, n_trials: int, horizon: int, n_scenarios: int
) -> int:
    """Rows in the two NAC groups for the given sizes.

    Each pair gets two one-sided rows per (drug, trial, period) with the
    period running over 2..horizon, plus one first-period equality per
    (scenario, drug).
    """
    if min(pair_count, n_drugs, n_trials, horizon, n_scenarios) <= 0:
        raise NacgenError("count_nacs arguments must be positive")
    return (
        pair_count * 2 * n_drugs * n_trials * (horizon - 1)
        + n_scenarios * n_drugs
    )


def params_for_case(case: CaseStudy) -> list[GradualParameter]:
    """One stage-revelation parameter per drug (trial = revelation stage)."""
    return [make_stage_failure_param(case.trial_count, i) for i in range(len(case.drugs))]


def _check_compatible(case: CaseStudy, sset: ScenarioSet) -> None:
    m = case.trial_count
    if len(sset.params) != len(case.drugs):
        raise NacgenError(
            f"scenario set has {len(sset.params)} parameters, "
            f"case has {len(case.drugs)} drugs"
        )
    reference = make_stage_failure_param(m)
    for p in sset.params:
        if p.kind != ENDOGENOUS:
            raise NacgenError(
                "model emission covers decision-dependent parameters only; "
                f"parameter {p.id} is {p.kind}"
            )
        if p.chain_length != m or p.outcome_count != m + 1:
            raise NacgenError(
                f"parameter {p.id} has {p.chain_length} events / "
                f"{p.outcome_count} outcomes, case expects {m} / {m + 1}"
            )
        if p.table != reference.table:
            raise NacgenError(
                f"parameter {p.id} is not a stage-revelation chain"
            )


def build_model(
    case: CaseStudy, sset: ScenarioSet, pairs: list[tuple[int, int]]
) -> MsspModel:
    """Instantiate all constraint groups over ``sset`` and ``pairs``."""
    n = len(sset)
    if n == 0:
        raise NacgenError("cannot build a model over an empty scenario set")
    _check_compatible(case, sset)
    for r, s in pairs:
        if r == s:
            raise NacgenError(f"pair ({r}, {s}) references one scenario twice")
        if not (0 <= r < n and 0 <= s < n):
            raise NacgenError(f"pair ({r}, {s}) out of range for {n} scenarios")

    T = case.horizon
    m = case.trial_count
    drugs = case.drugs
    max_dur = max(t for d in drugs for t in d.durations)
    T_ext = T + max_dur
    scen = range(n)
    tri = range(1, m + 1)

    def X(i, j, t, s):
        return f"X_{i + 1}_{j}_{t}_{s}"

    def V(i, j, t, s):
        return f"V_{i + 1}_{j}_{t}_{s}"

    def Z(i, j, t, s):
        return f"Z_{i + 1}_{j}_{t}_{s}"

    binaries = []
    for i in range(len(drugs)):
        for j in tri:
            for t in range(1, T + 1):
                binaries.extend(X(i, j, t, s) for s in scen)
    for fam in (V, Z):
        for i in range(len(drugs)):
            for j in tri:
                for t in range(1, T_ext + 1):
                    binaries.extend(fam(i, j, t, s) for s in scen)
    continuous = (
        [f"Cst_{s}" for s in scen]
        + [f"Rv_{s}" for s in scen]
        + [f"FRev_{s}" for s in scen]
        + ["ENPV"]
    )

    probs = scenario_probabilities(case, sset)
    groups: dict[str, list[Constraint]] = {}

    def add(group, name, terms, sense, rhs=0.0):
        groups.setdefault(group, []).append(
            Constraint(name, tuple(terms), sense, float(rhs))
        )

    # Objective variable: ENPV = sum_s p_s (Rv_s + FRev_s - Cst_s).
    terms = [(1.0, "ENPV")]
    for s in scen:
        terms += [
            (-probs[s], f"Rv_{s}"),
            (-probs[s], f"FRev_{s}"),
            (probs[s], f"Cst_{s}"),
        ]
    add("enpv", "enpv", terms, "=")

    # Completion recursion: V(t) = V(t-1) + X(t - duration).
    for i, d in enumerate(drugs):
        for j in tri:
            dur = d.durations[j - 1]
            for t in range(1, T_ext + 1):
                for s in scen:
                    terms = [(1.0, V(i, j, t, s))]
                    if t > 1:
                        terms.append((-1.0, V(i, j, t - 1, s)))
                    if 1 <= t - dur <= T:
                        terms.append((-1.0, X(i, j, t - dur, s)))
                    add("completion", f"comp_{i + 1}_{j}_{t}_{s}", terms, "=")

    # First-trial availability: Z(1) = 1 - X(1), then Z(t) = Z(t-1) - X(t).
    for i in range(len(drugs)):
        for s in scen:
            add(
                "avail_init",
                f"zinit_{i + 1}_{s}",
                [(1.0, Z(i, 1, 1, s)), (1.0, X(i, 1, 1, s))],
                "=",
                1.0,
            )
    for i in range(len(drugs)):
        for t in range(2, T_ext + 1):
            for s in scen:
                terms = [(1.0, Z(i, 1, t, s)), (-1.0, Z(i, 1, t - 1, s))]
                if t <= T:
                    terms.append((1.0, X(i, 1, t, s)))
                add("avail_first", f"zfirst_{i + 1}_{t}_{s}", terms, "=")

    # Later trials become available when the predecessor completes:
    # Z(i,j,t) = Z(i,j,t-1) + X(i,j-1,t - dur(j-1)) - X(i,j,t).
    for i, d in enumerate(drugs):
        for j in range(2, m + 1):
            prev_dur = d.durations[j - 2]
            for t in range(1, T_ext + 1):
                for s in scen:
                    terms = [(1.0, Z(i, j, t, s))]
                    if t > 1:
                        terms.append((-1.0, Z(i, j, t - 1, s)))
                    if 1 <= t - prev_dur <= T:
                        terms.append((-1.0, X(i, j - 1, t - prev_dur, s)))
                    if t <= T:
                        terms.append((1.0, X(i, j, t, s)))
                    add("avail_later", f"zlater_{i + 1}_{j}_{t}_{s}", terms, "=")

    # Each trial starts at most once.
    for i in range(len(drugs)):
        for j in tri:
            for s in scen:
                terms = [(1.0, X(i, j, t, s)) for t in range(1, T + 1)]
                add("single_start", f"once_{i + 1}_{j}_{s}", terms, "<=", 1.0)

    # A trial cannot start before its predecessor has completed.
    for i in range(len(drugs)):
        for j in range(2, m + 1):
            for t in range(1, T_ext + 1):
                for s in scen:
                    terms = [
                        (1.0, X(i, j, tt, s)) for tt in range(1, min(t, T) + 1)
                    ]
                    terms.append((-1.0, V(i, j - 1, t, s)))
                    add("precedence", f"prec_{i + 1}_{j}_{t}_{s}", terms, "<=")

    # Resource caps over running trials; rows with no candidate starts
    # are dropped.
    for r, cap in enumerate(case.resource_caps):
        for t in range(1, T_ext + 1):
            for s in scen:
                terms = []
                for i, d in enumerate(drugs):
                    for j in tri:
                        need = d.resource_needs[r][j - 1]
                        if need == 0:
                            continue
                        lo = max(1, t - d.durations[j - 1] + 1)
                        hi = min(t, T)
                        terms += [
                            (need, X(i, j, tt, s)) for tt in range(lo, hi + 1)
                        ]
                if terms:
                    add("resource", f"res_{r + 1}_{t}_{s}", terms, "<=", cap)

    # Before anything is revealed all scenarios agree on the first start.
    for i in range(len(drugs)):
        for s in scen:
            terms = [(1.0, X(i, 1, 1, s)), (-1.0, X(i, 1, 1, 0))]
            add("nac_first", f"fp_{i + 1}_{s}", terms, "=")

    # Start decisions of an indistinguishable pair may differ only once a
    # differentiating trial has completed:
    #   -sum V(d,k,t,s) <= X(i,j,t,s) - X(i,j,t,sp) <= sum V(d,k,t,s)
    # summed over the pair's differentiator events (d, k).
    for (s, sp) in pairs:
        diff = sorted(differentiator_set(sset, s, sp).events)
        gate = [(d, k) for d, k in diff]
        for i in range(len(drugs)):
            for j in tri:
                for t in range(2, T + 1):
                    base = [(1.0, X(i, j, t, s)), (-1.0, X(i, j, t, sp))]
                    lo = base + [(1.0, V(d, k, t, s)) for d, k in gate]
                    add("nac_cond", f"naclo_{i + 1}_{j}_{t}_{s}_{sp}", lo, ">=")
                    hi = base + [(-1.0, V(d, k, t, s)) for d, k in gate]
                    add("nac_cond", f"nachi_{i + 1}_{j}_{t}_{s}_{sp}", hi, "<=")

    # Cost accounting.
    for s in scen:
        terms = [(1.0, f"Cst_{s}")]
        for i, d in enumerate(drugs):
            for j in tri:
                cost = d.costs[j - 1]
                for t in range(1, T + 1):
                    terms.append((-case.discount(t) * cost, X(i, j, t, s)))
        add("cost", f"cost_{s}", terms, "=")

    # Revenue accounting: booked when the next-to-last trial starts, with
    # delay losses while late trials sit ready and patent-life losses tied
    # to the last trial's completion time.
    for s in scen:
        terms = [(1.0, f"Rv_{s}")]
        for i, d in enumerate(drugs):
            for t in range(1, T + 1):
                terms.append((-d.max_revenue, X(i, m - 1, t, s)))
                terms.append((d.delay_loss, Z(i, m - 1, t, s)))
                terms.append((d.delay_loss, Z(i, m, t, s)))
                terms.append(
                    (d.patent_loss * (t + d.durations[m - 1]), X(i, m, t, s))
                )
        add("revenue", f"rev_{s}", terms, "=")

    # Terminal revenue: open positions at the horizon plus still-running
    # trials, discounted by the remaining-success factor f.
    def f_factor(d, j):
        denom = d.max_revenue - d.patent_loss * T
        remaining_cost = sum(d.costs[j - 1 :])
        return 0.9 * (denom - remaining_cost) / denom

    for s in scen:
        terms = [(1.0, f"FRev_{s}")]
        for i, d in enumerate(drugs):
            tail = [sum(d.durations[j - 1 :]) for j in range(1, m + 1)]
            for j in tri:
                rev_open = d.max_revenue - d.patent_loss * (T + tail[j - 1])
                terms.append((-rev_open * f_factor(d, j), Z(i, j, T, s)))
            for j in range(1, m):
                f_next = f_factor(d, j + 1)
                for t in range(T - d.durations[j - 1] + 1, T + 1):
                    if t < 1:
                        continue
                    rev_run = d.max_revenue - d.patent_loss * (t + tail[j - 1])
                    terms.append((-rev_run * f_next, X(i, j, t, s)))
        add("free_revenue", f"frev_{s}", terms, "=")

    model = MsspModel(
        name=f"{case.name}_{n}scen_{len(pairs)}pairs",
        binaries=binaries,
        continuous=continuous,
        groups=groups,
        objective=("maximize", ((1.0, "ENPV"),)),
        probabilities=probs,
        pairs=sorted(pairs),
    )
    expected = count_nacs(len(pairs), len(drugs), m, T, n) if pairs else n * len(drugs)
    if model.nac_row_count() != expected:
        raise NacgenError(
            f"NAC rows {model.nac_row_count()} != expected {expected}"
        )
    model.validate()
    return model


def _fmt(x: float) -> str:
    """Fixed six-significant-digit coefficient formatting."""
    return format(x, ".6g")


def lp_text(model: MsspModel) -> str:
    """Deterministic LP rendering; identical models give identical bytes."""
    model.validate()
    out = [f"\\ model {model.name}", "Maximize"]
    obj = " ".join(
        f"{'+' if c >= 0 else '-'} {_fmt(abs(c))} {v}" for c, v in model.objective[1]
    )
    out.append(f" obj: {obj}")
    out.append("Subject To")
    for c in model.constraints():
        body = " ".join(
            f"{'+' if coef >= 0 else '-'} {_fmt(abs(coef))} {var}"
            for coef, var in c.terms
        )
        out.append(f" {c.name}: {body} {c.sense} {_fmt(c.rhs)}")
    out.append("Bounds")
    for v in model.continuous:
        out.append(f" {v} free")
    out.append("Binaries")
    for v in model.binaries:
        out.append(f" {v}")
    out.append("End")
    return "\n".join(out) + "\n"


def mps_text(model: MsspModel) -> str:
    """Deterministic fixed-section MPS rendering (duplicate terms merged)."""
    model.validate()
    rows: list[tuple[str, str]] = []  # (type, name)
    sense_code = {"<=": "L", ">=": "G", "=": "E"}
    by_var: dict[str, list[tuple[str, float]]] = {v: [] for v in model.binaries}
    by_var.update({v: [] for v in model.continuous})
    for c, v in model.objective[1]:
        by_var[v].append(("obj", c))
    rhs: list[tuple[str, float]] = []
    for c in model.constraints():
        rows.append((sense_code[c.sense], c.name))
        merged: dict[str, float] = {}
        for coef, var in c.terms:
            merged[var] = merged.get(var, 0.0) + coef
        for var, coef in merged.items():
            if coef != 0.0:
                by_var[var].append((c.name, coef))
        if c.rhs != 0.0:
            rhs.append((c.name, c.rhs))
    out = [f"NAME          {model.name}", "OBJSENSE", "    MAX", "ROWS", " N  obj"]
    out += [f" {t}  {name}" for t, name in rows]
    out.append("COLUMNS")
    out.append("    MARKER                 'MARKER'                 'INTORG'")
    for v in model.binaries:
        for row, coef in by_var[v]:
            out.append(f"    {v}  {row}  {_fmt(coef)}")
    out.append("    MARKER                 'MARKER'                 'INTEND'")
    for v in model.continuous:
        for row, coef in by_var[v]:
            out.append(f"    {v}  {row}  {_fmt(coef)}")
    out.append("RHS")
    for name, value in rhs:
        out.append(f"    RHS  {name}  {_fmt(value)}")
    out.append("BOUNDS")
    for v in model.binaries:
        out.append(f" UP BND  {v}  1")
    for v in model.continuous:
        out.append(f" FR BND  {v}")
    out.append("ENDATA")
    return "\n".join(out) + "\n"


def emit_lp(model: MsspModel, path: str) -> None:
    if not model.probabilities:
        raise NacgenError("model has no scenarios")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(lp_text(model))


def emit_mps(model: MsspModel, path: str) -> None:
    if not model.probabilities:
        raise NacgenError("model has no scenarios")
    with open(path, "w", encoding="ascii") as fh:
        fh.write(mps_text(model))
