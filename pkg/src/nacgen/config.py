"""Experiment configuration: strict YAML schema and builders.

One document drives every subcommand.  Schema (unknown keys rejected):

    parameters:                # required, list of parameter specs
      - kind: stage_failure    # stage_failure | split_chain
        stages: 3              # stage_failure only
        count: 2               # optional replication, default 1
      - kind: split_chain
        partitions: [[[1,2,3,4]], [[1,2],[3,4]], [[1],[2],[3],[4]]]
        schedule: [1, 2]       # optional; makes the parameter exogenous
    scenarios:                 # required
      source: full             # full | sample | explicit | file
      count: 12                # sample only
      seed: 1                  # sample only; repetition r uses seed + r
      outcomes: [[1, 1], [4, 3]]   # explicit only
      path: scenarios.txt      # file only
    case_study: two-drug-extended  # optional: builtin id, file path, or
                                   # inline mapping
    repetitions: 30            # optional, default 1
    output_dir: out            # optional, default "out"
"""

from __future__ import annotations

from dataclasses import dataclass

import yaml

from .casestudy import CaseStudy, case_from_dict, load_case
from .errors import ConfigError, NacgenError
from .scenarios import (
    ScenarioSet,
    explicit_set,
    full_cartesian,
    load_scenarios,
    sample_scenarios,
)
from .uncertainty import (
    GradualParameter,
    make_split_chain_param,
    make_stage_failure_param,
)


@dataclass
class ScenarioSpec:
    source: str
    count: int | None = None
    seed: int | None = None
    outcomes: list[list[int]] | None = None
    path: str | None = None


@dataclass
class ExperimentConfig:
    params: list[GradualParameter]
    scenarios: ScenarioSpec
    case: CaseStudy | None
    repetitions: int
    output_dir: str


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise ConfigError(f"{where}.{key}" if where else key, "missing")
    return data[key]


def _reject_unknown(data: dict, known: set[str], where: str):
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(where or ".", f"unknown keys {unknown}")


def _build_params(entries, where="parameters") -> list[GradualParameter]:
    if not isinstance(entries, list) or not entries:
        raise ConfigError(where, "must be a non-empty list")
    params: list[GradualParameter] = []
    for idx, entry in enumerate(entries):
        here = f"{where}[{idx}]"
        if not isinstance(entry, dict):
            raise ConfigError(here, "must be a mapping")
        kind = _require(entry, "kind", here)
        if kind == "stage_failure":
            _reject_unknown(entry, {"kind", "stages", "count"}, here)
            stages = int(_require(entry, "stages", here))
            count = int(entry.get("count", 1))
            if count < 1:
                raise ConfigError(f"{here}.count", "must be >= 1")
            for _ in range(count):
                params.append(make_stage_failure_param(stages, len(params)))
        elif kind == "split_chain":
            _reject_unknown(entry, {"kind", "partitions", "schedule", "count"}, here)
            partitions = _require(entry, "partitions", here)
            schedule = entry.get("schedule")
            count = int(entry.get("count", 1))
            for _ in range(count):
                try:
                    params.append(
                        make_split_chain_param(
                            partitions, param_id=len(params), schedule=schedule
                        )
                    )
                except NacgenError as exc:
                    raise ConfigError(here, str(exc)) from exc
        else:
            raise ConfigError(f"{here}.kind", f"unknown kind {kind!r}")
    return params


def _build_scenario_spec(data, where="scenarios") -> ScenarioSpec:
    if not isinstance(data, dict):
        raise ConfigError(where, "must be a mapping")
    source = _require(data, "source", where)
    if source == "full":
        _reject_unknown(data, {"source"}, where)
        return ScenarioSpec("full")
    if source == "sample":
        _reject_unknown(data, {"source", "count", "seed"}, where)
        return ScenarioSpec(
            "sample",
            count=int(_require(data, "count", where)),
            seed=int(_require(data, "seed", where)),
        )
    if source == "explicit":
        _reject_unknown(data, {"source", "outcomes"}, where)
        outcomes = _require(data, "outcomes", where)
        return ScenarioSpec("explicit", outcomes=[list(v) for v in outcomes])
    if source == "file":
        _reject_unknown(data, {"source", "path"}, where)
        return ScenarioSpec("file", path=str(_require(data, "path", where)))
    raise ConfigError(f"{where}.source", f"unknown source {source!r}")


def config_from_dict(data: dict) -> ExperimentConfig:
    if not isinstance(data, dict):
        raise ConfigError(".", "config document must be a mapping")
    _reject_unknown(
        data,
        {"parameters", "scenarios", "case_study", "repetitions", "output_dir"},
        "",
    )
    params = _build_params(_require(data, "parameters", ""))
    spec = _build_scenario_spec(_require(data, "scenarios", ""))
    case = None
    if "case_study" in data and data["case_study"] is not None:
        raw = data["case_study"]
        try:
            if isinstance(raw, dict):
                case = case_from_dict(raw, name="inline")
            else:
                case = load_case(str(raw))
        except (NacgenError, OSError) as exc:
            raise ConfigError("case_study", str(exc)) from exc
    repetitions = int(data.get("repetitions", 1))
    if repetitions < 1:
        raise ConfigError("repetitions", "must be >= 1")
    output_dir = str(data.get("output_dir", "out"))
    cfg = ExperimentConfig(params, spec, case, repetitions, output_dir)
    _validate_cross(cfg)
    return cfg


def _validate_cross(cfg: ExperimentConfig) -> None:
    if cfg.case is not None:
        if len(cfg.params) != len(cfg.case.drugs):
            raise ConfigError(
                "case_study",
                f"case has {len(cfg.case.drugs)} drugs but config declares "
                f"{len(cfg.params)} parameters",
            )


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh.read())
    return config_from_dict(data if data is not None else {})


def build_scenarios(
    cfg: ExperimentConfig, seed_override: int | None = None, repetition: int = 0
) -> ScenarioSet:
    """Realize the configured scenario set.

    For sampled sources, repetition ``r`` draws with ``seed + r`` (after
    any command-line override of the seed), which makes sweeps replayable
    from the single configured value.
    """
    spec = cfg.scenarios
    try:
        if spec.source == "full":
            return full_cartesian(cfg.params)
        if spec.source == "sample":
            seed = spec.seed if seed_override is None else seed_override
            return sample_scenarios(cfg.params, spec.count, seed + repetition)
        if spec.source == "explicit":
            return explicit_set(cfg.params, [tuple(v) for v in spec.outcomes])
        if spec.source == "file":
            return load_scenarios(cfg.params, spec.path)
    except NacgenError as exc:
        raise ConfigError("scenarios", str(exc)) from exc
    raise ConfigError("scenarios.source", f"unknown source {spec.source!r}")
