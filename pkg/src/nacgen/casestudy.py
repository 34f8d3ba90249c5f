"""Clinical-trial planning case studies and their parameter files.

Each case describes a portfolio of drugs going through a fixed number of
ordered trials.  Per drug: trial durations, success probabilities, costs,
resource needs, the maximum revenue, and the two loss coefficients
(patent-life loss per period, delay loss per waiting period).
"""

from __future__ import annotations

import importlib.resources
from dataclasses import dataclass, field

import yaml

from .errors import NacgenError

BUILTIN_CASES = (
    "two-drug",
    "two-drug-extended",
    "three-drug",
    "four-drug",
    "five-drug",
    "six-drug",
)


@dataclass(frozen=True)
class Drug:
    name: str
    durations: tuple[int, ...]
    success_probs: tuple[float, ...]
    costs: tuple[float, ...]
    resource_needs: tuple[tuple[float, ...], ...]  # [resource][trial]
    max_revenue: float
    patent_loss: float  # revenue lost per period of late market entry
    delay_loss: float  # loss per period a ready trial sits unstarted


@dataclass(frozen=True)
class CaseStudy:
    name: str
    horizon: int
    resource_caps: tuple[float, ...]
    drugs: tuple[Drug, ...]
    discounts: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.horizon < 2:
            raise NacgenError("planning horizon must span at least 2 periods")
        if not self.drugs:
            raise NacgenError("case needs at least one drug")
        m = len(self.drugs[0].durations)
        if m < 2:
            raise NacgenError("each drug needs at least 2 trials")
        for d in self.drugs:
            if not (
                len(d.durations) == len(d.success_probs) == len(d.costs) == m
            ):
                raise NacgenError(f"drug {d.name}: trial counts disagree")
            if any(t < 1 for t in d.durations):
                raise NacgenError(f"drug {d.name}: durations must be >= 1")
            if any(not 0.0 < p < 1.0 for p in d.success_probs):
                raise NacgenError(f"drug {d.name}: probabilities must be in (0,1)")
            if len(d.resource_needs) != len(self.resource_caps):
                raise NacgenError(f"drug {d.name}: resource rows != resource caps")
            for row in d.resource_needs:
                if len(row) != m:
                    raise NacgenError(f"drug {d.name}: resource row width != trials")
        if self.discounts and len(self.discounts) != self.horizon:
            raise NacgenError("discounts must list one factor per period")

    @property
    def trial_count(self) -> int:
        return len(self.drugs[0].durations)

    @property
    def outcome_count(self) -> int:
        return self.trial_count + 1

    def discount(self, t: int) -> float:
        """Discount factor for period ``t`` (1-based); defaults to 1."""
        if self.discounts:
            return self.discounts[t - 1]
        return 1.0


def case_from_dict(data: dict, name: str = "") -> CaseStudy:
    known = {"name", "horizon", "resource_caps", "drugs", "discounts"}
    unknown = set(data) - known
    if unknown:
        raise NacgenError(f"unknown case-study keys: {sorted(unknown)}")
    drugs = []
    for entry in data["drugs"]:
        drug_known = {
            "name",
            "durations",
            "success_probs",
            "costs",
            "resource_needs",
            "max_revenue",
            "patent_loss",
            "delay_loss",
        }
        unknown = set(entry) - drug_known
        if unknown:
            raise NacgenError(f"unknown drug keys: {sorted(unknown)}")
        drugs.append(
            Drug(
                name=str(entry["name"]),
                durations=tuple(int(x) for x in entry["durations"]),
                success_probs=tuple(float(x) for x in entry["success_probs"]),
                costs=tuple(float(x) for x in entry["costs"]),
                resource_needs=tuple(
                    tuple(float(x) for x in row) for row in entry["resource_needs"]
                ),
                max_revenue=float(entry["max_revenue"]),
                patent_loss=float(entry["patent_loss"]),
                delay_loss=float(entry["delay_loss"]),
            )
        )
    discounts = data.get("discounts")
    return CaseStudy(
        name=str(data.get("name", name)),
        horizon=int(data["horizon"]),
        resource_caps=tuple(float(x) for x in data["resource_caps"]),
        drugs=tuple(drugs),
        discounts=tuple(float(x) for x in discounts) if discounts else (),
    )


def load_case(name_or_path: str) -> CaseStudy:
    """Load a built-in case by id or any case file by path."""
    if name_or_path in BUILTIN_CASES:
        resource = name_or_path.replace("-", "_") + ".yaml"
        text = (
            importlib.resources.files("nacgen.data").joinpath(resource).read_text()
        )
    else:
        with open(name_or_path, "r", encoding="utf-8") as fh:
            text = fh.read()
    data = yaml.safe_load(text)
    if not isinstance(data, dict):
        raise NacgenError(f"case file {name_or_path!r} is not a mapping")
    return case_from_dict(data, name=name_or_path)
