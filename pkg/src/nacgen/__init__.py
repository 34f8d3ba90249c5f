"""Minimum-cardinality non-anticipativity pair sets for multistage
stochastic programs whose uncertainty is revealed gradually, with
brute-force verification oracles and a deterministic MILP emitter for
the clinical-trial planning problem."""

from .casestudy import BUILTIN_CASES, CaseStudy, Drug, load_case
from .errors import ConfigError, NacgenError, RefinementError, SizeLimitError
from .model import (
    MsspModel,
    build_model,
    count_nacs,
    emit_lp,
    emit_mps,
    params_for_case,
    scenario_probabilities,
    scenario_probability,
)
from .oracle import (
    VerificationReport,
    check_necessity,
    check_sufficiency,
    full_pair_count,
    min_nac_exhaustive,
    min_pairs_full_grid,
)
from .scenarios import (
    DifferentiatorSet,
    Partition,
    Scenario,
    ScenarioSet,
    differentiator_set,
    explicit_set,
    full_cartesian,
    load_scenarios,
    partition,
    sample_scenarios,
    save_scenarios,
    signature,
    tau,
)
from .snac import (
    NacGraph,
    components_under,
    connect_components,
    load_graph,
    run_snac,
    save_graph,
)
from .uncertainty import (
    EventVector,
    GradualParameter,
    enumerate_event_lattice,
    make_split_chain_param,
    make_stage_failure_param,
    signal,
)

__version__ = "0.1.0"
