import pytest

from nacgen.scenarios import explicit_set
from nacgen.uncertainty import make_stage_failure_param

# The six-scenario two-product instance used throughout: outcome j of a
# product means "defect after processing stage j", 4 means all stages pass.
WALKTHROUGH_OUTCOMES = [(1, 1), (4, 3), (2, 1), (3, 2), (4, 1), (3, 3)]


def make_params(n: int, stages: int):
    return [make_stage_failure_param(stages, i) for i in range(n)]


@pytest.fixture
def two_stage3_params():
    return make_params(2, 3)


@pytest.fixture
def walkthrough_set(two_stage3_params):
    return explicit_set(two_stage3_params, WALKTHROUGH_OUTCOMES)
