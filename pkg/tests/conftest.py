import os

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def exact_grid():
    from tailix.sample import pareto_quantile_grid

    return pareto_quantile_grid
