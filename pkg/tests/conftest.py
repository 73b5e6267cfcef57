import json

import numpy as np
import pytest

from budgetpath import load_scenario


def square_scenario_json(**overrides) -> str:
    """Chord benchmark: start (0,0), end (4,0), budget 3, one unit square."""
    data = {
        "start": [0, 0],
        "end": [4, 0],
        "budget": 3,
        "levels": 4,
        "polytopes": [
            {"vertices": [[1.5, -0.5], [2.5, -0.5], [2.5, 0.5], [1.5, 0.5]]}
        ],
    }
    data.update(overrides)
    return json.dumps(data)


@pytest.fixture
def chord_scenario():
    return load_scenario(square_scenario_json())


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)
