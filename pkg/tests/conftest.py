import os
import warnings
import numpy as np
import pytest
from windpf.config import Scenario, load_scenario
from windpf.exceptions import SaturationWarning

def shortened(scenario: Scenario, duration: float) -> Scenario:
    return scenario.model_copy(update={'sim': scenario.sim.model_copy(update={'duration': duration}), 'metrics': scenario.metrics.model_copy(update={'window': None})})

@pytest.fixture
def rng():
    return np.random.default_rng(20240611)

@pytest.fixture
def fuzz_cases():
    return int(os.environ.get('WINDPF_FUZZ_CASES', '20000'))

@pytest.fixture
def bundled():
    return load_scenario

@pytest.fixture
def quiet_saturation():
    with warnings.catch_warnings():
        warnings.simplefilter('ignore', SaturationWarning)
        yield
