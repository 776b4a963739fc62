import math

import numpy as np
import pytest

from qtsp import instance as qtsp_instance
from qtsp import phase as qtsp_phase


THREE_CITY_COSTS = [[0, 1, 4], [6, 0, 2], [3, 5, 0]]


@pytest.fixture
def three_city_instance():
    return qtsp_instance.TspInstance.from_costs(THREE_CITY_COSTS, c1=1, c2=6)


@pytest.fixture
def instance_n6():
    return qtsp_instance.generate_instance(6, 0.0, 1.0, seed=3)


@pytest.fixture
def instance_n7():
    return qtsp_instance.generate_instance(7, 1.0, 3.0, seed=11)


@pytest.fixture
def four_tour_phase_map():
    return qtsp_phase.PhaseMap.from_phases([0.0, math.pi, math.pi, math.pi])


def m1_instance(n=8, f0_range=(2e-3, 2e-2), seeds=range(200)):
    """
    First seeded instance whose M=1 group-0 fraction lies in f0_range.
    """
    for seed in seeds:
        inst = qtsp_instance.generate_instance(n, 0.0, 1.0, seed)
        pm = qtsp_phase.build_phase_map(inst)
        gs = qtsp_phase.build_group_spec(pm, 1, 0.0)
        if f0_range[0] <= gs.f0 <= f0_range[1]:
            return inst, pm, gs

    raise AssertionError(f"no seed gives f0 in {f0_range}")


@pytest.fixture
def m1_case():
    return m1_instance()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
