import math

import numpy as np
import pytest

from ultracold_ramsey import PhysicalParams

# parameter sets of the fast-atom and ultracold figures
FIG3 = dict(k=1.0, omega=math.pi / 20, l=1.0, L=25.0)
FIG5 = dict(k=0.1, omega=15 * math.pi, l=1.2, L=25.0)


@pytest.fixture
def fig3():
    return lambda delta: PhysicalParams(delta=delta, **FIG3)


@pytest.fixture
def fig5():
    return lambda delta: PhysicalParams(delta=delta, **FIG5)


def random_params(rng, n, k_range=(0.05, 10.0), omega_range=(0.0, 50.0),
                  l_range=(0.1, 3.0), L_range=(0.0, 50.0), delta_max=10.0):
    """Propagating-regime parameter sets, delta in [delta_cr + 1e-3, delta_max]."""
    out = []
    for _ in range(n):
        k = rng.uniform(*k_range)
        dcr = -0.5 * k * k
        out.append(PhysicalParams(
            k=k, omega=rng.uniform(*omega_range), delta=rng.uniform(dcr + 1e-3, delta_max),
            l=rng.uniform(*l_range), L=rng.uniform(*L_range),
        ))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20041)
