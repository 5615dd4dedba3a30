import logging

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from columntess import GeneratorSpec, ZProcessSpec, assign_marks, build, generate

settings.register_profile(
    "default", deadline=None, max_examples=20,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _quiet_logs(caplog):
    caplog.set_level(logging.ERROR, logger="columntess")


def brick_spec(length=4.0, **kw):
    return GeneratorSpec("brick_wall", length=length, **kw)


@pytest.fixture(scope="session")
def brick4():
    return generate(brick_spec(4.0))


@pytest.fixture(scope="session")
def brick8():
    return generate(brick_spec(8.0))


@pytest.fixture(scope="session")
def pvt():
    return generate(GeneratorSpec("poisson_voronoi", length=12.0, seed=3))


@pytest.fixture(scope="session")
def plt_():
    return generate(GeneratorSpec("poisson_line", length=12.0, line_intensity=np.sqrt(np.pi), seed=5))


@pytest.fixture(scope="session")
def brick_column(brick8):
    return build(brick8, assign_marks(brick8), ZProcessSpec("unit_lattice", 8), seed=1)


@pytest.fixture(scope="session")
def generators_small():
    """One small realization of each family, keyed by family name."""
    return {
        "brick_wall": generate(brick_spec(6.0, random_phase=True, seed=2)),
        "poisson_voronoi": generate(GeneratorSpec("poisson_voronoi", length=8.0, seed=4)),
        "poisson_line": generate(GeneratorSpec("poisson_line", length=8.0,
                                               line_intensity=np.sqrt(np.pi), seed=6)),
    }


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
