"""Pytest configuration and shared fixtures for meanaudit tests"""

import pytest

from meanaudit import PositivePair, RunConfig, bundled_suite, parse_suite


@pytest.fixture(scope="session")
def suite():
    """The bundled claim suite, parsed once per session."""
    return bundled_suite()


@pytest.fixture
def small_config():
    """A quick audit configuration: same seed and ranges, fewer pairs."""
    return RunConfig(samples=2_000, near_equal_samples=500, grid_points=2_000)


@pytest.fixture
def pair_1_4():
    return PositivePair(1.0, 4.0)


@pytest.fixture
def tiny_suite():
    """One entry that holds and one that fails, both with correct expectations."""
    return parse_suite(
        "chain | H <= G <= A | expect=HOLDS | source=(t1)\n"
        "reversed | A <= H | expect=FAILS | source=(t2)\n",
        origin="tiny",
    )


@pytest.fixture
def pick(suite):
    """Select bundled entries by id, keeping the order given."""

    def select(*ids):
        table = {e.id: e for e in suite}
        return tuple(table[i] for i in ids)

    return select
