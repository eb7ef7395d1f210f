"""Shared fixtures.

The heavy objects (overlap matrices at s_F = 12 and 14, entropy profiles)
are built once per session and shared; the on-disk cache also deduplicates
transform builds between profile fixtures for different models, since the
change of basis depends only on the cut geometry.
"""

import pytest

from htent import CacheStore, Model, ModelParams, entropy_profile


@pytest.fixture(scope="session")
def cache(tmp_path_factory):
    return CacheStore(str(tmp_path_factory.mktemp("u_t_cache")))


@pytest.fixture(scope="session")
def fractions14():
    return [k / 14 for k in range(1, 14)]


@pytest.fixture(scope="session")
def fractions12():
    return [k / 12 for k in range(1, 12)]


@pytest.fixture(scope="session")
def massless14(cache, fractions14):
    """Ground-state profile of the massless boson at s_F = 14."""
    return entropy_profile(ModelParams(Model.MASSLESS_FB), 14, fractions14,
                           alphas=(0.5, 2.0, 3.0), cache=cache)


@pytest.fixture(scope="session")
def thermal12(cache, fractions12):
    """Thermal profile of the m = 5 boson at T = 6, s_F = 12."""
    return entropy_profile(ModelParams(Model.MASSIVE_FB, m=5.0), 12,
                           fractions12, T=6.0, cache=cache)
