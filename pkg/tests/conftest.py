"""Shared fixtures: the default link parameters and a clean logging setup."""

from collections.abc import Iterator

import pytest
import structlog

from molcomm_atv.models.channel import AbsorptionProfile, ChannelParams, LigandParams
from molcomm_atv.models.modulation import ModulationParams
from molcomm_atv.physics.diffusion import build_profile


@pytest.fixture(autouse=True)
def reset_logging() -> Iterator[None]:
    """Undo any structlog configuration a CLI test installed."""
    yield
    structlog.reset_defaults()


@pytest.fixture
def channel() -> ChannelParams:
    """D = 10 μm²/s, r = 4 μm, τ = 4 s."""
    return ChannelParams()


@pytest.fixture
def ligand() -> LigandParams:
    """a = 0.1, b = 0.08, Q = 1."""
    return LigandParams()


@pytest.fixture
def modulation() -> ModulationParams:
    """M = 500, equiprobable bits."""
    return ModulationParams()


@pytest.fixture
def profile(channel: ChannelParams, ligand: LigandParams) -> AbsorptionProfile:
    """Absorption profile of the default link."""
    return build_profile(channel, ligand)

