from __future__ import annotations

import pytest

from cubicplanar.sampling import SamplerConfig, SamplerContext


@pytest.fixture(scope="session")
def ctx() -> SamplerContext:
    """A small context: exact sizes up to 120 vertices."""
    config = SamplerConfig(table_order=120, precision=20, max_size=20_000, core_table_size=500)
    return SamplerContext.create(config, seed=2024)
