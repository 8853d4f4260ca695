"""Frozen defaults shared by probe suites, verification harnesses and the CLI.

All values are plain constants so that reports embedding them are
reproducible byte for byte.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

# Fuel-overhead polynomial for specialized indices: if the original program
# converges within s steps, the specialized one converges within
# OVERHEAD_SLOPE * s + OVERHEAD_SLOPE.  Measured empirically and frozen; the
# kernel tests assert the measured overhead stays below this line.
OVERHEAD_SLOPE = 64

DEFAULT_FUEL = 10_000
DEFAULT_PROBE_MAX = 50
DEFAULT_POINT_MAX = 20
DEFAULT_ENUM_BUDGET = 100_000
DEFAULT_SYNTH_NODE_CAP = 1_000_000
DEFAULT_SEED = 20250809

SCHEMA_TAG = "rosserlab-report-v1"


@dataclass(frozen=True)
class ProbeConfig:
    """Window and budgets for one verification run."""

    probe_max: int = DEFAULT_PROBE_MAX
    fuel: int = DEFAULT_FUEL
    enum_budget: int = DEFAULT_ENUM_BUDGET
    seed: int = DEFAULT_SEED

    def to_dict(self) -> dict:
        return asdict(self)
