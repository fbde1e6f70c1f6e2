"""Numerical tolerances used throughout the pipeline.

All tolerances can be scaled at once through the TWISTDECOMP_TOL_SCALE
environment variable (a positive float multiplier), or overridden per
field via the CLI.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass

ENV_TOL_SCALE = "TWISTDECOMP_TOL_SCALE"


@dataclass(frozen=True)
class Tolerances:
    unitary: float = 1e-9       # |U^H U - I| and |scalar| - 1
    cocycle: float = 1e-8       # numeric cocycle identity + normalization
    snap: float = 1e-6          # snapping numeric values to roots of unity
    rep: float = 1e-8           # defining relation over exact cocycles
    rep_numeric: float = 1e-6   # defining relation over numeric cocycles
    char: float = 1e-6          # character matching / multiplicity rounding
    scalar: float = 1e-7        # scalar-matrix deviation in induced cocycles

    def __post_init__(self):
        for f in dataclasses.fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"tolerance {f.name} must be positive")

    def scaled(self, factor: float) -> "Tolerances":
        if factor <= 0:
            raise ValueError("tolerance scale must be positive")
        return Tolerances(
            **{f.name: getattr(self, f.name) * factor for f in dataclasses.fields(self)}
        )

    def replace(self, **overrides) -> "Tolerances":
        return dataclasses.replace(self, **overrides)


def default_tolerances() -> Tolerances:
    """Default tolerances, scaled by TWISTDECOMP_TOL_SCALE if set."""
    base = Tolerances()
    raw = os.environ.get(ENV_TOL_SCALE)
    if raw is None:
        return base
    return base.scaled(float(raw))
