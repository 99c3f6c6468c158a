"""Named evolution parameter sets (angles stored in units of pi)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import InvalidInputError
from .lgi import EvolutionConfig

# Zero-signalling point with theta1 = theta2 = 0.831 pi and U21 = U32; the
# chi/phi digits are the root of delta(A) = delta(B) = 0 nearest to the quoted
# three-digit values (see search.solve_nsit_angles).
SET2_CHI = 0.6875054873022409
SET2_PHI = 0.42352692950436055


@dataclass(frozen=True)
class Preset:
    name: str
    angles_pi: tuple[float, float, float, float, float, float]
    description: str

    @property
    def theta2_default(self) -> float:
        return self.angles_pi[3]

    def config(self) -> EvolutionConfig:
        return EvolutionConfig.from_angles([a * math.pi for a in self.angles_pi])


PRESETS = {
    p.name: p
    for p in (
        Preset(
            "fig2",
            (0.0, 0.25, 0.0, 0.5, 0.75, 0.0),
            "parameters maximising the unambiguous K; K = (3 - cos 2 theta2)/2",
        ),
        Preset(
            "fig3",
            (0.831, SET2_CHI, SET2_PHI, 0.831, SET2_CHI, SET2_PHI),
            "ambiguous-LGI violation without signalling at theta2 = 0.831 pi",
        ),
        Preset(
            "fig4",
            (0.831, SET2_CHI, SET2_PHI, 0.831, SET2_CHI, SET2_PHI),
            "same dynamics as fig3; used for the quasi-probability curves",
        ),
        Preset(
            "fig3-printed",
            (0.831, 0.688, 0.423, 0.831, 0.688, 0.423),
            "set-2 angles rounded to three digits",
        ),
    )
}


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise InvalidInputError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
