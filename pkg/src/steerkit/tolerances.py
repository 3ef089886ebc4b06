"""Central numeric tolerances.

Every comparison against "zero" in the package goes through one of these
fields so tests and the CLI report a single consistent set of knobs.
"""
from __future__ import annotations

from dataclasses import dataclass, asdict


#: Returned for the ratio x^2 / F^2 when F underflows while x does not.
#: Large and negative so a maximizer discards the point.  With validated
#: input states this branch is unreachable (the domain check on the
#: radicands trips first), it exists as a defensive backstop.
SENTINEL = -1e18


@dataclass(frozen=True)
class Tolerances:
    #: validation of density matrices
    hermitian: float = 1e-10
    trace: float = 1e-10
    psd: float = 1e-10
    #: round trips between representations
    roundtrip: float = 1e-12
    #: unit-vector and unit-trace checks on derived objects
    unit: float = 1e-12
    #: joint-measurability decision boundary slack
    jm: float = 1e-12
    #: clamp window for slightly-negative radicands
    radicand: float = 1e-12
    #: below this, a magnitude counts as numerically zero in F / x ratios
    sharp: float = 1e-9
    #: assemblage observable positivity slack
    assemblage: float = 1e-9
    #: steered reduced state counts as singular when 1 - |b|^2 <= this
    singular: float = 1e-6
    #: |t3| below this certifies a zero state
    zero_t3: float = 1e-10
    #: classification gap under which a state is reported "marginal"
    zero_gap: float = 1e-4
    #: slack on the S <= N/2 bound check
    corollary: float = 1e-9
    #: hidden-state weight denominators below this count as degenerate
    weight_floor: float = 1e-12

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = Tolerances()
