from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..channel import Reflection

INIT_POLICIES = ("zero-phase", "siso-align", "random")
PHASE_UPDATES = ("closed-form", "grid")


@dataclass(frozen=True)
class AoOptions:
    """Stopping rule, initialization and per-element update of the alternating optimizers.

    ``phase_update`` selects how a MIMO element phase is optimized with
    everything else fixed: ``closed-form`` (exact maximizer) or ``grid``
    (``phase_grid``-point search plus golden-section refinement).
    """

    max_sweeps: int = 100
    tol: float = 1e-6
    phase_grid: int = 64
    init_policy: str = "siso-align"
    init_seed: int | None = None
    phase_update: str = "closed-form"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.phase_grid < 8:
            raise ValueError("phase_grid must be >= 8")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.init_policy not in INIT_POLICIES:
            raise ValueError(f"unknown init_policy {self.init_policy!r}; expected one of {INIT_POLICIES}")
        if self.phase_update not in PHASE_UPDATES:
            raise ValueError(f"unknown phase_update {self.phase_update!r}; expected one of {PHASE_UPDATES}")
        if self.init_policy == "random" and self.init_seed is None:
            raise ValueError("random init_policy needs init_seed")


@dataclass(frozen=True)
class BeamformingSolution:
    reflection: Reflection
    transmit: np.ndarray  # beamforming vector (MISO) or covariance matrix (MIMO)
    objective_trace: tuple = field(default_factory=tuple)
    converged: bool = False
    rate: float = float("nan")

    @property
    def objective(self) -> float:
        return self.objective_trace[-1]


def converged(prev: float, cur: float, tol: float) -> bool:
    return cur - prev <= tol * max(abs(prev), np.finfo(float).tiny)
