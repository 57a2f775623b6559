"""Verdict records shared by the stability harness, harmonics and the CLI."""
from dataclasses import dataclass, field
from typing import Optional

PROVED_SCALE = "proved-scale"
CONSISTENT = "consistent"
VIOLATED = "violated"


@dataclass
class StabilityReport:
    """Outcome of one stability check.

    ``holds`` is one of ``proved-scale`` (an explicit bound was evaluated and
    met), ``consistent`` (constants are not numeric, only scaling is checked)
    or ``violated``. ``gate_met`` records whether the smallness hypothesis of
    the statement is satisfied; a failed gate is never a violation.
    """

    theorem: str
    epsilon: float
    distance: float
    q_expected: float
    holds: str = CONSISTENT
    bound: Optional[float] = None
    q_fitted: Optional[float] = None
    gate_met: Optional[bool] = None
    gate: Optional[float] = None
    grid_order: Optional[int] = None
    dim: Optional[int] = None
    notes: str = ""
    extras: dict = field(default_factory=dict)

    @property
    def violated(self):
        return self.holds == VIOLATED

    def to_record(self):
        rec = {
            "theorem": self.theorem,
            "dim": self.dim,
            "epsilon": self.epsilon,
            "distance": self.distance,
            "bound": self.bound,
            "q_expected": self.q_expected,
            "q_fitted": self.q_fitted,
            "holds": self.holds,
            "gate_met": self.gate_met,
            "gate": self.gate,
            "grid_order": self.grid_order,
            "notes": self.notes,
        }
        for key, value in self.extras.items():
            rec[f"x_{key}"] = value
        return rec
