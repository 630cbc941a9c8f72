"""
Physics Models - Verdicts of world and camera property checks
"""

from dataclasses import dataclass, field
from typing import Any, Dict


@dataclass(frozen=True)
class PhysicsVerdict:
    """Outcome of one property check with the values it was decided on"""

    property_name: str
    holds: bool
    evidence: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'property': self.property_name,
            'holds': self.holds,
            'evidence': self.evidence
        }
