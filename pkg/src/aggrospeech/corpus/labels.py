"""Annotation label sets and the collapse to the three-way target."""

from __future__ import annotations

from enum import Enum

from ..errors import UnknownLabel


class AggressionLabel(str, Enum):
    OAG_T = "OAG_T"
    OAG_NT = "OAG_NT"
    CAG_T = "CAG_T"
    CAG_NT = "CAG_NT"
    NAG = "NAG"
    IRR = "IRR"


class TurnLabel(str, Enum):
    TCU = "TCU"
    OVERLAP = "OVERLAP"
    INTERRUPTION = "INTERRUPTION"


class CoarseClass(str, Enum):
    OAG = "OAG"
    CAG = "CAG"
    NAG = "NAG"


# Fixed class order used for confusion matrices, model files and reports.
CLASS_ORDER: tuple[CoarseClass, ...] = (CoarseClass.OAG, CoarseClass.CAG, CoarseClass.NAG)

_COLLAPSE = {
    AggressionLabel.OAG_T: CoarseClass.OAG,
    AggressionLabel.OAG_NT: CoarseClass.OAG,
    AggressionLabel.CAG_T: CoarseClass.CAG,
    AggressionLabel.CAG_NT: CoarseClass.CAG,
    AggressionLabel.NAG: CoarseClass.NAG,
    AggressionLabel.IRR: None,
}


def parse_aggression_label(text: str) -> AggressionLabel:
    """Parse a Tier-1 label. Empty labels count as IRR."""
    key = text.strip().upper()
    if not key:
        return AggressionLabel.IRR
    try:
        return AggressionLabel(key)
    except ValueError:
        raise UnknownLabel(f"unknown aggression label {text!r}") from None


def parse_turn_label(text: str) -> TurnLabel | None:
    key = text.strip().upper()
    if not key:
        return None
    try:
        return TurnLabel(key)
    except ValueError:
        raise UnknownLabel(f"unknown turn label {text!r}") from None


def map_label(fine: AggressionLabel) -> CoarseClass | None:
    """Collapse a fine label to its coarse class; ``None`` means drop."""
    return _COLLAPSE[AggressionLabel(fine)]
