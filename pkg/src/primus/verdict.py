"""Shared tri-state verdict type for all primitivity deciders."""

from __future__ import annotations

import enum
from dataclasses import dataclass


class Status(enum.Enum):
    PRIMITIVE = "Primitive"
    NOT_PRIMITIVE = "NotPrimitive"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class PrimitivityVerdict:
    """Outcome of a decider.

    Primitive verdicts always carry a re-verified witness; Unknown verdicts
    always carry the budget that was exhausted.
    """

    status: Status
    witness: dict | None = None
    reason: str = ""
    budget: dict | None = None

    def __post_init__(self):
        if self.status is Status.PRIMITIVE and self.witness is None:
            raise ValueError("Primitive verdicts must carry a witness")
        if self.status is Status.UNKNOWN and self.budget is None:
            raise ValueError("Unknown verdicts must carry the exhausted budget")

    @property
    def is_primitive(self):
        return self.status is Status.PRIMITIVE

    @property
    def is_not_primitive(self):
        return self.status is Status.NOT_PRIMITIVE

    @property
    def is_unknown(self):
        return self.status is Status.UNKNOWN

    def to_json(self):
        return {
            "status": self.status.value,
            "witness": self.witness,
            "reason": self.reason,
            "budget": self.budget,
        }


def primitive(witness, reason=""):
    return PrimitivityVerdict(Status.PRIMITIVE, witness=witness, reason=reason)


def not_primitive(reason="", witness=None):
    return PrimitivityVerdict(Status.NOT_PRIMITIVE, witness=witness, reason=reason)


def unknown(budget, reason=""):
    return PrimitivityVerdict(Status.UNKNOWN, budget=budget, reason=reason)
