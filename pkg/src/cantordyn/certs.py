"""Structured pass/fail certificates with exact-rational JSON payloads."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from .measures import AtomicMeasure


def to_jsonable(obj):
    """Recursively convert to JSON-able data; rationals become "p/q" strings.

    No floats are ever emitted: certificates carry exact values only.
    """
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, AtomicMeasure):
        return [[p, str(m)] for p, m in obj.atoms]
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = list(obj)
        if isinstance(obj, (set, frozenset)):
            items = sorted(items, key=repr)
        return [to_jsonable(v) for v in items]
    if isinstance(obj, float):
        raise TypeError("floats are not allowed in certificate payloads")
    return obj


@dataclass
class Certificate:
    """Verdict of a single machine check, with exact witnesses."""

    operation: str
    passed: bool
    verdict: str
    parameters: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    def payload(self) -> dict:
        return {
            "operation": self.operation,
            "passed": self.passed,
            "verdict": self.verdict,
            "parameters": to_jsonable(self.parameters),
            "witnesses": to_jsonable(self.witnesses),
            "details": to_jsonable(self.details),
        }
