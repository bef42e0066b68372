"""The quantity shorthand literal, e.g. ``"320kbps"^^quan:quantity``."""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal

QUANTITY_PATTERN = r"^[+-]?[0-9]+(\.[0-9]+)?[A-Za-z%]+$"
_QUANTITY_RE = re.compile(r"^(?P<magnitude>[+-]?[0-9]+(?:\.[0-9]+)?)(?P<unit>[A-Za-z%]+)$")
# strips the magnitude the same way the unit-agreement query does with REPLACE
_MAGNITUDE_PREFIX_RE = re.compile(r"^[+-]?[0-9]+([.][0-9]+)?")


@dataclass(frozen=True)
class QuantityValue:
    magnitude: Decimal
    unit: str

    def __str__(self) -> str:
        return f"{self.magnitude}{self.unit}"


def parse_quantity_literal(lexical: str) -> QuantityValue:
    match = _QUANTITY_RE.match(lexical)
    if match is None:
        raise ValueError(f"Malformed quantity literal {lexical!r}")
    return QuantityValue(Decimal(match.group("magnitude")), match.group("unit"))


def unit_token(lexical: str) -> str:
    """Everything after the leading magnitude; the whole text when there is none."""
    return _MAGNITUDE_PREFIX_RE.sub("", lexical, count=1)
