"""Sensitivity-labelled user data items and the sensitivity algebra.

Levels form a total order NS < LS < MS < HS. Anything above NS counts as
private and is what the flow controller refuses to let out of the platform.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Iterable, Optional

from .errors import (
    EmptySourceSetError,
    ScoreOutOfRangeError,
    UnknownItemError,
    UnknownOwnerError,
)


class SensitivityLevel(IntEnum):
    """Privacy criticality of a data item, ordered from public to highly sensitive."""

    NS = 0
    LS = 1
    MS = 2
    HS = 3

    @property
    def is_private(self) -> bool:
        return self is not SensitivityLevel.NS


def classify(score: float) -> SensitivityLevel:
    """Map a numeric sensitivity score in [0, 1] onto a level.

    Bands: 0 is NS, (0, 0.5) is LS, [0.5, 0.75) is MS, [0.75, 1] is HS.
    The bands are half-open so every score has exactly one level.
    """
    if not 0.0 <= score <= 1.0:
        raise ScoreOutOfRangeError(f"score {score} outside [0, 1]")
    if score >= 0.75:
        return SensitivityLevel.HS
    if score >= 0.5:
        return SensitivityLevel.MS
    if score > 0.0:
        return SensitivityLevel.LS
    return SensitivityLevel.NS


def derived_sensitivity(sources: Iterable[SensitivityLevel]) -> SensitivityLevel:
    """Level of data derived from several sources: the maximum of their levels."""
    levels = list(sources)
    if not levels:
        raise EmptySourceSetError("derived sensitivity needs at least one source")
    return max(levels)


def parse_level(value) -> SensitivityLevel:
    """Accept a level name ("MS"), an existing level, or a numeric score."""
    if isinstance(value, SensitivityLevel):
        return value
    if isinstance(value, str):
        try:
            return SensitivityLevel[value.upper()]
        except KeyError:
            raise ScoreOutOfRangeError(f"unknown sensitivity level {value!r}") from None
    return classify(float(value))


@dataclass(frozen=True)
class DataItem:
    """One attribute or object owned by a user.

    ``value`` may be empty for write-only targets such as a wall.
    """

    owner: str
    name: str
    value: frozenset[str]
    sensitivity: SensitivityLevel
    policies: frozenset[str] = field(default_factory=frozenset)

    @property
    def is_private(self) -> bool:
        return self.sensitivity.is_private


class DataStore:
    """Per-user attribute store, mutable during scenario load only."""

    def __init__(self, graph) -> None:
        self._graph = graph
        self._items: dict[tuple[str, str], DataItem] = {}

    def set_item(
        self,
        owner: str,
        name: str,
        value: Iterable[str],
        sensitivity: SensitivityLevel,
        policies: Iterable[str] = (),
    ) -> DataItem:
        if not self._graph.has_user(owner):
            raise UnknownOwnerError(f"unknown user {owner!r}")
        item = DataItem(owner, name, frozenset(value), sensitivity, frozenset(policies))
        self._items[(owner, name)] = item
        return item

    def get_item(self, owner: str, name: str) -> DataItem:
        if not self._graph.has_user(owner):
            raise UnknownOwnerError(f"unknown user {owner!r}")
        try:
            return self._items[(owner, name)]
        except KeyError:
            raise UnknownItemError(f"user {owner!r} has no item {name!r}") from None

    def has_item(self, owner: str, name: str) -> bool:
        return (owner, name) in self._items

    def items_of(self, owner: str) -> list[DataItem]:
        return [item for (o, _), item in sorted(self._items.items()) if o == owner]

    def all_items(self) -> list[DataItem]:
        return [self._items[key] for key in sorted(self._items)]

    def attribute_ceiling(self, name: str) -> Optional[SensitivityLevel]:
        """Highest level any user assigned to this attribute name, if anyone has it."""
        levels = [item.sensitivity for (_, n), item in self._items.items() if n == name]
        return max(levels) if levels else None

    def attribute_context(self) -> dict[str, SensitivityLevel]:
        """Attribute name to ceiling level, for registration-time profile checks."""
        ctx: dict[str, SensitivityLevel] = {}
        for (_, name), item in self._items.items():
            current = ctx.get(name)
            if current is None or item.sensitivity > current:
                ctx[name] = item.sensitivity
        return ctx
