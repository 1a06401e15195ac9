"""Attribute generalization: user-chosen coarse values released in place of exact ones.

Values are supplied by the user at consent time; nothing here computes a
hierarchy. Once an entry exists for (user, app, attribute), every release to
that app sees the generalized value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import (
    InvariantViolationError,
    NotRequiredByAppError,
    UnknownAttributeError,
    UnknownItemError,
    UnknownOwnerError,
)
from .userdata import SensitivityLevel

# Monotone advisory map from sensitivity to a suggested generalization depth.
_LEVEL_ADVICE = {
    SensitivityLevel.NS: 0,
    SensitivityLevel.LS: 1,
    SensitivityLevel.MS: 2,
    SensitivityLevel.HS: 3,
}


def recommend_level(sensitivity: SensitivityLevel) -> int:
    """Suggested generalization depth; the user's own choice always wins."""
    return _LEVEL_ADVICE[sensitivity]


@dataclass(frozen=True)
class GeneralizationEntry:
    user: str
    app: str
    attribute: str
    generalized_value: frozenset[str]
    level: int


class GeneralizationStore:
    """Entries keyed by (user, app, attribute); writable during consent only."""

    def __init__(self, data, profiles) -> None:
        self._data = data
        self._profiles = profiles
        self._entries: dict[tuple[str, str, str], GeneralizationEntry] = {}

    def opt_generalize(
        self,
        user: str,
        app: str,
        attribute: str,
        generalized_value: Iterable[str],
        level: Optional[int] = None,
    ) -> GeneralizationEntry:
        """Record (or overwrite) the generalized value a user wants an app to see."""
        if attribute not in self._profiles.profile(app).required_data:
            raise NotRequiredByAppError(
                f"app {app!r} does not require attribute {attribute!r}"
            )
        try:
            item = self._data.get_item(user, attribute)
        except (UnknownItemError, UnknownOwnerError) as exc:
            raise UnknownAttributeError(str(exc)) from exc
        value = frozenset(generalized_value)
        if level is None:
            level = 0 if value == item.value else max(1, recommend_level(item.sensitivity))
        if level < 0:
            raise InvariantViolationError("generalization level must be non-negative")
        if level == 0 and value != item.value:
            raise InvariantViolationError(
                "level 0 means the exact value; provide the stored value or a level"
            )
        entry = GeneralizationEntry(user, app, attribute, value, level)
        self._entries[(user, app, attribute)] = entry
        return entry

    def entry(self, user: str, app: str, attribute: str) -> Optional[GeneralizationEntry]:
        return self._entries.get((user, app, attribute))

    def has_entry(self, user: str, app: str, attribute: str) -> bool:
        return (user, app, attribute) in self._entries

    def release_value(self, user: str, app: str, attribute: str) -> frozenset[str]:
        """Value an app actually receives: generalized if opted, exact otherwise."""
        entry = self._entries.get((user, app, attribute))
        if entry is not None:
            return entry.generalized_value
        try:
            return self._data.get_item(user, attribute).value
        except (UnknownItemError, UnknownOwnerError) as exc:
            raise UnknownAttributeError(str(exc)) from exc

    def entries(self) -> list[GeneralizationEntry]:
        return [self._entries[key] for key in sorted(self._entries)]
