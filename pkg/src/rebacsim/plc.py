"""Privacy leakage controller: checks inter-component flows and logs them.

A flow is blocked when any of these hold:
  (a) the sink is external (an external component or an outside entity) and
      the payload carries private data,
  (b) source and sink are components and the source's adjacency does not
      allow the call,
  (c) the payload is not covered by the source component's declared inputs
      and outputs.

Every checked flow lands in the append-only information-flow log, verdict
included. Payload entries of the form ``gen:<attribute>`` reference the
generalized form of an attribute and count as public when a generalization
entry exists for the flow's user and app.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional, Sequence

from .alerts import Alert, AlertKind
from .errors import UnknownAppError, UnknownAttributeError, UnknownComponentError
from .profiles import OSN_CORE
from .userdata import SensitivityLevel, derived_sensitivity

# Pseudo-source used for platform-mediated releases of user data to a
# component; it is not a component, so adjacency and declaration rules do
# not apply to it.
RESOURCE_MANAGER = "osn.rm"

GENERALIZED_PREFIX = "gen:"


class Verdict(Enum):
    PERMITTED = "permitted"
    BLOCKED = "blocked"


@dataclass(frozen=True)
class FlowEvent:
    """One observed (or declared) data movement inside an app."""

    app: str
    source: str
    sink: str
    payload: frozenset[str]
    user: Optional[str] = None


@dataclass(frozen=True)
class IFLogRecord:
    event: FlowEvent
    sensitivity: SensitivityLevel
    verdict: Verdict
    reason: Optional[str]
    timestamp: int

    def to_dict(self) -> dict:
        return {
            "ts": self.timestamp,
            "app": self.event.app,
            "source": self.event.source,
            "sink": self.event.sink,
            "payload": sorted(self.event.payload),
            "user": self.event.user,
            "sensitivity": self.sensitivity.name,
            "verdict": self.verdict.value,
            "reason": self.reason,
        }


class PrivacyLeakageController:
    def __init__(self, profiles, data, generalizer) -> None:
        self._profiles = profiles
        self._data = data
        self._generalizer = generalizer
        self._log: list[IFLogRecord] = []
        self._append_lock = threading.Lock()

    @property
    def log(self) -> list[IFLogRecord]:
        return list(self._log)

    def reset_log(self) -> None:
        self._log.clear()

    # ------------------------------------------------------------------
    # Labeling
    # ------------------------------------------------------------------

    def label_payload_entry(self, app: str, entry: str, user: Optional[str]) -> SensitivityLevel:
        if entry.startswith(GENERALIZED_PREFIX):
            attribute = entry[len(GENERALIZED_PREFIX):]
            if user is not None and self._generalizer.has_entry(user, app, attribute):
                return SensitivityLevel.NS
            entry = attribute
        if user is not None and self._data.has_item(user, entry):
            return self._data.get_item(user, entry).sensitivity
        app_local = self._profiles.app_local_level(app, entry)
        if app_local is not None:
            return app_local
        ceiling = self._data.attribute_ceiling(entry)
        if ceiling is not None:
            return ceiling
        raise UnknownAttributeError(f"payload entry {entry!r} does not resolve")

    def label_flow(self, app: str, payload: Iterable[str], user: Optional[str] = None) -> SensitivityLevel:
        """Sensitivity of a payload: the highest level among its entries."""
        return derived_sensitivity(
            self.label_payload_entry(app, entry, user) for entry in payload
        )

    # ------------------------------------------------------------------
    # Checking
    # ------------------------------------------------------------------

    def _sink_is_external(self, app: str, sink: str) -> bool:
        """External component or outside entity; internal components and
        shared platform components are inside the platform boundary."""
        if sink.startswith(OSN_CORE + ":"):
            return False
        if self._profiles.has_component(app, sink):
            return self._profiles.is_external(app, sink)
        return True  # anything unresolvable is an outside entity

    def check_flow(self, event: FlowEvent) -> IFLogRecord:
        """Apply the flow rules and append the verdict to the log."""
        if not self._profiles.has_app(event.app):
            raise UnknownAppError(f"app {event.app!r} not registered")
        sensitivity = self.label_flow(event.app, event.payload, event.user)
        reason = self._first_violation(event, sensitivity)
        verdict = Verdict.BLOCKED if reason else Verdict.PERMITTED
        with self._append_lock:
            record = IFLogRecord(event, sensitivity, verdict, reason, len(self._log) + 1)
            self._log.append(record)
        return record

    def _first_violation(self, event: FlowEvent, sensitivity: SensitivityLevel) -> Optional[str]:
        if self._sink_is_external(event.app, event.sink) and sensitivity.is_private:
            return "private-to-external"
        source_comp = self._source_component(event)
        if source_comp is not None:
            sink_is_component = event.sink.startswith(OSN_CORE + ":") or (
                self._profiles.has_component(event.app, event.sink)
            )
            if sink_is_component and not self._profiles.may_call(
                event.app, event.source, event.sink
            ):
                return "adjacency"
            declared = source_comp.inputs | source_comp.outputs
            plain = {
                entry[len(GENERALIZED_PREFIX):] if entry.startswith(GENERALIZED_PREFIX) else entry
                for entry in event.payload
            }
            if not plain <= declared:
                return "undeclared-payload"
        return None

    def _source_component(self, event: FlowEvent):
        if event.source == RESOURCE_MANAGER:
            return None
        owner, cid = self._profiles.resolve_ref(event.app, event.source)
        return self._profiles.component(owner, cid)

    # ------------------------------------------------------------------
    # Anomaly scan
    # ------------------------------------------------------------------

    def detect_anomaly(self, trace: Sequence[IFLogRecord]) -> list[Alert]:
        """One alert per blocked record, plus flags for permitted flows that
        reach an entity the source never declared."""
        alerts: list[Alert] = []
        for record in trace:
            event = record.event
            source_id = None if event.source == RESOURCE_MANAGER else event.source
            if record.verdict is Verdict.BLOCKED:
                alerts.append(
                    Alert(
                        AlertKind.UNAUTHORIZED_FLOW_ATTEMPT,
                        event.app,
                        source_id,
                        f"blocked flow to {event.sink}: {record.reason}",
                    )
                )
                continue
            if source_id is None:
                continue
            is_entity = not event.sink.startswith(OSN_CORE + ":") and not (
                self._profiles.has_component(event.app, event.sink)
            )
            if is_entity:
                owner, cid = self._profiles.resolve_ref(event.app, event.source)
                declared = self._profiles.component(owner, cid).external_entities
                if event.sink not in declared:
                    alerts.append(
                        Alert(
                            AlertKind.UNDECLARED_EXTERNAL_ENTITY,
                            event.app,
                            source_id,
                            f"flow to undeclared entity {event.sink}",
                        )
                    )
        return alerts
