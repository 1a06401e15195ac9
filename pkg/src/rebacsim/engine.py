"""Wires a parsed scenario into live stores and replays its trace."""

from __future__ import annotations

from dataclasses import dataclass, field

from .alerts import Alert
from .dam import DataAuthorizationManager, Decision
from .errors import ScenarioReferenceError
from .generalize import GeneralizationStore
from .graph import SocialGraph
from .plc import FlowEvent, IFLogRecord, PrivacyLeakageController
from .policylang import (
    AccessRequest,
    PolicyStore,
    Sort,
    condition_constants,
)
from .profiles import OSN_CORE, ProfileStore
from .scenario import FlowSpec, RequestEvent, Scenario
from .userdata import DataStore


@dataclass
class RunResult:
    decisions: list[Decision] = field(default_factory=list)
    flows: list[IFLogRecord] = field(default_factory=list)
    alerts: list[Alert] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not self.alerts


class Engine:
    """All stores of one simulated world, built deterministically from a scenario."""

    def __init__(self, scenario: Scenario) -> None:
        self.scenario = scenario
        self.graph = SocialGraph(
            strict_trust=scenario.strict_trust, relations=scenario.relations
        )
        self.data = DataStore(self.graph)
        self.profiles = ProfileStore(self.graph)
        self.policies = PolicyStore()
        self.generalizer = GeneralizationStore(self.data, self.profiles)
        self.plc = PrivacyLeakageController(self.profiles, self.data, self.generalizer)
        self.dam = DataAuthorizationManager(
            self.graph, self.data, self.profiles, self.policies, self.generalizer, self.plc
        )
        self.grants: dict[tuple[str, str], frozenset[str]] = {}
        self._build()

    @classmethod
    def from_scenario(cls, scenario: Scenario) -> "Engine":
        return cls(scenario)

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    def _build(self) -> None:
        scn = self.scenario
        for user in scn.users:
            self.graph.add_user(user)

        for item in scn.data_items:
            if not self.graph.has_user(item.owner):
                raise ScenarioReferenceError("data_items", item.owner)
            self.data.set_item(item.owner, item.name, item.value, item.sensitivity)

        ctx = self.data.attribute_context()
        for definition in scn.apps:
            self.profiles.register_tpa(definition, ctx)

        for edge in scn.edges:
            self.graph.add_relationship(edge.source, edge.target, edge.relation, edge.trust)

        for spec in scn.policies:
            if not self.graph.has_user(spec.owner):
                raise ScenarioReferenceError("policies", spec.owner)
            self._check_policy_refs(spec)
            self.policies.add(spec.owner, spec.policy, spec.policy_id)

        for grant in scn.grants:
            if not self.graph.has_user(grant.user):
                raise ScenarioReferenceError("grants", grant.user)
            if not self.profiles.has_app(grant.app):
                raise ScenarioReferenceError("grants", grant.app)
            opts = {
                attribute: (value if level is None else (value, level))
                for attribute, value, level in grant.generalizations
            }
            self.dam.consent_and_issue(grant.user, grant.app, grant.scopes, opts)
            self.grants[(grant.user, grant.app)] = frozenset(grant.scopes)

        for spec in scn.generalizations:
            if not self.graph.has_user(spec.user):
                raise ScenarioReferenceError("generalizations", spec.user)
            if not self.profiles.has_app(spec.app):
                raise ScenarioReferenceError("generalizations", spec.app)
            self.generalizer.opt_generalize(
                spec.user, spec.app, spec.attribute, spec.value, spec.level
            )

        for event in scn.trace:
            if isinstance(event, RequestEvent):
                if not self.profiles.has_component(event.app, event.component):
                    raise ScenarioReferenceError("trace", f"{event.app}:{event.component}")
                if not self.graph.has_user(event.owner):
                    raise ScenarioReferenceError("trace", event.owner)
            else:
                if not self.profiles.has_app(event.app):
                    raise ScenarioReferenceError("trace", event.app)
                self.profiles.resolve_ref(event.app, event.source)

    def _check_policy_refs(self, spec) -> None:
        policy = spec.policy
        known_attributes = {item.name for item in self.data.all_items()}
        target = policy.target
        if target not in ("u", "-") and not self.graph.has_user(target):
            if policy.data is not None or target not in known_attributes:
                raise ScenarioReferenceError("policies", target)
        for name, sort, partner in condition_constants(policy.condition):
            if sort is Sort.USER:
                if not self.graph.has_user(name):
                    raise ScenarioReferenceError("policies", name)
            elif sort is Sort.APP:
                if not self.graph.has_app(name) and name != OSN_CORE:
                    raise ScenarioReferenceError("policies", name)
            else:
                if partner is not None and self.profiles.has_app(partner):
                    if not self.profiles.has_component(partner, name):
                        raise ScenarioReferenceError("policies", name)

    # ------------------------------------------------------------------
    # Trace execution
    # ------------------------------------------------------------------

    def run_trace(self) -> RunResult:
        """Execute the scenario trace in order; logs use logical timestamps.

        Both logs restart from 1 so a replay of the same scenario yields
        byte-identical output.
        """
        self.plc.reset_log()
        self.dam.decision_log.clear()
        result = RunResult()
        for event in self.scenario.trace:
            if isinstance(event, RequestEvent):
                request = AccessRequest(
                    app=event.app,
                    component=event.component,
                    owner=event.owner,
                    attribute=event.attribute,
                    actions=frozenset(event.actions),
                )
                token = self.dam.find_token(event.owner, event.app)
                decision = self.dam.evaluate_request(token, request)
                result.decisions.append(decision)
                if decision.alert is not None:
                    result.alerts.append(decision.alert)
            elif isinstance(event, FlowSpec):
                self.plc.check_flow(
                    FlowEvent(
                        app=event.app,
                        source=event.source,
                        sink=event.sink,
                        payload=frozenset(event.payload),
                        user=event.user,
                    )
                )
            else:  # pragma: no cover - parser only emits the two kinds
                raise TypeError(f"unknown trace event {event!r}")
        result.flows = self.plc.log
        result.alerts.extend(self.plc.detect_anomaly(result.flows))
        return result
