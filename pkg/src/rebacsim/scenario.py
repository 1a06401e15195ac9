"""Scenario files: one JSON document describing a whole simulated world.

Sections (all lists unless noted): ``relations``, ``graph`` (object with
``users`` and ``edges``), ``apps``, ``data_items``, ``policies``,
``grants``, ``generalizations``, ``trace``. Loading is all-or-nothing: a
scenario that parses but fails referential validation raises before any
engine state becomes visible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Union

from .errors import ParseError, RebacError
from .graph import DEFAULT_RELATIONS, RelationDecl, RelationKind
from .policylang import Policy, parse_policy
from .profiles import (
    ComponentKind,
    ComponentProfile,
    InformationFlowProfile,
    TpaDefinition,
)
from .userdata import SensitivityLevel, parse_level


@dataclass(frozen=True)
class EdgeSpec:
    source: str
    target: str
    relation: str
    trust: float


@dataclass(frozen=True)
class ItemSpec:
    owner: str
    name: str
    value: tuple[str, ...]
    sensitivity: SensitivityLevel


@dataclass(frozen=True)
class PolicySpec:
    policy_id: Optional[str]
    owner: str
    policy: Policy
    text: str


@dataclass(frozen=True)
class GrantSpec:
    user: str
    app: str
    scopes: tuple[str, ...]
    generalizations: tuple[tuple[str, tuple[str, ...], Optional[int]], ...] = ()


@dataclass(frozen=True)
class GeneralizationSpec:
    user: str
    app: str
    attribute: str
    value: tuple[str, ...]
    level: Optional[int]


@dataclass(frozen=True)
class RequestEvent:
    app: str
    component: str
    owner: str
    attribute: str
    actions: tuple[str, ...]


@dataclass(frozen=True)
class FlowSpec:
    app: str
    source: str
    sink: str
    payload: tuple[str, ...]
    user: Optional[str] = None


TraceEvent = Union[RequestEvent, FlowSpec]


@dataclass
class Scenario:
    relations: list[RelationDecl] = field(default_factory=lambda: list(DEFAULT_RELATIONS))
    strict_trust: bool = True
    users: list[str] = field(default_factory=list)
    edges: list[EdgeSpec] = field(default_factory=list)
    apps: list[TpaDefinition] = field(default_factory=list)
    data_items: list[ItemSpec] = field(default_factory=list)
    policies: list[PolicySpec] = field(default_factory=list)
    grants: list[GrantSpec] = field(default_factory=list)
    generalizations: list[GeneralizationSpec] = field(default_factory=list)
    trace: list[TraceEvent] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def _expect(payload: dict, key: str, kind, location: str):
    if key not in payload:
        raise ParseError(location, f"missing key {key!r}")
    value = payload[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(location, f"key {key!r} has wrong type {type(value).__name__}")
    return value


def _str_list(payload, key: str, location: str, default=None) -> list[str]:
    if key not in payload:
        if default is not None:
            return list(default)
        raise ParseError(location, f"missing key {key!r}")
    value = payload[key]
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise ParseError(location, f"key {key!r} must be a list of strings")
    return value


def _parse_relations(raw, location: str) -> list[RelationDecl]:
    decls = list(DEFAULT_RELATIONS)
    names = {d.name for d in decls}
    for idx, entry in enumerate(raw):
        loc = f"{location}[{idx}]"
        name = _expect(entry, "name", str, loc)
        kind = RelationKind(entry.get("kind", "user_user"))
        predicate = entry.get("predicate")
        decl = RelationDecl(name, kind, predicate)
        if name in names:
            decls = [decl if d.name == name else d for d in decls]
        else:
            decls.append(decl)
            names.add(name)
    return decls


def _parse_component(entry: dict, location: str) -> ComponentProfile:
    kind_raw = _expect(entry, "type", int, location)
    try:
        kind = ComponentKind(kind_raw)
    except ValueError:
        raise ParseError(location, f"component type must be 0 or 1, got {kind_raw}") from None
    return ComponentProfile(
        id=_expect(entry, "id", str, location),
        kind=kind,
        inputs=frozenset(_str_list(entry, "inputs", location, default=())),
        outputs=frozenset(_str_list(entry, "outputs", location, default=())),
        adjacent=frozenset(_str_list(entry, "adjacent", location, default=())),
        external_entities=frozenset(
            _str_list(entry, "external_entities", location, default=())
        ),
    )


def _parse_app(entry: dict, location: str) -> TpaDefinition:
    app_id = _expect(entry, "id", str, location)
    components = tuple(
        _parse_component(c, f"{location}.components[{i}]")
        for i, c in enumerate(_expect(entry, "components", list, location))
    )
    if not components:
        raise ParseError(location, "an app needs at least one component")
    profile = InformationFlowProfile(
        app=app_id,
        title=entry.get("title", app_id),
        domain=entry.get("domain", f"www.{app_id}.example"),
        callback_url=entry.get("callback_url", f"https://www.{app_id}.example/callback"),
        required_data=frozenset(_str_list(entry, "required_data", location, default=())),
        actions=frozenset(_str_list(entry, "actions", location, default=())),
        components=components,
    )
    data_items = {
        label: parse_level(level)
        for label, level in entry.get("data_items", {}).items()
    }
    return TpaDefinition(app=app_id, profile=profile, data_items=data_items)


def _parse_generalization_value(raw, location: str) -> tuple[tuple[str, ...], Optional[int]]:
    if isinstance(raw, list):
        return tuple(raw), None
    if isinstance(raw, str):
        return (raw,), None
    if isinstance(raw, dict):
        value = _str_list(raw, "value", location)
        level = raw.get("level")
        return tuple(value), level
    raise ParseError(location, "a generalization is a value list or {value, level}")


def loads(text: str, source: str = "<scenario>") -> Scenario:
    """Parse scenario JSON text into a Scenario, without reference validation."""
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(source, f"invalid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ParseError(source, "top level must be an object")

    scenario = Scenario()
    scenario.relations = _parse_relations(payload.get("relations", []), "relations")
    scenario.strict_trust = bool(payload.get("strict_trust", True))

    graph_section = payload.get("graph", {})
    scenario.users = _str_list(graph_section, "users", "graph", default=())
    for idx, edge in enumerate(graph_section.get("edges", [])):
        loc = f"graph.edges[{idx}]"
        scenario.edges.append(
            EdgeSpec(
                source=_expect(edge, "from", str, loc),
                target=_expect(edge, "to", str, loc),
                relation=_expect(edge, "relation", str, loc),
                trust=float(edge.get("trust", 0.0)),
            )
        )

    for idx, entry in enumerate(payload.get("apps", [])):
        scenario.apps.append(_parse_app(entry, f"apps[{idx}]"))

    for idx, entry in enumerate(payload.get("data_items", [])):
        loc = f"data_items[{idx}]"
        try:
            sensitivity = parse_level(_expect(entry, "sensitivity", None, loc))
        except RebacError as exc:
            raise ParseError(loc, str(exc)) from exc
        scenario.data_items.append(
            ItemSpec(
                owner=_expect(entry, "owner", str, loc),
                name=_expect(entry, "id", str, loc),
                value=tuple(_str_list(entry, "value", loc, default=())),
                sensitivity=sensitivity,
            )
        )

    for idx, entry in enumerate(payload.get("policies", [])):
        loc = f"policies[{idx}]"
        text_value = _expect(entry, "text", str, loc)
        try:
            policy = parse_policy(text_value)
        except RebacError as exc:
            raise ParseError(loc, str(exc)) from exc
        scenario.policies.append(
            PolicySpec(
                policy_id=entry.get("id"),
                owner=_expect(entry, "owner", str, loc),
                policy=policy,
                text=text_value,
            )
        )

    for idx, entry in enumerate(payload.get("grants", [])):
        loc = f"grants[{idx}]"
        generalizations = []
        for attribute, raw in entry.get("generalizations", {}).items():
            value, level = _parse_generalization_value(raw, loc)
            generalizations.append((attribute, value, level))
        scenario.grants.append(
            GrantSpec(
                user=_expect(entry, "user", str, loc),
                app=_expect(entry, "app", str, loc),
                scopes=tuple(_str_list(entry, "scopes", loc, default=())),
                generalizations=tuple(generalizations),
            )
        )

    for idx, entry in enumerate(payload.get("generalizations", [])):
        loc = f"generalizations[{idx}]"
        value, level = _parse_generalization_value(
            entry.get("value", entry.get("generalized_value")), loc
        )
        scenario.generalizations.append(
            GeneralizationSpec(
                user=_expect(entry, "user", str, loc),
                app=_expect(entry, "app", str, loc),
                attribute=_expect(entry, "attribute", str, loc),
                value=value,
                level=entry.get("level", level),
            )
        )

    for idx, entry in enumerate(payload.get("trace", [])):
        loc = f"trace[{idx}]"
        kind = _expect(entry, "kind", str, loc)
        if kind == "request":
            scenario.trace.append(
                RequestEvent(
                    app=_expect(entry, "app", str, loc),
                    component=_expect(entry, "component", str, loc),
                    owner=_expect(entry, "owner", str, loc),
                    attribute=_expect(entry, "attribute", str, loc),
                    actions=tuple(_str_list(entry, "actions", loc)),
                )
            )
        elif kind == "flow":
            scenario.trace.append(
                FlowSpec(
                    app=_expect(entry, "app", str, loc),
                    source=_expect(entry, "source", str, loc),
                    sink=_expect(entry, "sink", str, loc),
                    payload=tuple(_str_list(entry, "payload", loc)),
                    user=entry.get("user"),
                )
            )
        else:
            raise ParseError(loc, f"unknown trace event kind {kind!r}")

    return scenario


def load(path: str | Path) -> Scenario:
    """Load and fully validate a scenario file.

    Validation builds the whole engine once, so profile rejections and
    dangling references surface here rather than at run time.
    """
    from .engine import Engine

    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(path), f"cannot read file: {exc}") from exc
    scenario = loads(text, source=str(path))
    Engine.from_scenario(scenario)
    return scenario
