"""Shared builders for the test suite."""

from __future__ import annotations

from pathlib import Path

import pytest

from rebacsim import (
    ComponentKind,
    ComponentProfile,
    DataStore,
    InformationFlowProfile,
    ProfileStore,
    SensitivityLevel,
    SocialGraph,
    TpaDefinition,
)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def make_graph(users=(), edges=(), strict_trust=True) -> SocialGraph:
    graph = SocialGraph(strict_trust=strict_trust)
    for user in users:
        graph.add_user(user)
    for source, target, relation, trust in edges:
        graph.add_relationship(source, target, relation, trust)
    return graph


def make_app(
    app_id: str,
    components,
    required_data=None,
    actions=("read", "access", "post"),
    data_items=None,
) -> TpaDefinition:
    """components: iterable of (id, kind, inputs, outputs, adjacent, entities)."""
    comps = tuple(
        ComponentProfile(
            id=cid,
            kind=kind,
            inputs=frozenset(inputs),
            outputs=frozenset(outputs),
            adjacent=frozenset(adjacent),
            external_entities=frozenset(entities),
        )
        for cid, kind, inputs, outputs, adjacent, entities in components
    )
    if required_data is None:
        required_data = frozenset(i for c in comps for i in c.inputs)
    profile = InformationFlowProfile(
        app=app_id,
        title=app_id.title(),
        domain=f"www.{app_id}.example",
        callback_url=f"https://www.{app_id}.example/callback",
        required_data=frozenset(required_data),
        actions=frozenset(actions),
        components=comps,
    )
    return TpaDefinition(app=app_id, profile=profile, data_items=dict(data_items or {}))


def table2_components():
    return [
        ("C1", ComponentKind.INTERNAL, {"name", "dob"}, {"post"}, set(), {"www.horoscope.com"}),
        ("C2", ComponentKind.INTERNAL, {"friend_list"}, {"post"}, {"C1"}, set()),
        ("C3", ComponentKind.EXTERNAL, {"mouseclick"}, {"click"}, {"C1"}, set()),
        ("C4", ComponentKind.EXTERNAL, {"mousemovement"}, {"process"}, set(), set()),
    ]


TABLE2_CTX = {
    "name": SensitivityLevel.LS,
    "dob": SensitivityLevel.MS,
    "friend_list": SensitivityLevel.MS,
    "mouseclick": SensitivityLevel.NS,
    "mousemovement": SensitivityLevel.NS,
}


@pytest.fixture
def table2_world():
    """One user, the four-component app from the component-profile table."""
    graph = make_graph(users=["uma"])
    data = DataStore(graph)
    data.set_item("uma", "name", {"Uma N"}, SensitivityLevel.LS)
    data.set_item("uma", "dob", {"1990-04-12"}, SensitivityLevel.MS)
    data.set_item("uma", "friend_list", {"vera", "wes"}, SensitivityLevel.MS)
    data.set_item("uma", "mouseclick", {"stream-a"}, SensitivityLevel.NS)
    data.set_item("uma", "mousemovement", {"stream-b"}, SensitivityLevel.NS)
    profiles = ProfileStore(graph)
    profiles.register_tpa(
        make_app(
            "horoscope",
            table2_components(),
            actions=("read", "access", "share", "post", "process", "click"),
        ),
        TABLE2_CTX,
    )
    return graph, data, profiles


def scenario_path(name: str) -> str:
    return str(SCENARIOS / f"{name}.json")
