import pytest

from rebacsim import SocialGraph
from rebacsim.errors import (
    DuplicateEdgeError,
    DuplicateIdError,
    InvalidIdError,
    TrustOutOfRangeError,
    UnknownEndpointError,
    UnknownRelationError,
    UnregisteredAppError,
)

from conftest import make_graph


def test_add_user():
    graph = SocialGraph()
    graph.add_user("tom")
    assert graph.has_user("tom")


def test_add_user_twice_rejected():
    graph = SocialGraph()
    graph.add_user("tom")
    with pytest.raises(DuplicateIdError):
        graph.add_user("tom")


def test_add_user_empty_rejected():
    with pytest.raises(InvalidIdError):
        SocialGraph().add_user("")


def test_user_and_app_namespaces_do_not_overlap():
    graph = SocialGraph()
    graph.add_user("mario")
    with pytest.raises(DuplicateIdError):
        graph.add_app("mario")


def test_add_relationship_and_queries():
    graph = make_graph(
        users=["adam", "meena", "ajay", "jitendra"],
        edges=[
            ("adam", "meena", "colleague", 0.6),
            ("ajay", "jitendra", "family_friend", 0.9),
        ],
    )
    assert graph.related("adam", "meena", "colleague")
    assert not graph.related("meena", "adam", "colleague")  # directed
    assert graph.neighbors("ajay", "family_friend") == {"jitendra"}
    assert graph.trust_between("adam", "meena") == pytest.approx(0.6)
    assert graph.trust_between("meena", "adam") is None


def test_related_unknown_endpoint():
    graph = make_graph(users=["adam"])
    with pytest.raises(UnknownEndpointError):
        graph.related("adam", "ghost", "friend")


def test_unknown_relation_rejected():
    graph = make_graph(users=["a", "b"])
    with pytest.raises(UnknownRelationError):
        graph.add_relationship("a", "b", "nemesis", 0.1)


def test_trust_range_enforced():
    graph = make_graph(users=["a", "b"])
    with pytest.raises(TrustOutOfRangeError):
        graph.add_relationship("a", "b", "friend", 1.5)


def test_duplicate_edge_rejected():
    graph = make_graph(users=["a", "b"], edges=[("a", "b", "friend", 0.5)])
    with pytest.raises(DuplicateEdgeError):
        graph.add_relationship("a", "b", "friend", 0.7)


def test_app_edge_trust_strict_vs_lenient():
    strict = SocialGraph(strict_trust=True)
    strict.add_user("u")
    strict.add_app("appx")
    with pytest.raises(TrustOutOfRangeError):
        strict.add_relationship("u", "appx", "installed", 0.5)

    lenient = SocialGraph(strict_trust=False)
    lenient.add_user("u")
    lenient.add_app("appx")
    lenient.add_relationship("u", "appx", "installed", 0.5)
    assert lenient.edges[0].trust == 0.0  # coerced


def test_install_app():
    graph = SocialGraph()
    for user in ("meena", "adam", "jerry"):
        graph.add_user(user)
    for app in ("mario", "minesweeper"):
        graph.add_app(app)
    graph.install_app("meena", "mario")
    graph.install_app("adam", "minesweeper")
    assert graph.is_installed("meena", "mario")
    assert not graph.is_installed("jerry", "mario")
    installed_edges = [e for e in graph.edges if e.relation == "installed"]
    assert len(installed_edges) == 2


def test_install_is_idempotent():
    graph = SocialGraph()
    graph.add_user("meena")
    graph.add_app("mario")
    graph.install_app("meena", "mario")
    graph.install_app("meena", "mario")
    assert len(graph.edges) == 1


def test_install_requires_registered_app():
    graph = SocialGraph()
    graph.add_user("meena")
    with pytest.raises(UnregisteredAppError):
        graph.install_app("meena", "mario")


def test_related_agrees_with_edge_scan():
    graph = make_graph(
        users=["a", "b", "c"],
        edges=[
            ("a", "b", "friend", 0.5),
            ("b", "c", "family", 0.8),
            ("c", "a", "coworker", 0.2),
        ],
    )
    relations = [d.name for d in graph.relations]
    for source in graph.users:
        for target in graph.users:
            for relation in relations:
                scanned = any(
                    e.source == source and e.target == target and e.relation == relation
                    for e in graph.edges
                )
                assert graph.related(source, target, relation) == scanned


def test_serialization_round_trip():
    graph = make_graph(
        users=["a", "b"],
        edges=[("a", "b", "friend", 0.5), ("b", "a", "friend", 0.5)],
    )
    graph.add_app("mario")
    graph.install_app("a", "mario")
    assert SocialGraph.from_dict(graph.to_dict()) == graph
