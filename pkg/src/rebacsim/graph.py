"""Directed social graph: users, registered apps, and trust-weighted edges.

Edges are directed; a mutual relationship needs one edge per direction.
User-to-app edges always carry trust 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Optional

from .errors import (
    DuplicateEdgeError,
    DuplicateIdError,
    InvalidIdError,
    TrustOutOfRangeError,
    UnknownEndpointError,
    UnknownRelationError,
    UnregisteredAppError,
)

INSTALLED = "installed"


class RelationKind(Enum):
    USER_USER = "user_user"
    USER_APP = "user_app"


@dataclass(frozen=True)
class RelationDecl:
    """A relation name in the vocabulary, with the predicate it answers to.

    ``predicate`` defaults to the relation name itself; it exists because
    policy conditions sometimes spell a relation differently (isfriend vs
    friend, colleagues vs colleague).
    """

    name: str
    kind: RelationKind = RelationKind.USER_USER
    predicate: Optional[str] = None

    @property
    def predicate_name(self) -> str:
        return self.predicate or self.name


DEFAULT_RELATIONS: tuple[RelationDecl, ...] = (
    RelationDecl("friend", RelationKind.USER_USER, "isfriend"),
    RelationDecl("family", RelationKind.USER_USER, "isfamily"),
    RelationDecl("classmate", RelationKind.USER_USER, "isclassmate"),
    RelationDecl("coworker", RelationKind.USER_USER, "iscoworker"),
    RelationDecl("colleague", RelationKind.USER_USER, "colleagues"),
    RelationDecl("family_friend", RelationKind.USER_USER),
    RelationDecl(INSTALLED, RelationKind.USER_APP),
)


@dataclass(frozen=True)
class RelationshipEdge:
    source: str
    target: str
    relation: str
    trust: float


class SocialGraph:
    """In-memory graph, mutable while a scenario loads and read-only afterwards.

    ``strict_trust`` controls what happens when a user-to-app edge arrives
    with nonzero trust: strict mode raises, lenient mode coerces to 0.
    """

    def __init__(
        self,
        *,
        strict_trust: bool = True,
        relations: Iterable[RelationDecl] = DEFAULT_RELATIONS,
    ) -> None:
        self.strict_trust = strict_trust
        self._users: set[str] = set()
        self._apps: set[str] = set()
        self._relations: dict[str, RelationDecl] = {}
        self._edges: list[RelationshipEdge] = []
        self._index: dict[tuple[str, str], dict[str, float]] = {}
        for decl in relations:
            self.declare_relation(decl)

    # ------------------------------------------------------------------
    # Vocabulary
    # ------------------------------------------------------------------

    def declare_relation(self, decl: RelationDecl) -> None:
        existing = self._relations.get(decl.name)
        if existing is not None and existing != decl:
            raise DuplicateIdError(f"relation {decl.name!r} already declared")
        self._relations[decl.name] = decl

    def relation(self, name: str) -> Optional[RelationDecl]:
        return self._relations.get(name)

    def relation_for_predicate(self, predicate: str) -> Optional[RelationDecl]:
        for decl in self._relations.values():
            if decl.predicate_name == predicate:
                return decl
        return None

    @property
    def relations(self) -> list[RelationDecl]:
        return sorted(self._relations.values(), key=lambda d: d.name)

    # ------------------------------------------------------------------
    # Vertices
    # ------------------------------------------------------------------

    def add_user(self, user_id: str) -> None:
        if not user_id or not isinstance(user_id, str):
            raise InvalidIdError("user id must be a non-empty string")
        if user_id in self._users or user_id in self._apps:
            raise DuplicateIdError(f"id {user_id!r} already present")
        self._users.add(user_id)

    def add_app(self, app_id: str) -> None:
        if not app_id or not isinstance(app_id, str):
            raise InvalidIdError("app id must be a non-empty string")
        if app_id in self._apps or app_id in self._users:
            raise DuplicateIdError(f"id {app_id!r} already present")
        self._apps.add(app_id)

    def has_user(self, user_id: str) -> bool:
        return user_id in self._users

    def has_app(self, app_id: str) -> bool:
        return app_id in self._apps

    @property
    def users(self) -> list[str]:
        return sorted(self._users)

    @property
    def apps(self) -> list[str]:
        return sorted(self._apps)

    # ------------------------------------------------------------------
    # Edges
    # ------------------------------------------------------------------

    def add_relationship(self, source: str, target: str, relation: str, trust: float) -> None:
        if source not in self._users:
            raise UnknownEndpointError(f"unknown user {source!r}")
        target_is_app = target in self._apps
        if not target_is_app and target not in self._users:
            raise UnknownEndpointError(f"unknown endpoint {target!r}")
        decl = self._relations.get(relation)
        if decl is None:
            raise UnknownRelationError(f"relation {relation!r} not declared")
        expected = RelationKind.USER_APP if target_is_app else RelationKind.USER_USER
        if decl.kind is not expected:
            raise UnknownRelationError(
                f"relation {relation!r} is not a {expected.value} relation"
            )
        if not 0.0 <= trust <= 1.0:
            raise TrustOutOfRangeError(f"trust {trust} outside [0, 1]")
        if target_is_app and trust != 0.0:
            if self.strict_trust:
                raise TrustOutOfRangeError("user-to-app edges must carry trust 0")
            trust = 0.0
        slot = self._index.setdefault((source, relation), {})
        if target in slot:
            raise DuplicateEdgeError(f"edge ({source}, {target}, {relation}) already present")
        slot[target] = trust
        self._edges.append(RelationshipEdge(source, target, relation, trust))

    def install_app(self, user: str, app: str) -> None:
        """Record an install edge; repeated installs are a no-op."""
        if user not in self._users:
            raise UnknownEndpointError(f"unknown user {user!r}")
        if app not in self._apps:
            raise UnregisteredAppError(f"app {app!r} not registered")
        if not self.is_installed(user, app):
            self.add_relationship(user, app, INSTALLED, 0.0)

    @property
    def edges(self) -> list[RelationshipEdge]:
        return list(self._edges)

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def is_installed(self, user: str, app: str) -> bool:
        return app in self._index.get((user, INSTALLED), {})

    def related(self, source: str, target: str, relation: str) -> bool:
        self._check_endpoint(source)
        self._check_endpoint(target)
        return target in self._index.get((source, relation), {})

    def neighbors(self, source: str, relation: str) -> set[str]:
        self._check_endpoint(source)
        return set(self._index.get((source, relation), {}))

    def trust_between(self, source: str, target: str) -> Optional[float]:
        """Maximum trust over all edges from source to target, or None."""
        self._check_endpoint(source)
        self._check_endpoint(target)
        trusts = [
            edge.trust
            for edge in self._edges
            if edge.source == source and edge.target == target
        ]
        return max(trusts) if trusts else None

    def _check_endpoint(self, vertex: str) -> None:
        if vertex not in self._users and vertex not in self._apps:
            raise UnknownEndpointError(f"unknown endpoint {vertex!r}")

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "strict_trust": self.strict_trust,
            "relations": [
                {"name": d.name, "kind": d.kind.value, "predicate": d.predicate}
                for d in self.relations
            ],
            "users": self.users,
            "apps": self.apps,
            "edges": [
                {"from": e.source, "to": e.target, "relation": e.relation, "trust": e.trust}
                for e in self._edges
            ],
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "SocialGraph":
        relations = [
            RelationDecl(r["name"], RelationKind(r["kind"]), r.get("predicate"))
            for r in payload.get("relations", [])
        ] or list(DEFAULT_RELATIONS)
        graph = cls(strict_trust=payload.get("strict_trust", True), relations=relations)
        for user in payload.get("users", []):
            graph.add_user(user)
        for app in payload.get("apps", []):
            graph.add_app(app)
        for edge in payload.get("edges", []):
            graph.add_relationship(
                edge["from"], edge["to"], edge["relation"], float(edge.get("trust", 0.0))
            )
        return graph

    def __eq__(self, other) -> bool:
        if not isinstance(other, SocialGraph):
            return NotImplemented
        return (
            self._users == other._users
            and self._apps == other._apps
            and set(self._relations.values()) == set(other._relations.values())
            and set(self._edges) == set(other._edges)
        )
