"""Third-party app definitions: components, flow profiles, and registration.

An app splits into internal components (hosted on the platform, may touch
private data) and external components (hosted anywhere, must never consume
private data). Registration validates the declared information-flow profile
before the app gets a vertex in the graph.

The reserved profile id ``osn.core`` holds platform-provided shared
components. They are callable from every app but may only feed internal
components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Optional

from .errors import (
    DuplicateAppError,
    DuplicateIdError,
    ProfileRejectedError,
    UnknownAppError,
    UnknownComponentError,
)
from .userdata import SensitivityLevel

OSN_CORE = "osn.core"

# Actions that fetch a value; everything else is a write-style action checked
# against component outputs.
READ_ACTIONS = frozenset({"read", "access", "view", "get"})


def is_read_action(action: str) -> bool:
    return action in READ_ACTIONS


class ComponentKind(Enum):
    INTERNAL = 0
    EXTERNAL = 1


class ViolationKind(Enum):
    DANGLING_ADJACENCY = "dangling-adjacency"
    EXTERNAL_CONSUMES_PRIVATE = "external-consumes-private"
    REQUIRED_DATA_MISMATCH = "required-data-mismatch"


@dataclass(frozen=True)
class Violation:
    kind: ViolationKind
    component: Optional[str]
    subject: Optional[str] = None

    def __str__(self) -> str:
        parts = [self.kind.value]
        if self.component:
            parts.append(self.component)
        if self.subject:
            parts.append(self.subject)
        return "(" + ", ".join(parts) + ")"


@dataclass(frozen=True)
class ComponentProfile:
    """One component row: what it reads, what it does, who it may call."""

    id: str
    kind: ComponentKind
    inputs: frozenset[str] = frozenset()
    outputs: frozenset[str] = frozenset()
    adjacent: frozenset[str] = frozenset()
    external_entities: frozenset[str] = frozenset()

    @property
    def is_external(self) -> bool:
        return self.kind is ComponentKind.EXTERNAL


@dataclass
class InformationFlowProfile:
    """Declared information-use behavior of an app."""

    app: str
    title: str
    domain: str
    callback_url: str
    required_data: frozenset[str]
    actions: frozenset[str]
    components: tuple[ComponentProfile, ...]
    by_id: dict[str, ComponentProfile] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        self.by_id = {}
        for comp in self.components:
            if comp.id in self.by_id:
                raise DuplicateIdError(f"component {comp.id!r} declared twice in {self.app!r}")
            self.by_id[comp.id] = comp

    def component(self, cid: str) -> ComponentProfile:
        try:
            return self.by_id[cid]
        except KeyError:
            raise UnknownComponentError(f"app {self.app!r} has no component {cid!r}") from None

    @property
    def internal_ids(self) -> frozenset[str]:
        return frozenset(c.id for c in self.components if not c.is_external)

    @property
    def external_ids(self) -> frozenset[str]:
        return frozenset(c.id for c in self.components if c.is_external)


@dataclass
class TpaDefinition:
    """An app as submitted for registration: components plus app-local objects.

    ``data_items`` labels intermediate objects the app manipulates, each with
    the sensitivity assigned at creation.
    """

    app: str
    profile: InformationFlowProfile
    data_items: dict[str, SensitivityLevel] = field(default_factory=dict)

    @property
    def internal(self) -> frozenset[str]:
        return self.profile.internal_ids

    @property
    def external(self) -> frozenset[str]:
        return self.profile.external_ids


def validate_profile(
    profile: InformationFlowProfile,
    sensitivity_ctx: Mapping[str, SensitivityLevel],
) -> list[Violation]:
    """Return every admissibility violation of a profile; empty means admissible.

    Checks, in terms of the context mapping attribute names to levels:
      * adjacency references resolve within the app,
      * no external component consumes a private attribute,
      * the required-data list equals the union of component inputs that
        name known user attributes.

    Attributes absent from the context are treated as app-local (not user
    data) and stay out of the required-data comparison.
    """
    violations: set[Violation] = set()
    user_inputs: set[str] = set()
    for comp in profile.components:
        for ref in comp.adjacent:
            if ref not in profile.by_id and not ref.startswith(OSN_CORE + ":"):
                violations.add(Violation(ViolationKind.DANGLING_ADJACENCY, comp.id, ref))
        for attr in comp.inputs:
            level = sensitivity_ctx.get(attr)
            if level is None:
                continue
            user_inputs.add(attr)
            if comp.is_external and level.is_private:
                violations.add(
                    Violation(ViolationKind.EXTERNAL_CONSUMES_PRIVATE, comp.id, attr)
                )
    if frozenset(user_inputs) != profile.required_data:
        missing = sorted(user_inputs - profile.required_data)
        extra = sorted(profile.required_data - user_inputs)
        detail = "missing=" + ",".join(missing) + ";extra=" + ",".join(extra)
        violations.add(Violation(ViolationKind.REQUIRED_DATA_MISMATCH, None, detail))
    return sorted(
        violations, key=lambda v: (v.kind.value, v.component or "", v.subject or "")
    )


class ProfileStore:
    """Registration authority and append-only profile database."""

    def __init__(self, graph) -> None:
        self._graph = graph
        self._defs: dict[str, TpaDefinition] = {}
        self._title_domain: set[tuple[str, str]] = set()

    def register_tpa(
        self,
        definition: TpaDefinition,
        sensitivity_ctx: Mapping[str, SensitivityLevel],
    ) -> str:
        profile = definition.profile
        app = definition.app
        if app in self._defs:
            raise DuplicateAppError(f"app {app!r} already registered")
        key = (profile.title, profile.domain)
        if key in self._title_domain:
            raise DuplicateAppError(f"app with title/domain {key!r} already registered")
        violations = validate_profile(profile, sensitivity_ctx)
        if app == OSN_CORE:
            # Shared platform components must all be internal; the usual
            # external-consumption rule is then vacuous for them.
            externals = profile.external_ids
            if externals:
                violations.append(
                    Violation(
                        ViolationKind.EXTERNAL_CONSUMES_PRIVATE,
                        sorted(externals)[0],
                        "shared components must be internal",
                    )
                )
        if violations:
            raise ProfileRejectedError(violations)
        if app != OSN_CORE:
            self._graph.add_app(app)
        self._defs[app] = definition
        self._title_domain.add(key)
        return app

    # ------------------------------------------------------------------
    # Lookups
    # ------------------------------------------------------------------

    def definition(self, app: str) -> TpaDefinition:
        try:
            return self._defs[app]
        except KeyError:
            raise UnknownAppError(f"app {app!r} not registered") from None

    def profile(self, app: str) -> InformationFlowProfile:
        return self.definition(app).profile

    def has_app(self, app: str) -> bool:
        return app in self._defs

    def apps(self) -> list[str]:
        """Registered third-party apps, excluding the shared platform profile."""
        return sorted(a for a in self._defs if a != OSN_CORE)

    def component(self, app: str, cid: str) -> ComponentProfile:
        return self.profile(app).component(cid)

    def has_component(self, app: str, cid: str) -> bool:
        return self.has_app(app) and cid in self.profile(app).by_id

    def is_external(self, app: str, cid: str) -> bool:
        return self.component(app, cid).is_external

    def components(self, app: str) -> list[str]:
        return sorted(self.profile(app).by_id)

    def hosted_components(self, app: str) -> frozenset[str]:
        """Internal component ids, i.e. the ones hosted on the platform."""
        return self.profile(app).internal_ids

    def app_local_level(self, app: str, label: str) -> Optional[SensitivityLevel]:
        return self.definition(app).data_items.get(label)

    # ------------------------------------------------------------------
    # Consistency checks used by the request pipeline
    # ------------------------------------------------------------------

    def component_permits(self, app: str, cid: str, target: str, action: str) -> bool:
        """Does the component's declared row cover this target/action?

        Read-style actions must name a declared input; anything else must be
        a declared output action.
        """
        comp = self.component(app, cid)
        if is_read_action(action):
            return target in comp.inputs
        return action in comp.outputs

    def resolve_ref(self, app: str, ref: str) -> tuple[str, str]:
        """Resolve a component reference that may be qualified with osn.core."""
        if ref.startswith(OSN_CORE + ":"):
            owner, cid = OSN_CORE, ref.split(":", 1)[1]
        else:
            owner, cid = app, ref
        if not self.has_component(owner, cid):
            raise UnknownComponentError(f"no component {ref!r} reachable from app {app!r}")
        return owner, cid

    def may_call(self, app: str, source_ref: str, sink_ref: str) -> bool:
        """Adjacency check between two component references of one app.

        Shared osn.core components are callable from anywhere, and may
        themselves only call internal components of the app.
        """
        src_owner, src_cid = self.resolve_ref(app, source_ref)
        dst_owner, dst_cid = self.resolve_ref(app, sink_ref)
        if dst_owner == OSN_CORE:
            return True
        if src_owner == OSN_CORE:
            return not self.is_external(dst_owner, dst_cid)
        return sink_ref in self.component(src_owner, src_cid).adjacent
