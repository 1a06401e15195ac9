"""Reference evaluator and audits.

Everything here re-derives decisions from the scenario facts without going
through the engine's evaluator or pipeline, so the two routes can be
compared. ``brute_eval`` enumerates full sort universes and folds quantifier
guards logically instead of filtering domains; ``derive_decision`` rebuilds
the authorization, profile, flow and policy layers from first principles.

``audit`` sweeps every (component, data item, action) triple and reports
two failure modes: oversharing, where the engine grants something the rules
cannot derive, and undersharing, where the engine denies something they do.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

from .errors import TooLargeError, UnknownConstantError, UnknownPredicateError
from .policylang import (
    COMPONENT_PREDICATES,
    CORE_PREDICATES,
    AccessRequest,
    Condition,
    Literal,
    Policy,
    QuantifiedVar,
    Quant,
    Sort,
    StoredPolicy,
)
from .profiles import READ_ACTIONS
from .userdata import SensitivityLevel

ENUMERATION_GUARD = 10**6


def _check_guard(graph, profiles) -> None:
    max_components = max(
        (len(profiles.components(app)) for app in profiles.apps()), default=1
    )
    size = max(len(graph.users), 1) * max(len(graph.apps), 1) * max(max_components, 1)
    if size > ENUMERATION_GUARD:
        raise TooLargeError(f"{size} bindings exceed the enumeration guard")


# ---------------------------------------------------------------------------
# Brute-force condition evaluation
# ---------------------------------------------------------------------------


def _universe(sort: Sort, graph, profiles) -> list:
    if sort is Sort.USER:
        return list(graph.users)
    if sort is Sort.APP:
        return list(graph.apps)
    out = []
    for app in profiles.apps():
        for cid in profiles.components(app):
            out.append((app, cid))
    return out


def _atom(literal: Literal, binding: Mapping[str, object], graph, profiles) -> bool:
    predicate = literal.predicate
    sorts = CORE_PREDICATES.get(predicate, (Sort.USER, Sort.USER))
    values = []
    for arg, sort in zip(literal.args, sorts):
        if arg in binding:
            values.append(binding[arg])
        elif sort is Sort.USER:
            if not graph.has_user(arg):
                raise UnknownConstantError(f"unknown user constant {arg!r}")
            values.append(arg)
        elif sort is Sort.APP:
            if not graph.has_app(arg) and not profiles.has_app(arg):
                raise UnknownConstantError(f"unknown app constant {arg!r}")
            values.append(arg)
        else:
            values.append(arg)
    left, right = values
    if predicate in COMPONENT_PREDICATES:
        if isinstance(left, tuple):
            owner, cid = left
            member = owner == right
        else:
            cid = left
            if not profiles.has_component(right, cid):
                raise UnknownConstantError(f"no component {cid!r} in app {right!r}")
            member = True
        if not member:
            result = False
        elif predicate == "int_component":
            result = not profiles.is_external(right, cid)
        elif predicate == "ext_component":
            result = profiles.is_external(right, cid)
        else:
            result = True
    elif predicate == "installed":
        result = graph.is_installed(left, right)
    else:
        decl = graph.relation_for_predicate(predicate)
        if decl is None:
            raise UnknownPredicateError(f"predicate {predicate!r} is not declared")
        result = graph.related(left, right, decl.name)
    return not result if literal.negated else result


def _enumerate(
    prefix: Sequence[QuantifiedVar],
    literals: Sequence[Literal],
    binding: dict,
    env: Mapping[str, object],
    graph,
    profiles,
) -> bool:
    remaining = {qv.name for qv in prefix}
    ready = [lit for lit in literals if not (set(lit.args) & remaining)]
    pending = [lit for lit in literals if set(lit.args) & remaining]
    for literal in ready:
        if not _atom(literal, binding, graph, profiles):
            return False
    if not prefix:
        return True

    qv, rest = prefix[0], prefix[1:]
    if qv.name in env:
        # The environment pins this variable; no iteration happens and the
        # quantifier only contributes its (possible) negation.
        value = _enumerate(
            rest, pending, {**binding, qv.name: env[qv.name]}, env, graph, profiles
        )
        return not value if qv.quant is Quant.NOTEXISTS else value

    later = {q.name for q in rest}
    guard_index: Optional[int] = None
    for idx, literal in enumerate(pending):
        if (
            qv.name in literal.args
            and not (set(literal.args) & later)
            and not literal.negated
        ):
            guard_index = idx
            break
    guard = pending[guard_index] if guard_index is not None else None
    matrix = [lit for idx, lit in enumerate(pending) if idx != guard_index]

    outcomes = []
    for candidate in _universe(qv.sort, graph, profiles):
        extended = {**binding, qv.name: candidate}
        admitted = guard is None or _atom(guard, extended, graph, profiles)
        inner = _enumerate(rest, matrix, extended, env, graph, profiles)
        if qv.quant is Quant.FORALL:
            outcomes.append((not admitted) or inner)
        else:
            outcomes.append(admitted and inner)
    if qv.quant is Quant.FORALL:
        return all(outcomes)
    if qv.quant is Quant.EXISTS:
        return any(outcomes)
    return not any(outcomes)


def brute_eval(condition: Condition, env: Mapping[str, object], graph, profiles) -> bool:
    """Exhaustively evaluate a condition; must agree with the engine evaluator."""
    _check_guard(graph, profiles)
    return _enumerate(list(condition.prefix), list(condition.literals), dict(env), env, graph, profiles)


# ---------------------------------------------------------------------------
# Independent decision derivation
# ---------------------------------------------------------------------------


def _oracle_applicable(stored: StoredPolicy, request: AccessRequest, graph, profiles) -> bool:
    policy = stored.policy
    names = {a.name for a in policy.actions}
    if not (request.actions & names):
        return False
    target = policy.target
    if policy.data is not None:
        if request.attribute not in policy.data:
            return False
        if target in ("u", "-"):
            if request.owner != stored.owner:
                return False
        elif graph.has_user(target):
            if request.owner != target:
                return False
        else:
            return False
    else:
        if target in ("u", "-"):
            if request.owner != stored.owner:
                return False
        elif graph.has_user(target):
            if request.owner != target:
                return False
        elif request.attribute != target:
            return False
    env = {"u": request.owner, "A": request.app, "c": (request.app, request.component)}
    return brute_eval(policy.condition, env, graph, profiles)


def _oracle_effective(policy: Policy, request: AccessRequest) -> int:
    negated = {a.name for a in policy.actions if a.negated}
    if request.actions & negated:
        return 1 - policy.decision
    return policy.decision


def _edge_trust(graph, source: str, target: str) -> float:
    trusts = [
        edge.trust
        for edge in graph.edges
        if edge.source == source and edge.target == target
    ]
    return max(trusts) if trusts else 0.0


def derive_decision(
    request: AccessRequest,
    *,
    graph,
    data,
    profiles,
    policies,
    generalizer,
    grants: Mapping[tuple[str, str], frozenset[str]],
) -> tuple[bool, str]:
    """Recompute the decision for a request from the scenario facts.

    Returns (granted, layer); the layer names which rule settled it.
    """
    scopes = grants.get((request.owner, request.app))
    if scopes is None:
        return False, "authorization"
    if request.attribute not in scopes:
        return False, "authorization"

    component = profiles.component(request.app, request.component)
    for action in request.actions:
        if action in READ_ACTIONS:
            if request.attribute not in component.inputs:
                return False, "profile"
        elif action not in component.outputs:
            return False, "profile"

    if component.is_external:
        level = _effective_release_level(request, data, profiles, generalizer)
        if level is not None and level.is_private:
            return False, "flow"

    if not data.has_item(request.owner, request.attribute):
        return False, "no-item"

    entries: list[tuple[str, str, int]] = []
    for stored in policies.all():
        if _oracle_applicable(stored, request, graph, profiles):
            entries.append(
                (stored.owner, stored.policy_id, _oracle_effective(stored.policy, request))
            )
    if entries:
        own = [e for e in entries if e[0] == request.owner]
        if own:
            decision = min(own, key=lambda e: (e[2], e[1]))[2]
        else:
            decision = min(
                entries,
                key=lambda e: (-_edge_trust(graph, request.owner, e[0]), e[0], e[2], e[1]),
            )[2]
        return decision == 1, "policy"

    level = data.get_item(request.owner, request.attribute).sensitivity
    return not level.is_private, "default"


def _effective_release_level(
    request: AccessRequest, data, profiles, generalizer
) -> Optional[SensitivityLevel]:
    if generalizer.has_entry(request.owner, request.app, request.attribute):
        return SensitivityLevel.NS
    if data.has_item(request.owner, request.attribute):
        return data.get_item(request.owner, request.attribute).sensitivity
    app_local = profiles.app_local_level(request.app, request.attribute)
    if app_local is not None:
        return app_local
    return data.attribute_ceiling(request.attribute)


# ---------------------------------------------------------------------------
# Audit
# ---------------------------------------------------------------------------

Triple = tuple[str, str, str, str, str]  # app, component, owner, attribute, action


@dataclass
class AuditReport:
    oversharing: list[Triple] = field(default_factory=list)
    undersharing: list[Triple] = field(default_factory=list)
    checked: int = 0

    @property
    def is_clean(self) -> bool:
        return not self.oversharing and not self.undersharing

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "oversharing": [list(t) for t in self.oversharing],
            "undersharing": [list(t) for t in self.undersharing],
        }

    def to_text(self) -> str:
        lines = [f"checked {self.checked} request triples"]
        if self.is_clean:
            lines.append("no oversharing, no undersharing")
        for triple in self.oversharing:
            lines.append("oversharing: " + "/".join(triple))
        for triple in self.undersharing:
            lines.append("undersharing: " + "/".join(triple))
        return "\n".join(lines)


def audit(
    sim,
    decide: Optional[Callable[[object, AccessRequest], object]] = None,
) -> AuditReport:
    """Compare the engine against the derived decision on every triple.

    ``sim`` is an Engine-like bundle exposing graph, data, profiles,
    policies, generalizer, dam and the grants mapping. ``decide`` overrides
    the engine decision function, which lets a fault harness inject wrong
    answers and prove the audit catches them.
    """
    _check_guard(sim.graph, sim.profiles)
    decide = decide or sim.dam.evaluate_request
    report = AuditReport()
    items = sim.data.all_items()
    total = sum(
        len(sim.profiles.components(app)) * len(sim.profiles.profile(app).actions)
        for app in sim.profiles.apps()
    ) * len(items)
    if total > ENUMERATION_GUARD:
        raise TooLargeError(f"{total} triples exceed the enumeration guard")
    for app in sim.profiles.apps():
        actions = sorted(sim.profiles.profile(app).actions)
        for cid in sim.profiles.components(app):
            for item in items:
                for action in actions:
                    request = AccessRequest(
                        app, cid, item.owner, item.name, frozenset({action})
                    )
                    token = sim.dam.find_token(item.owner, app)
                    engine_granted = bool(decide(token, request).granted)
                    derived_granted, _ = derive_decision(
                        request,
                        graph=sim.graph,
                        data=sim.data,
                        profiles=sim.profiles,
                        policies=sim.policies,
                        generalizer=sim.generalizer,
                        grants=sim.grants,
                    )
                    report.checked += 1
                    triple = (app, cid, item.owner, item.name, action)
                    if engine_granted and not derived_granted:
                        report.oversharing.append(triple)
                    elif derived_granted and not engine_granted:
                        report.undersharing.append(triple)
    return report
