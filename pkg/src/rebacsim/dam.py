"""Data authorization manager: consent capture, tokens, and the decision pipeline.

Consent works like a simulated delegation handshake: the user picks the
scopes (any subset of the app's required data) and optional generalized
values, the app gets an opaque token, and every later request must carry
that token. No cryptography, no transport; the token is server-side state.

``evaluate_request`` runs the pipeline in a fixed order:

  1. token checks: present, known, not revoked, bound to this user and app,
     and the attribute is inside the granted scopes. Failures deny quietly.
  2. profile consistency: the component's declared row must cover the
     request. Failures deny and raise a suspicious-access alert.
  3. external components route through the flow controller first; a blocked
     release denies with an unauthorized-flow alert.
  4. policy evaluation and conflict resolution; with no applicable policy
     the default is deny for private attributes and allow for public ones.

Cross-user conflicts resolve by target precedence, then by the most trusted
policy-authoring stakeholder with lexicographic tie-breaking.
"""

from __future__ import annotations

import secrets
from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Optional, Sequence, Union

from .alerts import Alert, AlertKind
from .errors import (
    EmptyDecisionSetError,
    UnknownOwnerError,
    UnknownScopeError,
    UnknownTokenError,
    UnregisteredAppError,
)
from .generalize import GeneralizationStore
from .plc import GENERALIZED_PREFIX, RESOURCE_MANAGER, FlowEvent, Verdict
from .policylang import (
    AccessRequest,
    PolicyStore,
    StoredPolicy,
    applicable,
    effective_decision,
)
from .profiles import is_read_action


@dataclass
class AccessToken:
    token_id: str
    user: str
    app: str
    granted_scopes: frozenset[str]
    issued_at: int
    revoked: bool = False


@dataclass(frozen=True)
class DecisionEntry:
    """One stakeholder's applicable policy and its effective decision."""

    stakeholder: str
    policy: StoredPolicy
    decision: int


@dataclass(frozen=True)
class Decision:
    request: AccessRequest
    granted: bool
    reason: str
    value: Optional[frozenset[str]] = None
    matched_policy: Optional[str] = None
    alert: Optional[Alert] = None
    timestamp: int = 0

    def to_dict(self) -> dict:
        record = self.request.to_dict()
        record.update(
            {
                "ts": self.timestamp,
                "outcome": "grant" if self.granted else "deny",
                "reason": self.reason,
                "value": sorted(self.value) if self.value is not None else None,
                "matched_policy": self.matched_policy,
                "alert": self.alert.to_dict() if self.alert else None,
            }
        )
        return record


class DataAuthorizationManager:
    def __init__(self, graph, data, profiles, policies: PolicyStore,
                 generalizer: GeneralizationStore, plc) -> None:
        self.graph = graph
        self.data = data
        self.profiles = profiles
        self.policies = policies
        self.generalizer = generalizer
        self.plc = plc
        self._tokens: dict[str, AccessToken] = {}
        self._issue_order: list[str] = []
        self.decision_log: list[Decision] = []

    # ------------------------------------------------------------------
    # Consent and tokens
    # ------------------------------------------------------------------

    def consent_and_issue(
        self,
        user: str,
        app: str,
        granted_scopes: Iterable[str],
        generalization_opts: Optional[Mapping[str, object]] = None,
    ) -> AccessToken:
        """Record consent, install the app for the user, and issue a token.

        ``granted_scopes`` may be any subset of the app's required data,
        including the empty set. ``generalization_opts`` maps attribute
        names to the generalized value (an iterable of strings) or to a
        ``(value, level)`` pair.
        """
        if not self.profiles.has_app(app):
            raise UnregisteredAppError(f"app {app!r} not registered")
        if not self.graph.has_user(user):
            raise UnknownOwnerError(f"unknown user {user!r}")
        scopes = frozenset(granted_scopes)
        required = self.profiles.profile(app).required_data
        unknown = scopes - required
        if unknown:
            raise UnknownScopeError(f"scopes {sorted(unknown)} not required by {app!r}")
        self.graph.install_app(user, app)
        for attribute, choice in (generalization_opts or {}).items():
            if isinstance(choice, tuple) and len(choice) == 2 and isinstance(choice[1], int):
                value, level = choice
            else:
                value, level = choice, None
            if isinstance(value, str):
                value = [value]
            self.generalizer.opt_generalize(user, app, attribute, value, level)
        token = AccessToken(
            token_id=secrets.token_hex(8),
            user=user,
            app=app,
            granted_scopes=scopes,
            issued_at=len(self._issue_order) + 1,
        )
        self._tokens[token.token_id] = token
        self._issue_order.append(token.token_id)
        return token

    def find_token(self, user: str, app: str) -> Optional[AccessToken]:
        """Most recent unrevoked token for the pair, if any."""
        for token_id in reversed(self._issue_order):
            token = self._tokens[token_id]
            if token.user == user and token.app == app and not token.revoked:
                return token
        return None

    def revoke_token(self, token_id: str) -> None:
        try:
            token = self._tokens[token_id]
        except KeyError:
            raise UnknownTokenError(f"unknown token {token_id!r}") from None
        token.revoked = True

    # ------------------------------------------------------------------
    # Request pipeline
    # ------------------------------------------------------------------

    def evaluate_request(
        self,
        token: Union[AccessToken, str, None],
        request: AccessRequest,
    ) -> Decision:
        decision = self._decide(token, request)
        decision = replace(decision, timestamp=len(self.decision_log) + 1)
        self.decision_log.append(decision)
        return decision

    def _decide(self, token, request: AccessRequest) -> Decision:
        # Step 1: the token must authorize this exact (user, app, attribute).
        reason = self._token_failure(token, request)
        if reason is not None:
            return Decision(request, granted=False, reason=reason)

        # Step 2: the component's declared profile must cover the request.
        permitted = all(
            self.profiles.component_permits(request.app, request.component, request.attribute, a)
            for a in sorted(request.actions)
        )
        if not permitted:
            alert = Alert(
                AlertKind.SUSPICIOUS_ACCESS_REQUEST,
                request.app,
                request.component,
                f"request for {request.attribute!r} outside the declared profile",
            )
            return Decision(request, granted=False, reason="profile-inconsistent", alert=alert)

        # Step 3: releases to external components pass the flow controller.
        if self.profiles.is_external(request.app, request.component):
            record = self.plc.check_flow(self._release_event(request))
            if record.verdict is Verdict.BLOCKED:
                alert = Alert(
                    AlertKind.UNAUTHORIZED_FLOW_ATTEMPT,
                    request.app,
                    request.component,
                    f"release of {request.attribute!r} blocked: {record.reason}",
                )
                return Decision(request, granted=False, reason="flow-blocked", alert=alert)

        # Step 4: policies, conflict resolution, default decision.
        if not self.data.has_item(request.owner, request.attribute):
            return Decision(request, granted=False, reason="no-such-item")
        entries = self.collect_entries(request)
        if entries:
            winner = self._resolve(entries, request.owner)
            if winner.decision == 1:
                return Decision(
                    request,
                    granted=True,
                    reason="policy-allow",
                    value=self._served_value(request),
                    matched_policy=winner.policy.policy_id,
                )
            return Decision(
                request,
                granted=False,
                reason="policy-deny",
                matched_policy=winner.policy.policy_id,
            )
        level = self.data.get_item(request.owner, request.attribute).sensitivity
        if level.is_private:
            return Decision(request, granted=False, reason="default-deny")
        return Decision(
            request, granted=True, reason="default-allow", value=self._served_value(request)
        )

    def _token_failure(self, token, request: AccessRequest) -> Optional[str]:
        if token is None:
            return "no-token"
        if isinstance(token, str):
            token = self._tokens.get(token)
            if token is None:
                return "invalid-token"
        elif self._tokens.get(token.token_id) is not token:
            return "invalid-token"
        if token.revoked:
            return "revoked-token"
        if token.user != request.owner:
            return "token-user-mismatch"
        if token.app != request.app:
            return "token-app-mismatch"
        if request.attribute not in token.granted_scopes:
            return "scope-missing"
        return None

    def _release_event(self, request: AccessRequest) -> FlowEvent:
        attribute = request.attribute
        if self.generalizer.has_entry(request.owner, request.app, attribute):
            payload = frozenset({GENERALIZED_PREFIX + attribute})
        else:
            payload = frozenset({attribute})
        return FlowEvent(
            app=request.app,
            source=RESOURCE_MANAGER,
            sink=request.component,
            payload=payload,
            user=request.owner,
        )

    def _served_value(self, request: AccessRequest) -> Optional[frozenset[str]]:
        if all(is_read_action(a) for a in request.actions):
            return self.generalizer.release_value(
                request.owner, request.app, request.attribute
            )
        return None

    # ------------------------------------------------------------------
    # Conflict resolution
    # ------------------------------------------------------------------

    def collect_entries(self, request: AccessRequest) -> list[DecisionEntry]:
        """Applicable policies across every author, with effective decisions."""
        entries = []
        for stored in self.policies.all():
            if applicable(stored, request, self.graph, self.profiles):
                entries.append(
                    DecisionEntry(
                        stakeholder=stored.owner,
                        policy=stored,
                        decision=effective_decision(stored.policy, request),
                    )
                )
        return entries

    def _resolve(self, entries: Sequence[DecisionEntry], target: str) -> DecisionEntry:
        own = [e for e in entries if e.stakeholder == target]
        if own:
            # Target precedence; the target's own conflicts resolve deny-first.
            return sorted(own, key=lambda e: (e.decision, e.policy.policy_id))[0]

        def trust(entry: DecisionEntry) -> float:
            value = self.graph.trust_between(target, entry.stakeholder)
            return value if value is not None else 0.0

        # Highest trust wins; ties break to the lexicographically smallest
        # stakeholder, then deny-first, then policy id, for determinism.
        return sorted(
            entries,
            key=lambda e: (-trust(e), e.stakeholder, e.decision, e.policy.policy_id),
        )[0]

    def resolve_conflict(
        self,
        decisions: Iterable[tuple[str, StoredPolicy, int]],
        target: str,
    ) -> int:
        """Resolve stakeholder decisions for a target user; returns 0 or 1."""
        entries = [DecisionEntry(s, p, d) for s, p, d in decisions]
        if not entries:
            raise EmptyDecisionSetError("no stakeholder decisions to resolve")
        return self._resolve(entries, target).decision
