"""Relationship-based access policy language: grammar, AST, parser, evaluator.

Policy text
-----------
A policy is a bracketed tuple with an optional data set::

    [ target, {names}, decision, [condition] ]
    [ target, {data}, {actions}, decision, [condition] ]

``target`` is ``u`` or ``-`` (the policy author), a user id, or an attribute
name. With one brace group the names are the governed actions (event
policies); with two, the first group names data attributes and the second
the actions. Action names may be negated with ``!`` (``¬`` is accepted as
an alias) to pin a deny onto an otherwise-allow policy. ``decision`` is 0
(disallow) or 1 (allow).

The condition is an optional quantifier prefix followed by a conjunction of
binary literals::

    forall c, exists v: is_component(c,A) & isfamily(v,u) & installed(v,A)

Quantifier keywords are ``forall``, ``exists`` and ``notexists``. Literals
may be negated with ``!``. Known predicates: ``is_component(c,A)``,
``int_component(c,A)``, ``ext_component(c,A)``, ``installed(u,A)``; any
other binary predicate is looked up as a user-user relation.

Variables and constants
-----------------------
Single-character identifiers are variables; longer identifiers are
constants resolved against the graph at evaluation time. ``u`` (the data
owner), ``A`` (the requesting app) and ``c`` (the requesting component) are
implicit variables supplied by the evaluation environment. Any other
variable must be bound by a quantifier.

Evaluation semantics
--------------------
Each literal attaches to the innermost quantifier that binds one of its
variables; literals binding no quantified variable are evaluated outside
the prefix. For an iterating quantifier, the first positive literal at its
level restricts the domain (its guard): ``forall`` means every guarded
value satisfies the rest, ``exists`` means some guarded value does, and
``notexists`` negates ``exists``. Unguarded variables range over their full
sort: all users, all registered apps, or all components of every app; a
component variable guarded by an ``is_component``-family literal therefore
ranges over that app's components.

A quantifier over a variable the environment already fixes (``u``, ``A``,
``c``) does not iterate: the condition is evaluated with the variable bound
to the fixed value, so ``forall c: ext_component(c,A) & ...`` asserts that
the requesting component itself is external.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping, Optional, Sequence

from .errors import (
    DuplicateIdError,
    PolicySyntaxError,
    SortError,
    UnboundVariableError,
    UnknownConstantError,
    UnknownPredicateError,
)

# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------


class Quant(Enum):
    FORALL = "forall"
    EXISTS = "exists"
    NOTEXISTS = "notexists"


class Sort(Enum):
    USER = "user"
    APP = "app"
    COMPONENT = "component"


# Argument sorts of the core predicates; every other binary predicate is a
# user-user relation.
CORE_PREDICATES: dict[str, tuple[Sort, Sort]] = {
    "is_component": (Sort.COMPONENT, Sort.APP),
    "int_component": (Sort.COMPONENT, Sort.APP),
    "ext_component": (Sort.COMPONENT, Sort.APP),
    "installed": (Sort.USER, Sort.APP),
}

COMPONENT_PREDICATES = frozenset({"is_component", "int_component", "ext_component"})

# Sorts pinned to the implicit environment variables.
FIXED_SORTS: dict[str, Sort] = {"u": Sort.USER, "A": Sort.APP, "c": Sort.COMPONENT}

ENV_VARIABLES = ("u", "A", "c")


def is_variable(name: str) -> bool:
    """Single-character identifiers are variables by convention."""
    return len(name) == 1


@dataclass(frozen=True)
class Literal:
    predicate: str
    args: tuple[str, str]
    negated: bool = False

    def mentions(self, name: str) -> bool:
        return name in self.args


@dataclass(frozen=True)
class QuantifiedVar:
    quant: Quant
    name: str
    sort: Sort


@dataclass(frozen=True)
class Condition:
    prefix: tuple[QuantifiedVar, ...]
    literals: tuple[Literal, ...]


@dataclass(frozen=True)
class ActionTerm:
    name: str
    negated: bool = False


@dataclass(frozen=True)
class Policy:
    """Parsed policy body; ownership is attached separately by the store."""

    target: str
    actions: frozenset[ActionTerm]
    decision: int
    condition: Condition
    data: Optional[frozenset[str]] = None

    @property
    def positive_actions(self) -> frozenset[str]:
        return frozenset(a.name for a in self.actions if not a.negated)

    @property
    def negated_actions(self) -> frozenset[str]:
        return frozenset(a.name for a in self.actions if a.negated)


@dataclass(frozen=True)
class AccessRequest:
    """A component asking to perform actions on one data item."""

    app: str
    component: str
    owner: str
    attribute: str
    actions: frozenset[str]

    def to_dict(self) -> dict:
        return {
            "requester": {"app": self.app, "component": self.component},
            "target": {"owner": self.owner, "attribute": self.attribute},
            "actions": sorted(self.actions),
        }


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

_PUNCT = {
    "[": "LBRACKET",
    "]": "RBRACKET",
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    ",": "COMMA",
    ":": "COLON",
    "&": "AMP",
    "!": "BANG",
    "-": "DASH",
}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    pos: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch == "¬":  # accept the logic negation sign as "!"
            tokens.append(_Token("BANG", "!", i))
            i += 1
            continue
        if ch in _PUNCT:
            tokens.append(_Token(_PUNCT[ch], ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(_Token("INT", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(_Token("IDENT", text[i:j], i))
            i = j
            continue
        raise PolicySyntaxError(i, "a policy token", ch)
    tokens.append(_Token("EOF", "", n))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, kind: str, what: str) -> _Token:
        token = self.next()
        if token.kind != kind:
            raise PolicySyntaxError(token.pos, what, token.value or "end of input")
        return token

    # -- policy ----------------------------------------------------------

    def policy(self) -> Policy:
        self.expect("LBRACKET", "'['")
        target = self.target()
        self.expect("COMMA", "','")
        first_pos = self.peek().pos
        first_group = self.brace_group(allow_negation=True)
        self.expect("COMMA", "','")
        data: Optional[frozenset[str]] = None
        if self.peek().kind == "LBRACE":
            # Two brace groups: the first was the data set, no negation there.
            for term in first_group:
                if term.negated:
                    raise PolicySyntaxError(
                        first_pos, "no negation in the data set", term.name
                    )
            data = frozenset(t.name for t in first_group)
            actions = self.brace_group(allow_negation=True)
            self.expect("COMMA", "','")
        else:
            actions = first_group
        decision = self.decision()
        self.expect("COMMA", "','")
        self.expect("LBRACKET", "'[' opening the condition")
        condition = self.condition()
        self.expect("RBRACKET", "']' closing the condition")
        self.expect("RBRACKET", "']' closing the policy")
        self.expect("EOF", "end of input")
        return Policy(
            target=target,
            actions=frozenset(actions),
            decision=decision,
            condition=condition,
            data=data,
        )

    def target(self) -> str:
        token = self.next()
        if token.kind == "DASH":
            return "-"
        if token.kind == "IDENT":
            return token.value
        raise PolicySyntaxError(token.pos, "a target (identifier or '-')", token.value)

    def brace_group(self, allow_negation: bool) -> list[ActionTerm]:
        self.expect("LBRACE", "'{'")
        terms: list[ActionTerm] = []
        if self.peek().kind == "RBRACE":
            token = self.peek()
            raise PolicySyntaxError(token.pos, "at least one name in the set", "}")
        while True:
            negated = False
            if self.peek().kind == "BANG":
                bang = self.next()
                if not allow_negation:
                    raise PolicySyntaxError(bang.pos, "a name without negation", "!")
                negated = True
            name = self.expect("IDENT", "a name").value
            terms.append(ActionTerm(name, negated))
            token = self.next()
            if token.kind == "RBRACE":
                break
            if token.kind != "COMMA":
                raise PolicySyntaxError(token.pos, "',' or '}'", token.value)
        return terms

    def decision(self) -> int:
        token = self.expect("INT", "a decision (0 or 1)")
        if token.value not in ("0", "1"):
            raise PolicySyntaxError(token.pos, "a decision (0 or 1)", token.value)
        return int(token.value)

    # -- condition ---------------------------------------------------------

    def condition(self) -> Condition:
        prefix = self.quantifier_prefix()
        literals = [self.literal()]
        while self.peek().kind == "AMP":
            self.next()
            literals.append(self.literal())
        condition = Condition(prefix=tuple(prefix), literals=tuple(literals))
        return _analyze(condition)

    def quantifier_prefix(self) -> list[QuantifiedVar]:
        # Lookahead: a prefix is present iff the first identifier is a
        # quantifier keyword.
        if self.peek().kind != "IDENT" or self.peek().value not in (
            "forall",
            "exists",
            "notexists",
        ):
            return []
        prefix: list[QuantifiedVar] = []
        seen: set[str] = set()
        while True:
            kw = self.expect("IDENT", "a quantifier keyword")
            try:
                quant = Quant(kw.value)
            except ValueError:
                raise PolicySyntaxError(
                    kw.pos, "'forall', 'exists' or 'notexists'", kw.value
                ) from None
            var = self.expect("IDENT", "a quantified variable")
            if var.value in seen:
                raise PolicySyntaxError(var.pos, "a fresh quantifier variable", var.value)
            seen.add(var.value)
            # Sort is inferred after the literals are known.
            prefix.append(QuantifiedVar(quant, var.value, Sort.USER))
            token = self.next()
            if token.kind == "COLON":
                return prefix
            if token.kind != "COMMA":
                raise PolicySyntaxError(token.pos, "',' or ':'", token.value)

    def literal(self) -> Literal:
        negated = False
        if self.peek().kind == "BANG":
            self.next()
            negated = True
        pred = self.expect("IDENT", "a predicate name").value
        self.expect("LPAREN", "'('")
        args = [self.expect("IDENT", "an argument").value]
        while self.peek().kind == "COMMA":
            self.next()
            args.append(self.expect("IDENT", "an argument").value)
        closing = self.expect("RPAREN", "')'")
        if len(args) != 2:
            raise PolicySyntaxError(
                closing.pos, f"exactly 2 arguments for {pred!r}", f"{len(args)} given"
            )
        return Literal(predicate=pred, args=(args[0], args[1]), negated=negated)


def _predicate_sorts(predicate: str) -> tuple[Sort, Sort]:
    return CORE_PREDICATES.get(predicate, (Sort.USER, Sort.USER))


def _analyze(condition: Condition) -> Condition:
    """Infer quantifier sorts, check sort consistency, reject unbound variables."""
    quantified = {qv.name for qv in condition.prefix}
    sorts: dict[str, Sort] = dict(FIXED_SORTS)
    for literal in condition.literals:
        expected = _predicate_sorts(literal.predicate)
        for arg, want in zip(literal.args, expected):
            if not is_variable(arg) and arg not in quantified:
                continue  # constant
            have = sorts.get(arg)
            if have is None:
                sorts[arg] = want
            elif have is not want:
                raise SortError(arg, literal.predicate, want.value, have.value)
    for literal in condition.literals:
        for arg in literal.args:
            if is_variable(arg) and arg not in quantified and arg not in FIXED_SORTS:
                raise UnboundVariableError(arg)
    prefix = tuple(
        replace(qv, sort=sorts.get(qv.name, FIXED_SORTS.get(qv.name, Sort.USER)))
        for qv in condition.prefix
    )
    return Condition(prefix=prefix, literals=condition.literals)


def parse_policy(text: str) -> Policy:
    """Parse policy text into its AST, or raise a positioned error."""
    return _Parser(text).policy()


def parse_condition(text: str) -> Condition:
    """Parse a bare condition (no surrounding policy tuple)."""
    parser = _Parser(text)
    condition = parser.condition()
    parser.expect("EOF", "end of input")
    return condition


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------


def format_condition(condition: Condition) -> str:
    parts = []
    if condition.prefix:
        quants = ", ".join(f"{qv.quant.value} {qv.name}" for qv in condition.prefix)
        parts.append(quants + ": ")
    literals = " & ".join(
        ("!" if lit.negated else "") + f"{lit.predicate}({lit.args[0]},{lit.args[1]})"
        for lit in condition.literals
    )
    parts.append(literals)
    return "".join(parts)


def _format_terms(terms: Iterable[ActionTerm]) -> str:
    ordered = sorted(terms, key=lambda t: (t.name, t.negated))
    return "{" + ", ".join(("!" if t.negated else "") + t.name for t in ordered) + "}"


def format_policy(policy: Policy) -> str:
    """Canonical text for a policy; parsing it reproduces the AST."""
    pieces = [policy.target]
    if policy.data is not None:
        pieces.append("{" + ", ".join(sorted(policy.data)) + "}")
    pieces.append(_format_terms(policy.actions))
    pieces.append(str(policy.decision))
    pieces.append("[" + format_condition(policy.condition) + "]")
    return "[" + ", ".join(pieces) + "]"


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _literal_level(literal: Literal, prefix: Sequence[QuantifiedVar]) -> int:
    """1-based index of the innermost quantifier the literal depends on, 0 if none."""
    level = 0
    for idx, qv in enumerate(prefix, start=1):
        if literal.mentions(qv.name):
            level = idx
    return level


def _levels(condition: Condition) -> list[list[Literal]]:
    buckets: list[list[Literal]] = [[] for _ in range(len(condition.prefix) + 1)]
    for literal in condition.literals:
        buckets[_literal_level(literal, condition.prefix)].append(literal)
    return buckets


def _split_guard(literals: Sequence[Literal]) -> tuple[Optional[Literal], list[Literal]]:
    for idx, literal in enumerate(literals):
        if not literal.negated:
            return literal, list(literals[:idx]) + list(literals[idx + 1 :])
    return None, list(literals)


class ConditionEvaluator:
    """Evaluates conditions against a graph and profile store.

    Pure: never mutates the graph; identical inputs give identical results.
    """

    def __init__(self, graph, profiles) -> None:
        self.graph = graph
        self.profiles = profiles

    # -- sorts -------------------------------------------------------------

    def universe(self, sort: Sort) -> list:
        if sort is Sort.USER:
            return self.graph.users
        if sort is Sort.APP:
            return self.graph.apps
        return [
            (app, cid)
            for app in self.profiles.apps()
            for cid in self.profiles.components(app)
        ]

    # -- literals ----------------------------------------------------------

    def _resolve(self, arg: str, sort: Sort, binding: Mapping[str, object]):
        if arg in binding:
            return binding[arg]
        if sort is Sort.USER:
            if not self.graph.has_user(arg):
                raise UnknownConstantError(f"unknown user constant {arg!r}")
            return arg
        if sort is Sort.APP:
            if not self.graph.has_app(arg) and not self.profiles.has_app(arg):
                raise UnknownConstantError(f"unknown app constant {arg!r}")
            return arg
        # Bare component constants resolve against the app argument later.
        return arg

    def eval_literal(self, literal: Literal, binding: Mapping[str, object]) -> bool:
        sorts = _predicate_sorts(literal.predicate)
        left = self._resolve(literal.args[0], sorts[0], binding)
        right = self._resolve(literal.args[1], sorts[1], binding)
        value = self._eval_atom(literal.predicate, left, right)
        return not value if literal.negated else value

    def _eval_atom(self, predicate: str, left, right) -> bool:
        if predicate in COMPONENT_PREDICATES:
            app = right
            if isinstance(left, tuple):
                comp_app, cid = left
                if comp_app != app:
                    return False
            else:
                cid = left
                if not self.profiles.has_component(app, cid):
                    raise UnknownConstantError(
                        f"no component {cid!r} in app {app!r}"
                    )
            if predicate == "int_component":
                return not self.profiles.is_external(app, cid)
            if predicate == "ext_component":
                return self.profiles.is_external(app, cid)
            return True
        if predicate == "installed":
            return self.graph.is_installed(left, right)
        decl = self.graph.relation_for_predicate(predicate)
        if decl is None:
            raise UnknownPredicateError(f"predicate {predicate!r} is not declared")
        return self.graph.related(left, right, decl.name)

    # -- quantifiers ---------------------------------------------------------

    def evaluate(self, condition: Condition, env: Mapping[str, object]) -> bool:
        levels = _levels(condition)
        binding = dict(env)
        for literal in levels[0]:
            if not self.eval_literal(literal, binding):
                return False
        return self._eval_level(condition.prefix, levels, 1, binding, dict(env))

    def _eval_level(
        self,
        prefix: Sequence[QuantifiedVar],
        levels: Sequence[Sequence[Literal]],
        index: int,
        binding: dict,
        env: Mapping[str, object],
    ) -> bool:
        if index > len(prefix):
            return True
        qv = prefix[index - 1]
        literals = levels[index]

        if qv.name in env:
            # The environment fixes this variable: no iteration, the level's
            # literals are asserted about the fixed value.
            binding[qv.name] = env[qv.name]
            value = all(self.eval_literal(lit, binding) for lit in literals) and (
                self._eval_level(prefix, levels, index + 1, binding, env)
            )
            del binding[qv.name]
            return not value if qv.quant is Quant.NOTEXISTS else value

        guard, matrix = _split_guard(literals)

        def inner(candidate) -> bool:
            binding[qv.name] = candidate
            try:
                return all(self.eval_literal(lit, binding) for lit in matrix) and (
                    self._eval_level(prefix, levels, index + 1, binding, env)
                )
            finally:
                del binding[qv.name]

        def admitted(candidate) -> bool:
            if guard is None:
                return True
            binding[qv.name] = candidate
            try:
                return self.eval_literal(guard, binding)
            finally:
                del binding[qv.name]

        domain = [d for d in self.universe(qv.sort) if admitted(d)]
        if qv.quant is Quant.FORALL:
            return all(inner(d) for d in domain)
        if qv.quant is Quant.EXISTS:
            return any(inner(d) for d in domain)
        return not any(inner(d) for d in domain)

    # -- explanation -----------------------------------------------------------

    def explain(self, condition: Condition, env: Mapping[str, object]) -> tuple[bool, list[str]]:
        """Evaluate and narrate witness/counterexample bindings per quantifier."""
        notes: list[str] = []
        levels = _levels(condition)
        binding = dict(env)
        for literal in levels[0]:
            ok = self.eval_literal(literal, binding)
            notes.append(f"{_fmt_literal(literal)} = {ok}")
            if not ok:
                return False, notes
        value = self._explain_level(condition.prefix, levels, 1, binding, dict(env), notes)
        return value, notes

    def _explain_level(self, prefix, levels, index, binding, env, notes) -> bool:
        if index > len(prefix):
            return True
        qv = prefix[index - 1]
        literals = levels[index]
        if qv.name in env:
            binding[qv.name] = env[qv.name]
            value = all(self.eval_literal(lit, binding) for lit in literals) and (
                self._explain_level(prefix, levels, index + 1, binding, env, notes)
            )
            del binding[qv.name]
            notes.append(
                f"{qv.quant.value} {qv.name}: fixed to {_fmt_value(env[qv.name])},"
                f" holds = {value if qv.quant is not Quant.NOTEXISTS else not value}"
            )
            return not value if qv.quant is Quant.NOTEXISTS else value
        guard, matrix = _split_guard(literals)

        def inner(candidate) -> bool:
            binding[qv.name] = candidate
            try:
                return all(self.eval_literal(lit, binding) for lit in matrix) and (
                    self._eval_level(prefix, levels, index + 1, binding, env)
                )
            finally:
                del binding[qv.name]

        domain = []
        for candidate in self.universe(qv.sort):
            binding[qv.name] = candidate
            try:
                if guard is None or self.eval_literal(guard, binding):
                    domain.append(candidate)
            finally:
                del binding[qv.name]
        if qv.quant is Quant.FORALL:
            for candidate in domain:
                if not inner(candidate):
                    notes.append(
                        f"forall {qv.name}: fails at {qv.name}={_fmt_value(candidate)}"
                    )
                    return False
            notes.append(f"forall {qv.name}: holds for all {len(domain)} candidate(s)")
            return True
        witness = next((cand for cand in domain if inner(cand)), None)
        if qv.quant is Quant.EXISTS:
            if witness is None:
                notes.append(f"exists {qv.name}: no witness among {len(domain)} candidate(s)")
                return False
            notes.append(f"exists {qv.name}: witness {qv.name}={_fmt_value(witness)}")
            return True
        if witness is None:
            notes.append(f"notexists {qv.name}: no counterexample, holds")
            return True
        notes.append(f"notexists {qv.name}: violated by {qv.name}={_fmt_value(witness)}")
        return False


def _fmt_value(value) -> str:
    if isinstance(value, tuple):
        return f"{value[0]}:{value[1]}"
    return str(value)


def _fmt_literal(literal: Literal) -> str:
    neg = "!" if literal.negated else ""
    return f"{neg}{literal.predicate}({literal.args[0]},{literal.args[1]})"


def evaluate_condition(condition: Condition, env: Mapping[str, object], graph, profiles) -> bool:
    return ConditionEvaluator(graph, profiles).evaluate(condition, env)


def condition_constants(condition: Condition) -> list[tuple[str, Sort, Optional[str]]]:
    """Constants appearing in a condition with their positional sort.

    For component-position constants the third element names the app
    argument of the same literal (itself possibly a variable), so callers
    can resolve the component when the app is statically known.
    """
    quantified = {qv.name for qv in condition.prefix}
    out: list[tuple[str, Sort, Optional[str]]] = []
    for literal in condition.literals:
        sorts = _predicate_sorts(literal.predicate)
        for pos, (arg, sort) in enumerate(zip(literal.args, sorts)):
            if is_variable(arg) or arg in quantified:
                continue
            partner = literal.args[1] if pos == 0 else None
            out.append((arg, sort, partner if sort is Sort.COMPONENT else None))
    return out


# ---------------------------------------------------------------------------
# Applicability
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StoredPolicy:
    policy_id: str
    owner: str
    policy: Policy

    @property
    def text(self) -> str:
        return format_policy(self.policy)


def request_env(request: AccessRequest) -> dict[str, object]:
    return {
        "u": request.owner,
        "A": request.app,
        "c": (request.app, request.component),
    }


def _action_overlap(policy: Policy, request: AccessRequest) -> bool:
    names = policy.positive_actions | policy.negated_actions
    return bool(request.actions & names)


def _target_matches(stored: StoredPolicy, request: AccessRequest, graph) -> bool:
    target = stored.policy.target
    if stored.policy.data is not None:
        if request.attribute not in stored.policy.data:
            return False
        if target in ("u", "-"):
            return request.owner == stored.owner
        if graph.has_user(target):
            return request.owner == target
        return False
    if target in ("u", "-"):
        return request.owner == stored.owner
    if graph.has_user(target):
        return request.owner == target
    # Attribute-name target: governs that attribute on anyone's data, which
    # is how a user constrains traffic at contacts' items.
    return request.attribute == target


def applicable(stored: StoredPolicy, request: AccessRequest, graph, profiles) -> bool:
    """Does this policy govern the request, condition included?"""
    if not _action_overlap(stored.policy, request):
        return False
    if not _target_matches(stored, request, graph):
        return False
    return evaluate_condition(stored.policy.condition, request_env(request), graph, profiles)


def effective_decision(policy: Policy, request: AccessRequest) -> int:
    """Policy decision for this request; negated action hits flip it."""
    if request.actions & policy.negated_actions:
        return 1 - policy.decision
    return policy.decision


# ---------------------------------------------------------------------------
# Policy store
# ---------------------------------------------------------------------------


class PolicyStore:
    """Owner-attributed policies, in insertion order."""

    def __init__(self) -> None:
        self._policies: list[StoredPolicy] = []
        self._by_id: dict[str, StoredPolicy] = {}

    def add(self, owner: str, policy: Policy | str, policy_id: Optional[str] = None) -> StoredPolicy:
        if isinstance(policy, str):
            policy = parse_policy(policy)
        if policy_id is None:
            policy_id = f"p{len(self._policies) + 1}"
        if policy_id in self._by_id:
            raise DuplicateIdError(f"duplicate policy id {policy_id!r}")
        stored = StoredPolicy(policy_id, owner, policy)
        self._policies.append(stored)
        self._by_id[policy_id] = stored
        return stored

    def all(self) -> list[StoredPolicy]:
        return list(self._policies)

    def get(self, policy_id: str) -> StoredPolicy:
        return self._by_id[policy_id]

    def by_owner(self, owner: str) -> list[StoredPolicy]:
        return [p for p in self._policies if p.owner == owner]
