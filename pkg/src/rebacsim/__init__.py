"""Relationship-based access control engine and privacy-flow simulator."""

from .alerts import Alert, AlertKind
from .dam import AccessToken, DataAuthorizationManager, Decision, DecisionEntry
from .engine import Engine, RunResult
from .generalize import GeneralizationEntry, GeneralizationStore, recommend_level
from .graph import (
    DEFAULT_RELATIONS,
    INSTALLED,
    RelationDecl,
    RelationKind,
    RelationshipEdge,
    SocialGraph,
)
from .oracle import AuditReport, audit, brute_eval, derive_decision
from .plc import FlowEvent, IFLogRecord, PrivacyLeakageController, Verdict
from .policylang import (
    AccessRequest,
    ActionTerm,
    Condition,
    ConditionEvaluator,
    Literal,
    Policy,
    PolicyStore,
    Quant,
    QuantifiedVar,
    Sort,
    StoredPolicy,
    applicable,
    effective_decision,
    evaluate_condition,
    format_condition,
    format_policy,
    parse_condition,
    parse_policy,
)
from .profiles import (
    ComponentKind,
    ComponentProfile,
    InformationFlowProfile,
    ProfileStore,
    TpaDefinition,
    Violation,
    ViolationKind,
    validate_profile,
)
from .scenario import Scenario, load, loads
from .userdata import (
    DataItem,
    DataStore,
    SensitivityLevel,
    classify,
    derived_sensitivity,
)

__version__ = "0.1.0"

__all__ = [
    "AccessRequest",
    "AccessToken",
    "ActionTerm",
    "Alert",
    "AlertKind",
    "AuditReport",
    "Condition",
    "ConditionEvaluator",
    "ComponentKind",
    "ComponentProfile",
    "DataAuthorizationManager",
    "DataItem",
    "DataStore",
    "Decision",
    "DecisionEntry",
    "DEFAULT_RELATIONS",
    "Engine",
    "FlowEvent",
    "GeneralizationEntry",
    "GeneralizationStore",
    "IFLogRecord",
    "INSTALLED",
    "InformationFlowProfile",
    "Literal",
    "Policy",
    "PolicyStore",
    "PrivacyLeakageController",
    "ProfileStore",
    "Quant",
    "QuantifiedVar",
    "RelationDecl",
    "RelationKind",
    "RelationshipEdge",
    "RunResult",
    "Scenario",
    "SensitivityLevel",
    "SocialGraph",
    "Sort",
    "StoredPolicy",
    "TpaDefinition",
    "Verdict",
    "Violation",
    "ViolationKind",
    "applicable",
    "audit",
    "brute_eval",
    "classify",
    "derive_decision",
    "derived_sensitivity",
    "effective_decision",
    "evaluate_condition",
    "format_condition",
    "format_policy",
    "load",
    "loads",
    "parse_condition",
    "parse_policy",
    "recommend_level",
    "validate_profile",
]
