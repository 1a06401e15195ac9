"""Command-line driver.

Verbs:
    run <file>                 execute the scenario trace, print both logs
    audit policies <file>      engine vs derived decisions over all triples
    audit flows <file>         replay flow events and re-verify the log
    explain <file> --request "app.component owner.attribute action"

Exit codes: 0 clean, 1 alerts or audit findings, 2 load error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .engine import Engine
from .errors import RebacError
from .oracle import audit
from .plc import FlowEvent, Verdict
from .policylang import (
    AccessRequest,
    ConditionEvaluator,
    applicable,
    effective_decision,
    request_env,
)
from .scenario import FlowSpec, load


def _emit(records: list[dict], fmt: str, heading: str) -> None:
    if fmt == "json":
        for record in records:
            print(json.dumps(record, sort_keys=True))
        return
    print(f"# {heading}")
    for record in records:
        print(json.dumps(record, sort_keys=True))


def cmd_run(args) -> int:
    engine = Engine.from_scenario(load(args.scenario))
    result = engine.run_trace()
    decision_records = [d.to_dict() for d in result.decisions]
    flow_records = [f.to_dict() for f in result.flows]
    if args.format == "json":
        print(
            json.dumps(
                {
                    "decisions": decision_records,
                    "flows": flow_records,
                    "alerts": [a.to_dict() for a in result.alerts],
                },
                sort_keys=True,
                indent=2,
            )
        )
    else:
        _emit(decision_records, "text", "decision log")
        _emit(flow_records, "text", "information flow log")
        print(f"# alerts: {len(result.alerts)}")
        for alert in result.alerts:
            print(json.dumps(alert.to_dict(), sort_keys=True))
    if result.alerts and not args.no_fail_on_alerts:
        return 1
    return 0


def cmd_audit_policies(args) -> int:
    engine = Engine.from_scenario(load(args.scenario))
    report = audit(engine)
    if args.format == "json":
        print(json.dumps(report.to_dict(), sort_keys=True, indent=2))
    else:
        print(report.to_text())
    return 0 if report.is_clean else 1


def cmd_audit_flows(args) -> int:
    engine = Engine.from_scenario(load(args.scenario))
    flows = [e for e in engine.scenario.trace if isinstance(e, FlowSpec)]
    for spec in flows:
        engine.plc.check_flow(
            FlowEvent(
                app=spec.app,
                source=spec.source,
                sink=spec.sink,
                payload=frozenset(spec.payload),
                user=spec.user,
            )
        )
    records = engine.plc.log
    alerts = engine.plc.detect_anomaly(records)
    leaks = [
        r
        for r in records
        if r.verdict is Verdict.PERMITTED
        and r.sensitivity.is_private
        and engine.plc._sink_is_external(r.event.app, r.event.sink)
    ]
    payload = {
        "flows": [r.to_dict() for r in records],
        "alerts": [a.to_dict() for a in alerts],
        "private_external_leaks": [r.to_dict() for r in leaks],
    }
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        _emit(payload["flows"], "text", "information flow log")
        print(f"# alerts: {len(alerts)}; permitted private egress: {len(leaks)}")
    return 1 if alerts or leaks else 0


def _parse_request(raw: str) -> AccessRequest:
    try:
        requester, target, action = raw.split()
        app, component = requester.split(".", 1)
        owner, attribute = target.split(".", 1)
    except ValueError:
        raise RebacError(
            "request format: '<app>.<component> <owner>.<attribute> <action>'"
        ) from None
    return AccessRequest(app, component, owner, attribute, frozenset({action}))


def cmd_explain(args) -> int:
    engine = Engine.from_scenario(load(args.scenario))
    request = _parse_request(args.request)
    token = engine.dam.find_token(request.owner, request.app)
    decision = engine.dam.evaluate_request(token, request)
    print(f"request : {args.request}")
    print(f"outcome : {'grant' if decision.granted else 'deny'} ({decision.reason})")
    if decision.alert:
        print(f"alert   : {decision.alert.kind.value}")
    if decision.matched_policy:
        stored = engine.policies.get(decision.matched_policy)
        print(f"policy  : {decision.matched_policy} (owner {stored.owner})")
        print(f"          {stored.text}")
    env = request_env(request)
    evaluator = ConditionEvaluator(engine.graph, engine.profiles)
    for stored in engine.policies.all():
        if not applicable(stored, request, engine.graph, engine.profiles):
            continue
        verdict = effective_decision(stored.policy, request)
        print(f"applicable {stored.policy_id} (owner {stored.owner}) -> decision {verdict}")
        _, notes = evaluator.explain(stored.policy.condition, env)
        for note in notes:
            print(f"    {note}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rebacsim",
        description="Scenario-driven access control and privacy-flow simulator",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    run_parser = sub.add_parser("run", help="execute a scenario trace")
    run_parser.add_argument("scenario")
    run_parser.add_argument(
        "--no-fail-on-alerts",
        action="store_true",
        help="exit 0 even when alerts are raised",
    )
    run_parser.set_defaults(func=cmd_run)

    audit_parser = sub.add_parser("audit", help="audit a scenario")
    audit_sub = audit_parser.add_subparsers(dest="what", required=True)
    ap = audit_sub.add_parser("policies", help="oversharing/undersharing sweep")
    ap.add_argument("scenario")
    ap.set_defaults(func=cmd_audit_policies)
    af = audit_sub.add_parser("flows", help="replay and re-verify flow events")
    af.add_argument("scenario")
    af.set_defaults(func=cmd_audit_flows)

    explain_parser = sub.add_parser("explain", help="explain one request")
    explain_parser.add_argument("scenario")
    explain_parser.add_argument(
        "--request",
        required=True,
        help="'<app>.<component> <owner>.<attribute> <action>'",
    )
    explain_parser.set_defaults(func=cmd_explain)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except RebacError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
