"""Alerts raised toward the platform operator by the request and flow pipelines."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional


class AlertKind(Enum):
    SUSPICIOUS_ACCESS_REQUEST = "suspicious-access-request"
    UNAUTHORIZED_FLOW_ATTEMPT = "unauthorized-flow-attempt"
    UNDECLARED_EXTERNAL_ENTITY = "undeclared-external-entity"


@dataclass(frozen=True)
class Alert:
    kind: AlertKind
    app: str
    component: Optional[str]
    detail: str

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "app": self.app,
            "component": self.component,
            "detail": self.detail,
        }
