"""Structured identity-check reports and their JSON-lines serialization.

Serialized payloads are deterministic: keys are sorted, floats use the
shortest round-trip repr, and no timestamps appear (run metadata lives in a
separate file so report bytes can be compared across runs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class IdentityReport:
    """Outcome of one identity check.

    values/discrepancies are parallel to value_labels/discrepancy_labels;
    tolerance is a single number or a mapping when a check mixes tolerances.
    """

    identity_name: str
    inputs_digest: str
    values: list
    discrepancies: list
    tolerance: object
    passed: bool
    value_labels: list = field(default_factory=list)
    discrepancy_labels: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "identity_name": self.identity_name,
            "inputs_digest": self.inputs_digest,
            "values": [float(v) for v in self.values],
            "discrepancies": [float(d) for d in self.discrepancies],
            "tolerance": self.tolerance,
            "pass": bool(self.passed),
            "value_labels": list(self.value_labels),
            "discrepancy_labels": list(self.discrepancy_labels),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def write_jsonl(reports, path) -> None:
    """One report object per line; byte-deterministic for identical inputs."""
    with open(path, "wb") as fh:
        for report in reports:
            fh.write(report.to_json().encode("utf-8") + b"\n")


def digest(**params) -> str:
    """Canonical inputs digest: 'key=value' pairs joined in sorted key order."""
    return ";".join(f"{k}={params[k]}" for k in sorted(params))
