"""Deterministic run reports: human text and byte-stable structured output."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

FORMAT_VERSION = "1"


@dataclass
class TaskRecord:
    task_id: str
    op: str
    status: str  # pass | fail | error
    values: dict = field(default_factory=dict)
    seconds: float = 0.0


@dataclass
class Report:
    source: str
    seed: int
    records: list[TaskRecord] = field(default_factory=list)
    format_version: str = FORMAT_VERSION

    def add(self, record: TaskRecord):
        self.records.append(record)

    @property
    def counts(self) -> dict[str, int]:
        out = {"pass": 0, "fail": 0, "error": 0}
        for r in self.records:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        c = self.counts
        return c["fail"] == 0 and c["error"] == 0

    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_text(self) -> str:
        lines = [f"# {self.source} (seed {self.seed})"]
        width = max((len(r.task_id) for r in self.records), default=0)
        for r in self.records:
            line = f"{r.task_id.ljust(width)}  {r.status.upper():5s}  [{r.seconds*1000:7.1f} ms]"
            detail = _values_text(r.values)
            if detail:
                line += "  " + detail
            lines.append(line)
        c = self.counts
        lines.append(
            f"summary: {c['pass']} passed, {c['fail']} failed, {c['error']} errored"
        )
        return "\n".join(lines)

    def to_structured(self) -> str:
        # timing is intentionally omitted: identical scenario + seed must give
        # byte-identical structured output
        payload = {
            "format_version": self.format_version,
            "source": self.source,
            "seed": self.seed,
            "tasks": [
                {
                    "id": r.task_id,
                    "op": r.op,
                    "status": r.status,
                    "values": r.values,
                }
                for r in self.records
            ],
            "summary": self.counts,
        }
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _values_text(values: dict) -> str:
    if not values:
        return ""
    parts = []
    for k in sorted(values):
        v = values[k]
        if isinstance(v, (list, dict)):
            v = json.dumps(v, sort_keys=True)
        parts.append(f"{k}={v}")
    return " ".join(parts)
