"""Check records and verification reports."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

INPUT_VALIDATION = "input-validation"
LOCAL_FLATNESS = "local-flatness"
DI_DERIVATIVE = "di-derivative"
DI_COCYCLE = "di-cocycle"
GLUING_COCYCLE = "gluing-cocycle"
CONNECTION_GLUING = "connection-gluing"
EXP_TAYLOR = "exp-taylor"

CHECK_KINDS = (
    LOCAL_FLATNESS,
    DI_DERIVATIVE,
    DI_COCYCLE,
    GLUING_COCYCLE,
    CONNECTION_GLUING,
    EXP_TAYLOR,
)

VERIFIED = "VERIFIED"
FAILED = "FAILED"


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    kind: str
    subject: str
    passed: bool
    witness: str = ""

    def __bool__(self):
        return self.passed

    @property
    def status(self):
        return "PASS" if self.passed else "FAIL"


def passed(check_id, kind, subject):
    return CheckResult(check_id, kind, subject, True)


def failed(check_id, kind, subject, witness):
    return CheckResult(check_id, kind, subject, False, witness)


@dataclass
class Report:
    title: str = ""
    records: list = field(default_factory=list)

    def add(self, *records):
        self.records.extend(records)

    @property
    def overall(self):
        return VERIFIED if self.records and all(r.passed for r in self.records) else FAILED

    @property
    def verified(self):
        return self.overall == VERIFIED

    def failures(self, kind=None):
        return [r for r in self.records if not r.passed and (kind is None or r.kind == kind)]

    def kinds_failed(self):
        return sorted({r.kind for r in self.records if not r.passed})

    def counts(self):
        out = {}
        for r in self.records:
            ok, total = out.get(r.kind, (0, 0))
            out[r.kind] = (ok + r.passed, total + 1)
        return out

    def to_text(self):
        lines = []
        if self.title:
            lines.append(f"# {self.title}")
        for r in self.records:
            line = f"{r.status}  {r.kind:<18} {r.subject:<12} {r.check_id}"
            if r.witness:
                line += f"  -- {r.witness}"
            lines.append(line)
        n_ok = sum(r.passed for r in self.records)
        lines.append("")
        for kind, (ok, total) in sorted(self.counts().items()):
            lines.append(f"{kind:<18} {ok}/{total}")
        lines.append(f"overall: {self.overall} ({n_ok}/{len(self.records)} checks passed)")
        return "\n".join(lines) + "\n"

    def to_dict(self):
        return {
            "title": self.title,
            "overall": self.overall,
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"
