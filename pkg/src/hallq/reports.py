"""Check results shared by the verification suites and the CLI."""

import json
from dataclasses import dataclass, field


@dataclass
class CheckResult:
    check_id: str
    statement: str
    params: dict = field(default_factory=dict)
    status: str = "pass"            # pass | fail | skip
    witness: object = None

    @property
    def ok(self):
        return self.status == "pass"

    def to_json(self):
        out = {"check_id": self.check_id, "statement": self.statement,
               "params": self.params, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def passed(check_id, statement, **params):
    return CheckResult(check_id, statement, params, "pass")


def failed(check_id, statement, witness=None, **params):
    return CheckResult(check_id, statement, params, "fail", witness)


def skipped(check_id, statement, witness=None, **params):
    return CheckResult(check_id, statement, params, "skip", witness)


def check(check_id, statement, condition, witness=None, **params):
    status = "pass" if condition else "fail"
    return CheckResult(check_id, statement, params, status, witness)


def all_ok(results):
    return all(r.status != "fail" for r in results)


def dump(results, path):
    with open(path, "w") as fh:
        json.dump([r.to_json() for r in results], fh, indent=1)


def summary_lines(results):
    out = []
    for r in results:
        mark = {"pass": "PASS", "fail": "FAIL", "skip": "SKIP"}[r.status]
        extra = f" params={r.params}" if r.params else ""
        out.append(f"[{mark}] {r.check_id}: {r.statement}{extra}")
    return out
