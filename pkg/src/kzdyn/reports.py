"""Structured outcomes of identity checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import RationalMatrix, first_difference

PASS, FAIL, SKIP = "PASS", "FAIL", "SKIP"


def _plain(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    return x


@dataclass
class CheckReport:
    check_name: str
    status: str
    params: dict = field(default_factory=dict)
    witness: dict | None = None
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def __bool__(self) -> bool:
        return self.status != FAIL

    def to_record(self, context: dict | None = None) -> dict:
        rec = dict(context or {})
        rec.update(
            check_name=self.check_name,
            status=self.status,
            params=_plain(self.params),
            failure_witness=_plain(self.witness),
        )
        if self.note:
            rec["note"] = self.note
        return rec

    def to_json(self, context: dict | None = None) -> str:
        return json.dumps(self.to_record(context), sort_keys=True)


def compare(name: str, lhs: RationalMatrix, rhs: RationalMatrix, **params) -> CheckReport:
    """Exact matrix comparison; on mismatch the witness holds the first differing entry."""
    diff = first_difference(lhs, rhs)
    if diff is None:
        return CheckReport(name, PASS, params)
    if len(diff) == 4:
        i, j, a, b = diff
        witness = {"entry": [i, j], "lhs": a, "rhs": b}
    else:
        witness = {"shape_lhs": list(diff[1]), "shape_rhs": list(diff[2])}
    return CheckReport(name, FAIL, params, witness)


def compare_values(name: str, lhs, rhs, **params) -> CheckReport:
    if lhs == rhs:
        return CheckReport(name, PASS, params)
    return CheckReport(name, FAIL, params, {"lhs": lhs, "rhs": rhs})


def require(name: str, condition: bool, note: str = "", **params) -> CheckReport:
    return CheckReport(name, PASS if condition else FAIL, params, None if condition else {"note": note})


def combine(name: str, reports: list[CheckReport], **params) -> CheckReport:
    """One report summarising several sub-checks; the first failure supplies the witness."""
    for r in reports:
        if r.status == FAIL:
            w = dict(r.witness or {})
            w["subcheck"] = r.check_name
            w["subparams"] = _plain(r.params)
            return CheckReport(name, FAIL, params, w)
    if reports and all(r.status == SKIP for r in reports):
        return CheckReport(name, SKIP, params, note=reports[0].note)
    return CheckReport(name, PASS, params)
