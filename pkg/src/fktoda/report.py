"""Versioned JSON reports shared by every CLI command."""
from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import jsonschema
import numpy as np

SCHEMA_VERSION = "1.0"

REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "fktoda report",
    "type": "object",
    "required": ["schema_version", "config", "checks", "wall_time"],
    "additionalProperties": False,
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "config": {"type": "object", "required": ["command"]},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "paper_claim", "pass", "residuals"],
                "properties": {
                    "name": {"type": "string"},
                    "paper_claim": {"type": "string"},
                    # null marks a finding (tk-check verdicts), not a pass/fail check
                    "pass": {"type": ["boolean", "null"]},
                    "verdict": {"enum": ["CONSISTENT", "INCONSISTENT"]},
                    "residuals": {"type": "object"},
                    "details": {},
                },
            },
        },
        "wall_time": {"type": "number", "minimum": 0},
    },
}

# Claim certified by each check, so a failing CI line names what broke.
CLAIMS = {
    "roots": "positive roots enumerate the root system; exponents follow from the height partition",
    "rank_check": "rank of every Lambda_k block equals d_{k+1} and the Poisson rank at L_0 is dim g - l",
    "bracket": "formula bracket equals the Lie-Poisson bracket <L, [g_a, g_b]> and is antisymmetric",
    "family_count": "the invariant family has (dim g + l)/2 members",
    "restriction_structure": "lambda-support of P_i lies in [-m_i, 1] with a constant top coefficient, non-zero only for i = l",
    "gradient_fd": "exact gradients agree with central finite differences",
    "involution": "the restricted invariants pairwise Poisson-commute",
    "casimirs": "F_{m_i,i} are Casimirs and their differentials have rank l",
    "independence": "the family is independent at L_1 and at random points",
    "liouville": "dim T - rank/2 equals the family size",
    "hamiltonian_consistency": "Pi dH equals the coordinates of [L, L_-]",
    "flow_conservation": "the Lax flow preserves every invariant",
    "flow_convergence": "halving dt shrinks the invariant drift at fourth order",
    "tk_submanifold": "brackets of T^(k) coordinates never leave T^(k)",
    "tk_conjecture": "the restricted family is independent and Liouville on T^(k)",
}


def to_jsonable(obj):
    """Fractions become exact strings ("3/2"); numpy containers become lists."""
    if isinstance(obj, Fraction):
        return str(obj) if obj.denominator != 1 else obj.numerator
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return obj


@dataclass
class Check:
    name: str
    passed: bool | None
    residuals: dict = field(default_factory=dict)
    details: object = None
    verdict: str | None = None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "paper_claim": CLAIMS.get(self.name.split(":")[0], self.name),
            "pass": self.passed,
            "residuals": to_jsonable(self.residuals),
        }
        if self.verdict is not None:
            out["verdict"] = self.verdict
        if self.details is not None:
            out["details"] = to_jsonable(self.details)
        return out


@dataclass
class Report:
    config: dict
    checks: list[Check] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        """Findings (``pass is None``) never fail a run."""
        return all(c.passed is not False for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "config": to_jsonable(self.config),
            "checks": [c.to_dict() for c in self.checks],
            "wall_time": self.wall_time,
        }


def validate(doc: dict) -> None:
    jsonschema.validate(doc, REPORT_SCHEMA)


def write_atomic(path: str | Path, text: str) -> None:
    """Write via a temp file and rename; devices and pipes are written in place."""
    path = Path(path)
    if path.exists() and not path.is_file():
        with open(path, "w") as fh:
            fh.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"
