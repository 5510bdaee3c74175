"""Machine-readable run reports with deterministic serialisation."""
from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

__all__ = ["Record", "RunReport", "digest"]


def _clean(x: Any) -> Any:
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if hasattr(x, "item"):  # numpy scalars
        return _clean(x.item())
    return x


@dataclass
class Record:
    name: str
    value: Any
    passed: bool
    target: Any = None
    tolerance: Any = None
    provenance: str = "exact"

    def to_json(self) -> dict:
        return _clean(
            {
                "name": self.name,
                "value": self.value,
                "target": self.target,
                "tolerance": self.tolerance,
                "pass": bool(self.passed),
                "provenance": self.provenance,
            }
        )


def digest(path: Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunReport:
    command: list[str]
    inputs: dict[str, str] = field(default_factory=dict)
    records: list[Record] = field(default_factory=list)
    grid: Optional[dict] = None
    payload: dict = field(default_factory=dict)
    caveats: list[str] = field(default_factory=list)
    error: Optional[str] = None

    def add(self, *args, **kwargs) -> Record:
        rec = Record(*args, **kwargs)
        self.records.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return self.error is None and all(r.passed for r in self.records)

    def failures(self) -> list[Record]:
        return [r for r in self.records if not r.passed]

    def to_json(self) -> dict:
        out = {
            "command": self.command,
            "inputs": self.inputs,
            "records": [r.to_json() for r in self.records],
            "pass": self.passed,
        }
        if self.grid is not None:
            out["grid"] = self.grid
        if self.payload:
            out["result"] = _clean(self.payload)
        if self.caveats:
            out["caveats"] = self.caveats
        if self.error is not None:
            out["error"] = self.error
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"
