"""Structured verdicts shared by the tensor and verification layers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional


@dataclass
class Report:
    """Outcome of one named identity check.

    ``witness`` describes the first failure in deterministic iteration order
    (for example ``{"triple": ["S[1,2]", "S[2,1]", "S0"], "residual": "..."}``)
    and is always present when ``passed`` is false.
    """

    name: str
    passed: bool
    checked: int = 0
    witness: Optional[dict] = None
    elapsed: float = 0.0
    details: dict = field(default_factory=dict)
    subreports: list = field(default_factory=list)

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError(f"failed report {self.name!r} needs a witness")

    def __bool__(self):
        return self.passed

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self, timing: bool = False) -> dict:
        out: dict[str, Any] = {
            "name": self.name,
            "status": self.status,
            "checked": self.checked,
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.details:
            out["details"] = self.details
        if self.subreports:
            out["subreports"] = [r.to_dict(timing) for r in self.subreports]
        if timing:
            out["elapsed"] = round(self.elapsed, 6)
        return out

    def lines(self, indent: int = 0) -> list:
        pad = "  " * indent
        head = f"{pad}[{self.status.upper()}] {self.name} ({self.checked} checked)"
        out = [head]
        if self.witness is not None:
            for k, v in self.witness.items():
                out.append(f"{pad}    {k}: {v}")
        for k, v in self.details.items():
            out.append(f"{pad}    {k}: {v}")
        for r in self.subreports:
            out.extend(r.lines(indent + 1))
        return out

    def __str__(self):
        return "\n".join(self.lines())
