"""Run configuration shared by the suites and the CLI."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .errors import DomainError


@dataclass(frozen=True)
class RunConfig:
    p: int = 3
    M: int = 32          # X-adic truncation / length of random inputs
    N: int = 24          # p-adic precision in base-p digits
    M_t: int = 8         # t-adic truncation for iota_n
    neg_depth: int = 8
    tau: int | None = None   # series zero-test threshold; None means N - 4
    seed: int = 0
    cases: int = 100
    iota_cases: int = 50
    module_cases: int = 50
    levels: tuple = (1, 2)

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(int(n) for n in self.levels))
        for name in ("p", "M", "N", "M_t", "neg_depth", "cases", "iota_cases", "module_cases"):
            if getattr(self, name) <= 0:
                raise DomainError(f"config field {name} must be positive")
        if self.p not in (2, 3, 5, 7, 11, 13):
            raise DomainError(f"p = {self.p} is not a supported small prime")
        if self.seed < 0:
            raise DomainError("seed must be nonnegative")
        if not self.levels or min(self.levels) < 1:
            raise DomainError("levels must be positive integers")

    @property
    def threshold(self):
        return self.N - 4 if self.tau is None else self.tau

    def with_(self, **changes) -> "RunConfig":
        data = asdict(self)
        data.update({k: v for k, v in changes.items() if v is not None})
        return RunConfig(**data)

    def to_json(self):
        d = asdict(self)
        d["levels"] = list(self.levels)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise DomainError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        return cls.from_dict(json.loads(Path(path).read_text()))
