"""Campaign reports and their deterministic JSON serialization."""

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction


def _plain(x):
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, float):
        return float(f"{x:.15g}")
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def dumps(record):
    """One canonical JSON line: sorted keys, fixed float formatting."""
    return json.dumps(_plain(record), sort_keys=True, separators=(",", ":"))


@dataclass
class RunningMean:
    count: int = 0
    total: Fraction = Fraction(0)
    total_sq: Fraction = Fraction(0)

    def add(self, x):
        x = Fraction(x)
        self.count += 1
        self.total += x
        self.total_sq += x * x

    def merge(self, other):
        return RunningMean(self.count + other.count, self.total + other.total,
                           self.total_sq + other.total_sq)

    @property
    def mean(self):
        return self.total / self.count if self.count else None

    @property
    def stderr(self):
        if self.count < 2:
            return None
        var = (self.total_sq - self.total * self.total / self.count) / (self.count - 1)
        return math.sqrt(float(var) / self.count)

    def to_json(self):
        m = self.mean
        return {"count": self.count, "mean": None if m is None else float(m),
                "mean_exact": m, "stderr": self.stderr}


@dataclass
class CampaignReport:
    kind: str
    params: dict
    tallies: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    label: str = ""

    def to_json(self):
        out = {"type": "report", "kind": self.kind, "params": self.params,
               "tallies": self.tallies, "results": self.results}
        if self.label:
            out["label"] = self.label
        return out

    def dumps(self):
        return dumps(self.to_json())
