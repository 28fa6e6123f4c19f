"""Check reports shared by all verification suites and the CLI."""

from __future__ import annotations

import time
from dataclasses import dataclass, field


@dataclass
class Check:
    id: str
    status: str
    witness: str | None = None
    time_ms: float = 0.0

    def to_json(self):
        d = {"id": self.id, "status": self.status, "time_ms": round(self.time_ms, 3)}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass
class Report:
    suite: str
    checks: list = field(default_factory=list)
    environment: dict = field(default_factory=dict)

    def check(self, cid, fn, *args, **kwargs):
        """Run fn; it returns None on success or a witness string on failure.

        A returned dict is merged in as several checks (id suffixes as keys).
        """
        if any(c.id == cid for c in self.checks):
            raise ValueError("duplicate check id %r" % cid)
        t0 = time.perf_counter()
        try:
            witness = fn(*args, **kwargs)
        except Exception as exc:  # a crash is a failed check, not a crashed suite
            witness = "%s: %s" % (type(exc).__name__, exc)
        ms = (time.perf_counter() - t0) * 1000.0
        status = "pass" if witness is None else "fail"
        self.checks.append(Check(cid, status, witness, ms))
        return status == "pass"

    def add(self, cid, ok, witness=None, time_ms=0.0):
        if any(c.id == cid for c in self.checks):
            raise ValueError("duplicate check id %r" % cid)
        self.checks.append(Check(cid, "pass" if ok else "fail", None if ok else witness, time_ms))
        return ok

    def skip(self, cid, reason):
        self.checks.append(Check(cid, "skip", reason, 0.0))

    def extend(self, other, prefix=""):
        for c in other.checks:
            cid = prefix + c.id
            if any(x.id == cid for x in self.checks):
                raise ValueError("duplicate check id %r" % cid)
            self.checks.append(Check(cid, c.status, c.witness, c.time_ms))

    @property
    def passed(self):
        return all(c.status != "fail" for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c.status == "fail"]

    def to_json(self):
        return {
            "suite": self.suite,
            "checks": [c.to_json() for c in self.checks],
            "environment": dict(self.environment),
        }

    def summary(self):
        n = len(self.checks)
        bad = len(self.failures())
        skipped = sum(c.status == "skip" for c in self.checks)
        return "%s: %d checks, %d failed, %d skipped" % (self.suite, n, bad, skipped)


def map_equal(lhs, rhs):
    """None if two LinMaps agree, else a short witness string."""
    w = lhs.difference_witness(rhs)
    if w is None:
        return None
    i, o, a, b = w
    return "input %s output %s: lhs %s, rhs %s" % (list(i), list(o), a, b)


def tensor_equal(lhs, rhs):
    """None if two SparseTensors agree, else a witness string."""
    if lhs.n != rhs.n:
        return "leg counts %d and %d" % (lhs.n, rhs.n)
    from .exactq import ZERO
    from .tensorla import decode

    for k in sorted(set(lhs.entries) | set(rhs.entries)):
        a = lhs.entries.get(k, ZERO)
        b = rhs.entries.get(k, ZERO)
        if a != b:
            return "index %s: lhs %s, rhs %s" % (list(decode(k, lhs.n)), a, b)
    return None
