"""Audit trees for constant derivations."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import arith

#: digits used when printing interval endpoints in reports
ENDPOINT_DIGITS = 40


@dataclass(frozen=True)
class Check:
    """A side condition evaluated during a derivation."""

    name: str
    passed: bool
    detail: str

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class TraceNode:
    name: str
    value: arith.Interval
    formula: str
    children: tuple[TraceNode, ...] = ()
    asymptotic: bool = False
    source: str = "derived"
    depends_on: tuple[str, ...] = ()

    @property
    def bounds(self):
        return arith.endpoints(self.value)

    @property
    def midpoint(self) -> float:
        return arith.midpoint(self.value)

    @property
    def radius(self) -> float:
        return arith.radius(self.value)

    def walk(self):
        yield self
        for child in self.children:
            yield from child.walk()

    def to_dict(self):
        lo, hi = self.bounds
        return {
            "name": self.name,
            "value_lo": arith.format_directed(lo, ENDPOINT_DIGITS, up=False),
            "value_hi": arith.format_directed(hi, ENDPOINT_DIGITS, up=True),
            "midpoint": self.midpoint,
            "radius": self.radius,
            "formula": self.formula,
            "asymptotic": self.asymptotic,
            "source": self.source,
            "depends_on": list(self.depends_on),
            "children": [c.to_dict() for c in self.children],
        }


@dataclass(frozen=True)
class DerivationTrace:
    root: TraceNode
    checks: tuple[Check, ...] = field(default=())

    def nodes(self):
        return list(self.root.walk())

    def __getitem__(self, name: str) -> TraceNode:
        for node in self.root.walk():
            if node.name == name:
                return node
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(node.name == name for node in self.root.walk())

    def names(self):
        return [n.name for n in self.root.walk()]

    def max_relative_width(self) -> float:
        return max(arith.relative_width(n.value) for n in self.root.walk())

    def flat_rows(self):
        """Rows for the CSV form: name, midpoint, radius, formula."""
        return [
            {"name": n.name, "midpoint": n.midpoint, "radius": n.radius, "formula": n.formula}
            for n in self.root.walk()
        ]

    def to_dict(self):
        return {
            "trace": self.root.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
        }
