"""Brute-force cross-check of a synthesized model against its records.

For every one of the 48 factor triples the model should let the user reach
``Share`` with the observers recording that triple exactly when the user
shared in that situation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .checker import check
from .model import factor_triples
from .synthesis.builder import OBSERVERS, observer_location


def share_query(triple, process: str = "user", location: str = "Share") -> str:
    it, ts, rr = triple
    atoms = [f"{process}.{location}"]
    for kind, value in zip(OBSERVERS, (it, ts, rr)):
        proc, loc = observer_location(kind, value)
        atoms.append(f"{proc}.{loc}")
    return f"E<> ({' and '.join(atoms)})"


@dataclass(frozen=True)
class OracleRow:
    triple: tuple
    expected: bool
    satisfied: bool

    @property
    def ok(self) -> bool:
        return self.expected == self.satisfied


def run_oracle(network, shared_triples) -> list:
    """Check all 48 triples; ``shared_triples`` is the expected positive set."""
    shared = set(shared_triples)
    return [OracleRow(t, t in shared, check(network, share_query(t)).satisfied) for t in factor_triples()]


def mismatches(rows) -> list:
    return [r for r in rows if not r.ok]
