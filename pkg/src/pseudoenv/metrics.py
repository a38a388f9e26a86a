"""Primitive-operation counters used as complexity evidence by bench and tests."""
from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class Counts:
    classify: int = 0
    split: int = 0
    join: int = 0
    locate_steps: int = 0

    def reset(self) -> None:
        self.classify = self.split = self.join = self.locate_steps = 0

    def snapshot(self) -> dict[str, int]:
        return asdict(self)

    @property
    def primitives(self) -> int:
        return self.classify + self.split + self.join


# Process-global; structures are single-writer so no locking is needed.
COUNTS = Counts()
