"""Half-open character intervals shared by every stage of the pipeline."""

from __future__ import annotations

from typing import NamedTuple


class Span(NamedTuple):
    """Half-open interval [start, end) over a text, in Unicode code points."""

    start: int
    end: int

    def __len__(self) -> int:  # pragma: no cover - trivial
        return self.end - self.start

    @property
    def length(self) -> int:
        return self.end - self.start

    def overlaps(self, other: "Span") -> bool:
        return self.start < other.end and other.start < self.end

    def contains(self, other: "Span") -> bool:
        """True when `other` lies fully inside this span."""
        return self.start <= other.start and other.end <= self.end

    def slice(self, text: str) -> str:
        return text[self.start : self.end]


def spans_disjoint(spans: list[Span]) -> bool:
    """True when no two spans in the list overlap."""
    ordered = sorted(spans)
    return all(a.end <= b.start for a, b in zip(ordered, ordered[1:]))
