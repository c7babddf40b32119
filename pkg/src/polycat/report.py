"""Plain-text check reports with a stable rendering for golden tests."""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Report:
    """Outcome of a verification: a title, a verdict, and detail lines.

    Rendering is deterministic: no timestamps, no addresses, no dict
    iteration over unordered data. Two runs with the same inputs render
    byte-identical text.
    """

    title: str
    ok: bool
    lines: tuple[str, ...] = ()

    def render(self) -> str:
        head = f"{self.title}: {'ok' if self.ok else 'FAIL'}"
        return "\n".join([head, *(f"  {line}" for line in self.lines)])

    def __str__(self) -> str:
        return self.render()


def merge(title: str, parts: list[Report]) -> Report:
    """Combine sub-reports; ok iff every part is ok."""
    lines: list[str] = []
    for part in parts:
        lines.extend(part.render().splitlines())
    return Report(title, all(p.ok for p in parts), tuple(lines))
