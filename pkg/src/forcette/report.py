from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Case:
    label: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = f"  # {self.detail}" if self.detail and not self.ok else ""
        return f"CASE {self.label} {status}{tail}"


@dataclass
class Report:
    """Accumulates pass/fail cases for a batch verification."""

    title: str
    cases: list[Case] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def check(self, label: str, ok: bool, detail: str = "") -> bool:
        self.cases.append(Case(label, bool(ok), detail))
        return bool(ok)

    def note(self, text: str) -> None:
        self.notes.append(text)

    def extend(self, other: Report) -> None:
        self.cases.extend(other.cases)
        self.notes.extend(other.notes)

    @property
    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        n_fail = len(self.failures)
        verdict = "PASS" if n_fail == 0 else "FAIL"
        return f"SUMMARY {self.title}: {len(self.cases)} cases, {n_fail} failed, {verdict}"

    def render(self, cases: bool = True) -> str:
        out = []
        if cases:
            out.extend(c.line() for c in self.cases)
        out.extend(f"NOTE {n}" for n in self.notes)
        out.append(self.summary())
        return "\n".join(out)
