"""Named check results for the structural verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    details: dict[str, str] = field(default_factory=dict)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        # repeated names AND together so per-item loops can reuse one label
        self.checks[name] = self.checks.get(name, True) and ok
        if detail and not ok:
            prior = self.details.get(name, "")
            self.details[name] = f"{prior}; {detail}" if prior else detail

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [name for name, good in self.checks.items() if not good]

    def summary(self) -> str:
        lines = []
        for name, good in self.checks.items():
            line = f"{'PASS' if good else 'FAIL'} {name}"
            if not good and self.details.get(name):
                line += f" ({self.details[name]})"
            lines.append(line)
        return "\n".join(lines)
