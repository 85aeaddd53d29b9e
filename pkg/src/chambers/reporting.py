"""Check reports: ordered PASS/FAIL lines plus plain value lines.

Every verification routine in the package returns a Report rather than a
bare bool, so the CLI and the tests see the same witnesses.  Lines are
appended in canonical iteration order, which makes reports byte-stable
across runs.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckLine:
    check_id: str
    passed: bool
    witness: tuple = ()

    def text(self):
        verdict = "PASS" if self.passed else "FAIL"
        tail = "".join(" " + str(w) for w in self.witness)
        return f"CHECK {self.check_id} {verdict}{tail}"

    def tsv(self):
        verdict = "PASS" if self.passed else "FAIL"
        return "\t".join(["CHECK", self.check_id, verdict, *map(str, self.witness)])


@dataclass(frozen=True)
class ValueLine:
    key: str
    value: str
    fields: tuple = ()

    def text(self):
        return f"{self.key} = {self.value}"

    def tsv(self):
        fields = self.fields if self.fields else (self.key, self.value)
        return "\t".join(str(f) for f in fields)


@dataclass
class Report:
    lines: list = field(default_factory=list)

    def check(self, check_id, passed, *witness):
        self.lines.append(CheckLine(check_id, bool(passed), tuple(witness)))
        return bool(passed)

    def value(self, key, value, *fields):
        self.lines.append(ValueLine(key, str(value), tuple(fields)))

    def extend(self, other):
        self.lines.extend(other.lines)
        return self

    @property
    def checks(self):
        return [l for l in self.lines if isinstance(l, CheckLine)]

    @property
    def failures(self):
        return [l for l in self.checks if not l.passed]

    @property
    def ok(self):
        return not self.failures

    def verdict(self, check_id):
        for l in self.checks:
            if l.check_id == check_id:
                return l.passed
        raise KeyError(check_id)

    def render(self, fmt="text"):
        if fmt == "tsv":
            return "\n".join(l.tsv() for l in self.lines)
        return "\n".join(l.text() for l in self.lines)

    def __str__(self):
        return self.render()
