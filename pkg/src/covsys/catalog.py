"""Classification records: JSON-lines/CSV I/O and comparison with the published
classification counts of distinct minimal covering systems."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import IO, Iterable, Sequence

from .core import CongruenceSystem, CovSysError, reciprocal_sum
from .search import factorize
from .transforms import canonical_form

FIELDS = (
    "k",
    "moduli",
    "residues",
    "lcm",
    "reciprocal_sum",
    "delta_primitive",
    "min_modulus",
    "max_modulus",
)


class RecordParseError(CovSysError, ValueError):
    def __init__(self, line: int, message: str) -> None:
        super().__init__(f"line {line}: {message}")
        self.line = line


def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class ClassificationRecord:
    k: int
    moduli: tuple[int, ...]
    residues: tuple[int, ...]
    lcm: int
    reciprocal_sum: str
    delta_primitive: bool
    min_modulus: int
    max_modulus: int

    @classmethod
    def from_system(cls, system: CongruenceSystem, delta_primitive: bool) -> ClassificationRecord:
        s = system.sorted()
        return cls(
            k=len(s),
            moduli=s.moduli,
            residues=s.residues,
            lcm=s.lcm,
            reciprocal_sum=format_fraction(reciprocal_sum(s)),
            delta_primitive=delta_primitive,
            min_modulus=min(s.moduli),
            max_modulus=max(s.moduli),
        )

    @property
    def system(self) -> CongruenceSystem:
        return CongruenceSystem.from_pairs(zip(self.residues, self.moduli))

    def sort_key(self) -> tuple:
        return (self.k, self.moduli, self.residues)

    def to_json(self) -> str:
        d = asdict(self)
        d["moduli"] = list(self.moduli)
        d["residues"] = list(self.residues)
        return json.dumps({name: d[name] for name in FIELDS})

    @classmethod
    def from_dict(cls, d: dict) -> ClassificationRecord:
        missing = [name for name in FIELDS if name not in d]
        if missing:
            raise ValueError(f"missing fields {missing}")
        moduli = tuple(int(m) for m in d["moduli"])
        residues = tuple(int(r) for r in d["residues"])
        if len(moduli) != len(residues) or len(moduli) != int(d["k"]):
            raise ValueError("k, moduli and residues disagree in length")
        Fraction(d["reciprocal_sum"])  # validates the p/q string
        flag = d["delta_primitive"]
        if isinstance(flag, str):
            flag = flag.lower() == "true"
        return cls(
            k=int(d["k"]),
            moduli=moduli,
            residues=residues,
            lcm=int(d["lcm"]),
            reciprocal_sum=str(d["reciprocal_sum"]),
            delta_primitive=bool(flag),
            min_modulus=int(d["min_modulus"]),
            max_modulus=int(d["max_modulus"]),
        )


def sort_records(records: Iterable[ClassificationRecord]) -> list[ClassificationRecord]:
    return sorted(records, key=ClassificationRecord.sort_key)


def _open_for_write(destination):
    if isinstance(destination, (str, Path)):
        return open(destination, "w", encoding="utf-8", newline=""), True
    return destination, False


def write_records(
    records: Iterable[ClassificationRecord], destination: str | Path | IO[str], fmt: str = "jsonl"
) -> None:
    """Write records sorted by ``(k, moduli, residues)`` as JSON lines or CSV."""
    records = sort_records(records)
    fh, owned = _open_for_write(destination)
    try:
        if fmt == "jsonl":
            for rec in records:
                fh.write(rec.to_json() + "\n")
        elif fmt == "csv":
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(FIELDS)
            for rec in records:
                writer.writerow(
                    [
                        rec.k,
                        " ".join(map(str, rec.moduli)),
                        " ".join(map(str, rec.residues)),
                        rec.lcm,
                        rec.reciprocal_sum,
                        "true" if rec.delta_primitive else "false",
                        rec.min_modulus,
                        rec.max_modulus,
                    ]
                )
        else:
            raise ValueError(f"unknown format {fmt!r}")
    finally:
        if owned:
            fh.close()


def read_records(source: str | Path | IO[str]) -> list[ClassificationRecord]:
    """Read JSON-lines records; blank lines are skipped.

    Raises RecordParseError naming the 1-based line of the first bad record.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    out = []
    for lineno, line in enumerate(io.StringIO(text), start=1):
        if not line.strip():
            continue
        try:
            out.append(ClassificationRecord.from_dict(json.loads(line)))
        except (ValueError, TypeError, KeyError) as exc:
            raise RecordParseError(lineno, str(exc)) from None
    return out


def read_records_csv(source: str | Path) -> list[ClassificationRecord]:
    out = []
    with open(source, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), start=2):
            try:
                row = dict(row)
                row["moduli"] = row["moduli"].split()
                row["residues"] = row["residues"].split()
                out.append(ClassificationRecord.from_dict(row))
            except (ValueError, TypeError, KeyError, AttributeError) as exc:
                raise RecordParseError(lineno, str(exc)) from None
    return out


# -- published classification data ---------------------------------------------


def _bracket_system(text: str) -> CongruenceSystem:
    """Parse the ``[r, m], [r, m], ...`` shorthand used by the published tables."""
    nums = [int(t) for t in text.replace("[", " ").replace("]", " ").replace(",", " ").split()]
    return CongruenceSystem.from_pairs(zip(nums[0::2], nums[1::2]))


TABLE1_REPRESENTATIVES: dict[int, list[CongruenceSystem]] = {
    5: [_bracket_system("[1, 2], [1, 3], [2, 4], [2, 6], [0, 12]")],
    6: [
        _bracket_system(s)
        for s in (
            "[1, 2], [1, 3], [2, 4], [2, 6], [4, 8], [0, 24]",
            "[1, 2], [1, 3], [2, 4], [4, 8], [8, 12], [0, 24]",
            "[1, 2], [1, 3], [2, 6], [4, 8], [6, 12], [0, 24]",
        )
    ],
    7: [
        _bracket_system(s)
        for s in (
            "[1, 2], [1, 3], [2, 4], [2, 6], [4, 8], [8, 16], [0, 48]",
            "[1, 2], [1, 3], [2, 4], [2, 6], [3, 9], [6, 18], [0, 36]",
            "[1, 2], [1, 3], [2, 4], [2, 6], [6, 9], [12, 18], [0, 36]",
            "[1, 2], [1, 3], [2, 4], [2, 6], [8, 16], [12, 24], [0, 48]",
            "[1, 2], [1, 3], [2, 4], [4, 8], [8, 12], [8, 16], [0, 48]",
            "[1, 2], [1, 3], [2, 4], [4, 8], [8, 16], [8, 24], [0, 48]",
            "[1, 2], [1, 3], [2, 4], [3, 9], [8, 12], [6, 18], [0, 36]",
            "[1, 2], [1, 3], [2, 4], [6, 9], [8, 12], [12, 18], [0, 36]",
            "[1, 2], [1, 3], [2, 4], [8, 12], [8, 16], [12, 24], [0, 48]",
            "[1, 2], [1, 3], [2, 6], [4, 8], [6, 12], [8, 16], [0, 48]",
            "[1, 2], [1, 3], [2, 6], [3, 9], [6, 12], [6, 18], [0, 36]",
            "[1, 2], [1, 3], [2, 6], [6, 9], [6, 12], [12, 18], [0, 36]",
            "[1, 2], [1, 3], [2, 6], [6, 12], [8, 16], [12, 24], [0, 48]",
            "[1, 2], [2, 4], [2, 6], [3, 9], [4, 12], [6, 18], [0, 36]",
            "[1, 2], [2, 4], [2, 6], [6, 9], [4, 12], [12, 18], [0, 36]",
        )
    ],
}

_K8_SETS = """
2 3 4 6 8 9 18 72; 2 3 4 6 8 9 36 72; 2 3 4 6 8 16 32 96; 2 3 4 6 8 18 36 72;
2 3 4 6 8 32 48 96; 2 3 4 6 9 18 24 72; 2 3 4 6 9 24 36 72; 2 3 4 6 16 24 32 96;
2 3 4 6 18 24 36 72; 2 3 4 6 24 32 48 96; 2 3 4 8 9 12 18 72; 2 3 4 8 9 12 36 72;
2 3 4 8 9 18 24 36; 2 3 4 8 9 18 24 72; 2 3 4 8 9 24 36 72; 2 3 4 8 12 16 32 96;
2 3 4 8 12 18 36 72; 2 3 4 8 12 32 48 96; 2 3 4 8 16 24 32 96; 2 3 4 8 16 32 48 96;
2 3 4 8 18 24 36 72; 2 3 4 8 24 32 48 96; 2 3 4 9 12 18 24 72; 2 3 4 9 12 24 36 72;
2 3 4 12 16 24 32 96; 2 3 4 12 18 24 36 72; 2 3 4 12 24 32 48 96; 2 3 6 8 9 12 18 72;
2 3 6 8 9 12 36 72; 2 3 6 8 9 18 24 36; 2 3 6 8 9 18 36 72; 2 3 6 8 12 16 32 96;
2 3 6 8 12 18 36 72; 2 3 6 8 12 32 48 96; 2 3 6 9 12 18 24 72; 2 3 6 9 12 24 36 72;
2 3 6 9 18 24 36 72; 2 3 6 12 16 24 32 96; 2 3 6 12 18 24 36 72; 2 3 6 12 24 32 48 96;
2 4 6 8 9 12 18 72; 2 4 6 8 9 12 36 72; 2 4 6 8 9 18 24 36; 2 4 6 8 9 18 24 72;
2 4 6 8 9 24 36 72; 2 4 6 9 12 18 24 72; 2 4 6 9 12 24 36 72; 2 4 8 9 12 18 24 36;
2 4 8 9 12 18 24 72; 2 4 8 9 12 24 36 72
"""

TABLE1_K8_MODULI: list[tuple[int, ...]] = [
    tuple(int(t) for t in chunk.split()) for chunk in _K8_SETS.split(";")
]


@dataclass(frozen=True)
class KSummary:
    """Published facts about one cardinality ``k``."""

    classes: int
    moduli_sets: int
    per_set_counts: frozenset[int] | None = None
    max_moduli: tuple[int, ...] | None = None
    min_modulus_always: int | None = None
    largest_prime: int | None = None


@dataclass(frozen=True)
class ExpectedCounts:
    by_k: dict[int, KSummary] = field(default_factory=dict)
    representatives: dict[int, list[CongruenceSystem]] = field(default_factory=dict)
    moduli_sets: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)

    def counts(self, k: int) -> tuple[int, int]:
        s = self.by_k[k]
        return s.classes, s.moduli_sets


TABLE1 = ExpectedCounts(
    by_k={
        1: KSummary(0, 0),
        2: KSummary(0, 0),
        3: KSummary(0, 0),
        4: KSummary(0, 0),
        5: KSummary(1, 1),
        6: KSummary(3, 3),
        7: KSummary(15, 11),
        8: KSummary(85, 50, per_set_counts=frozenset({1, 2})),
        9: KSummary(
            585,
            248,
            per_set_counts=frozenset({1, 2, 4, 6}),
            max_moduli=(30, 48, 60, 72, 80, 108, 144, 192),
            min_modulus_always=2,
            largest_prime=5,
        ),
        10: KSummary(
            6267,
            1652,
            per_set_counts=frozenset({1, 2, 4, 6, 8, 12, 18}),
            max_moduli=(30, 40, 45, 48, 60, 72, 80, 90, 96, 108, 120, 144, 160, 192, 216, 288, 384),
            min_modulus_always=2,
            largest_prime=5,
        ),
    },
    representatives=TABLE1_REPRESENTATIVES,
    moduli_sets={8: TABLE1_K8_MODULI},
)

EXPECTATIONS = {"table1": TABLE1}


@dataclass
class CheckLine:
    k: int
    name: str
    ok: bool
    detail: str

    def __str__(self) -> str:
        return f"{'PASS' if self.ok else 'FAIL'} k={self.k} {self.name}: {self.detail}"


@dataclass
class ComparisonReport:
    lines: list[CheckLine] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(line.ok for line in self.lines)

    def failures(self) -> list[CheckLine]:
        return [line for line in self.lines if not line.ok]

    def __str__(self) -> str:
        return "\n".join(str(line) for line in self.lines)


def _fmt_sets(sets: Iterable[tuple[int, ...]], limit: int = 5) -> str:
    sets = sorted(sets)
    shown = ", ".join("{" + ",".join(map(str, s)) + "}" for s in sets[:limit])
    return shown + (f" (+{len(sets) - limit} more)" if len(sets) > limit else "")


def compare_to_expected(
    records: Sequence[ClassificationRecord],
    expected: ExpectedCounts = TABLE1,
    ks: Iterable[int] | None = None,
) -> ComparisonReport:
    """Check delta-primitive class counts, moduli sets and representatives per ``k``.

    Only ``k`` values present in ``records`` are checked unless ``ks`` is given.
    """
    primitive: dict[int, list[ClassificationRecord]] = {}
    for rec in records:
        if rec.delta_primitive:
            primitive.setdefault(rec.k, []).append(rec)
    if ks is None:
        ks = {rec.k for rec in records}
    report = ComparisonReport()
    for k in sorted(ks):
        if k not in expected.by_k:
            report.lines.append(CheckLine(k, "expected", False, "no expected data for this k"))
            continue
        want = expected.by_k[k]
        recs = primitive.get(k, [])
        per_set = Counter(rec.moduli for rec in recs)
        report.lines.append(
            CheckLine(k, "classes", len(recs) == want.classes, f"got {len(recs)}, expected {want.classes}")
        )
        report.lines.append(
            CheckLine(
                k,
                "moduli sets",
                len(per_set) == want.moduli_sets,
                f"got {len(per_set)}, expected {want.moduli_sets}",
            )
        )
        reps = expected.representatives.get(k)
        if reps:
            have = {canonical_form(rec.system) for rec in recs}
            missing = [rep for rep in reps if canonical_form(rep) not in have]
            detail = (
                f"all {len(reps)} printed representatives found"
                if not missing
                else "no record equivalent to " + "; ".join(str(m) for m in missing)
                + " (moduli " + _fmt_sets(sorted(set(tuple(sorted(m.moduli)) for m in missing))) + ")"
            )
            report.lines.append(CheckLine(k, "representatives", not missing, detail))
        sets = expected.moduli_sets.get(k)
        if sets:
            want_sets = set(sets)
            got_sets = set(per_set)
            parts = []
            if want_sets - got_sets:
                parts.append("missing moduli sets " + _fmt_sets(want_sets - got_sets))
            if got_sets - want_sets:
                parts.append("unexpected moduli sets " + _fmt_sets(got_sets - want_sets))
            report.lines.append(
                CheckLine(
                    k,
                    "moduli set list",
                    not parts,
                    "; ".join(parts) or f"all {len(want_sets)} printed sets match",
                )
            )
        if want.per_set_counts is not None:
            counts = set(per_set.values())
            report.lines.append(
                CheckLine(
                    k,
                    "classes per set",
                    counts <= want.per_set_counts,
                    f"got {sorted(counts)}, allowed {sorted(want.per_set_counts)}",
                )
            )
        if want.max_moduli is not None:
            got = tuple(sorted({max(s) for s in per_set}))
            report.lines.append(
                CheckLine(
                    k,
                    "maximum moduli",
                    got == want.max_moduli,
                    f"got {list(got)}, expected {list(want.max_moduli)}",
                )
            )
        if want.min_modulus_always is not None:
            mins = sorted({min(s) for s in per_set})
            report.lines.append(
                CheckLine(
                    k,
                    "minimum modulus",
                    mins == [want.min_modulus_always] or not mins,
                    f"got {mins}",
                )
            )
        if want.largest_prime is not None:
            big = max((p for s in per_set for m in s for p, _ in factorize(m)), default=1)
            report.lines.append(
                CheckLine(
                    k,
                    "largest prime factor",
                    big <= want.largest_prime,
                    f"got {big}, limit {want.largest_prime}",
                )
            )
    return report
