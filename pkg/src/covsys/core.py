"""Congruence classes, systems of congruences and their basic verdicts.

Everything here is exact integer arithmetic.  Coverage is decided on the
residues ``0 .. M-1`` where ``M`` is the lcm of the moduli, which suffices
because every class is periodic with period dividing ``M``.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd
from typing import Iterable, Sequence

DEFAULT_MAX_LCM = 2**32


class CovSysError(Exception):
    """Base class for errors raised by this package."""


class ParseError(CovSysError, ValueError):
    pass


class LcmOverflowError(CovSysError):
    """The lcm of a system exceeds the configured ceiling."""


class PreconditionError(CovSysError, ValueError):
    pass


def max_lcm() -> int:
    """Current ceiling on M; ``COVSYS_MAX_LCM`` overrides the default."""
    value = os.environ.get("COVSYS_MAX_LCM")
    if value:
        return int(value)
    return DEFAULT_MAX_LCM


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)


@dataclass(frozen=True, order=True)
class CongruenceClass:
    """The set of integers congruent to ``residue`` modulo ``modulus``.

    Orders by ``(modulus, residue)``, the sort key used for canonical forms.
    """

    modulus: int
    residue: int

    def __init__(self, residue: int, modulus: int) -> None:
        if modulus < 2:
            raise ValueError(f"modulus must be >= 2, got {modulus}")
        object.__setattr__(self, "modulus", int(modulus))
        object.__setattr__(self, "residue", int(residue) % modulus)

    def __contains__(self, n: int) -> bool:
        return (n - self.residue) % self.modulus == 0

    def __str__(self) -> str:
        return f"{self.residue}/{self.modulus}"

    def __repr__(self) -> str:
        return f"CongruenceClass({self.residue}, {self.modulus})"

    @classmethod
    def parse(cls, text: str) -> CongruenceClass:
        m = re.fullmatch(r"\s*([+-]?\d+)\s*/\s*(\d+)\s*", text)
        if m is None:
            raise ParseError(f"cannot parse congruence class {text!r}; expected 'r/m'")
        modulus = int(m.group(2))
        if modulus < 2:
            raise ParseError(f"modulus must be >= 2 in {text!r}")
        return cls(int(m.group(1)), modulus)


@dataclass(frozen=True)
class CongruenceSystem:
    """An ordered collection of congruence classes."""

    classes: tuple[CongruenceClass, ...]
    lcm: int = field(init=False, compare=False)

    def __init__(self, classes: Iterable[CongruenceClass | tuple[int, int]]) -> None:
        items = tuple(
            c if isinstance(c, CongruenceClass) else CongruenceClass(*c) for c in classes
        )
        if not items:
            raise ValueError("a system needs at least one class")
        object.__setattr__(self, "classes", items)
        object.__setattr__(self, "lcm", lcm(*(c.modulus for c in items)))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> CongruenceSystem:
        """Build from ``(residue, modulus)`` pairs."""
        return cls(CongruenceClass(r, m) for r, m in pairs)

    @classmethod
    def parse(cls, text: str) -> CongruenceSystem:
        """Parse the ``"r/m,r/m,..."`` text form.  Whitespace is ignored."""
        parts = [p for p in re.sub(r"\s+", "", text).split(",")]
        if not parts or any(not p for p in parts):
            raise ParseError(f"cannot parse congruence system {text!r}")
        return cls(CongruenceClass.parse(p) for p in parts)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(c.modulus for c in self.classes)

    @property
    def residues(self) -> tuple[int, ...]:
        return tuple(c.residue for c in self.classes)

    def pairs(self) -> list[tuple[int, int]]:
        return [(c.residue, c.modulus) for c in self.classes]

    def sorted(self) -> CongruenceSystem:
        return CongruenceSystem(sorted(self.classes))

    def without(self, index: int) -> CongruenceSystem:
        return CongruenceSystem(c for i, c in enumerate(self.classes) if i != index)

    @cached_property
    def multiplicities(self) -> tuple[int, ...]:
        """How many classes contain each residue ``0 .. M-1``."""
        M = _checked_lcm(self)
        counts = bytearray(M) if len(self.classes) < 256 else [0] * M
        for c in self.classes:
            for j in range(c.residue, M, c.modulus):
                counts[j] += 1
        return tuple(counts)


def _checked_lcm(system: CongruenceSystem) -> int:
    ceiling = max_lcm()
    if system.lcm > ceiling:
        raise LcmOverflowError(
            f"lcm {system.lcm} of {system} exceeds the ceiling {ceiling} (set COVSYS_MAX_LCM)"
        )
    return system.lcm


def class_mask(residue: int, modulus: int, M: int) -> int:
    """Bit mask over ``0 .. M-1`` of the residues in ``residue (mod modulus)``."""
    return _periodic_base(modulus, M) << (residue % modulus)


_BASES: dict[tuple[int, int], int] = {}


def _periodic_base(modulus: int, M: int) -> int:
    key = (modulus, M)
    base = _BASES.get(key)
    if base is None:
        base = int(("0" * (modulus - 1) + "1") * (M // modulus), 2)
        if len(_BASES) < 100_000:
            _BASES[key] = base
    return base


def coverage_bitmap(system: CongruenceSystem) -> int:
    """Bit ``j`` is set iff residue ``j`` (mod M) lies in some class of ``system``."""
    M = _checked_lcm(system)
    bits = 0
    for c in system.classes:
        bits |= class_mask(c.residue, c.modulus, M)
    return bits


def covers(system: CongruenceSystem) -> bool:
    """True iff every integer lies in some class of ``system``."""
    return coverage_bitmap(system) == (1 << system.lcm) - 1


def uncovered_residues(system: CongruenceSystem) -> list[int]:
    bits = coverage_bitmap(system)
    return [j for j in range(system.lcm) if not bits >> j & 1]


def reciprocal_sum(system: CongruenceSystem | Sequence[int]) -> Fraction:
    """Sum of the reciprocals of the moduli, exactly."""
    moduli = system.moduli if isinstance(system, CongruenceSystem) else system
    M = lcm(*moduli)
    return Fraction(sum(M // m for m in moduli), M)


def is_distinct(system: CongruenceSystem) -> bool:
    return len(set(system.moduli)) == len(system.moduli)


def is_exact(system: CongruenceSystem) -> bool:
    """True iff the classes are pairwise disjoint (covering or not)."""
    return max(system.multiplicities) <= 1


def redundant_indices(system: CongruenceSystem) -> list[int]:
    """Indices of classes whose removal leaves a covering system.

    Empty for a system that does not cover in the first place.
    """
    counts = system.multiplicities
    M = system.lcm
    if 0 in counts:
        return []
    return [
        i
        for i, c in enumerate(system.classes)
        if all(counts[j] > 1 for j in range(c.residue, M, c.modulus))
    ]


def is_minimal(system: CongruenceSystem) -> bool:
    """True iff removing any one class breaks the covering.

    Raises PreconditionError if ``system`` does not cover.
    """
    if not covers(system):
        raise PreconditionError(f"{system} is not a covering system")
    return not redundant_indices(system)


@dataclass(frozen=True)
class SystemReport:
    covers: bool
    distinct: bool
    exact: bool
    minimal: bool
    reciprocal_sum: Fraction
    uncovered_count: int
    redundant_indices: tuple[int, ...]

    def summary(self) -> str:
        flag = lambda b: "true" if b else "false"  # noqa: E731
        return (
            f"covers={flag(self.covers)} minimal={flag(self.minimal)} "
            f"distinct={flag(self.distinct)} exact={flag(self.exact)} "
            f"R={self.reciprocal_sum} uncovered={self.uncovered_count}"
        )


def analyze(system: CongruenceSystem) -> SystemReport:
    counts = system.multiplicities
    uncovered = counts.count(0)
    redundant = tuple(redundant_indices(system))
    does_cover = uncovered == 0
    return SystemReport(
        covers=does_cover,
        distinct=is_distinct(system),
        exact=max(counts) <= 1,
        minimal=does_cover and not redundant,
        reciprocal_sum=reciprocal_sum(system),
        uncovered_count=uncovered,
        redundant_indices=redundant,
    )
