"""Affine maps ``aS + n``, canonical forms, and the doubling map delta.

Two systems are affine equivalent when one is ``aS + n`` of the other with
``gcd(a, M) = 1``.  ``canonical_form`` picks the lexicographically least
member of the orbit (classes sorted by ``(modulus, residue)``).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator

from .core import (
    CongruenceClass,
    CongruenceSystem,
    PreconditionError,
    _checked_lcm,
    covers,
    is_distinct,
    redundant_indices,
)


class InvalidParamsError(PreconditionError):
    pass


@dataclass(frozen=True)
class AffineParams:
    a: int
    n: int

    @classmethod
    def parse(cls, text: str) -> AffineParams:
        a, n = (int(t) for t in text.split(","))
        return cls(a, n)


def units(M: int) -> list[int]:
    """Residues ``1 <= a < M`` coprime to ``M`` (``[1]`` when ``M == 1``)."""
    if M == 1:
        return [1]
    return [a for a in range(1, M) if gcd(a, M) == 1]


def affine_apply(system: CongruenceSystem, a: int | AffineParams, n: int = 0) -> CongruenceSystem:
    """Return ``a*S + n``; ``a`` must be a unit modulo the lcm of ``S``."""
    if isinstance(a, AffineParams):
        a, n = a.a, a.n
    if gcd(a, system.lcm) != 1:
        raise InvalidParamsError(f"gcd({a}, {system.lcm}) != 1")
    return CongruenceSystem(CongruenceClass(a * c.residue + n, c.modulus) for c in system.classes)


def translate(system: CongruenceSystem, n: int) -> CongruenceSystem:
    return affine_apply(system, 1, n)


def affine_orbit(system: CongruenceSystem) -> Iterator[CongruenceSystem]:
    """Every ``aS + n`` for ``a`` a unit and ``0 <= n < M`` (with repeats)."""
    M = _checked_lcm(system)
    for a in units(M):
        for n in range(M):
            yield affine_apply(system, a, n)


def least_translate(pairs: list[tuple[int, int]]) -> tuple[int, ...]:
    """Residues of the lexicographically least translate of a distinct system.

    ``pairs`` are ``(residue, modulus)`` in the order to minimise over.  The
    translations keeping residues ``0..i-1`` at their minimum form a coset of
    ``lcm(m_0..m_{i-1})``, so each residue can be minimised greedily.
    """
    out = []
    shift = 0
    period = 1
    for r, m in pairs:
        g = gcd(period, m)
        c = (r + shift) % m
        low = c % g
        out.append(low)
        step = m // g
        if step > 1:
            t = (-(c // g) * pow(period // g, -1, step)) % step
            shift += period * t
        period = period * step
    return tuple(out)


def canonical_form(system: CongruenceSystem) -> CongruenceSystem:
    """Least member of the affine orbit, with classes sorted by (modulus, residue).

    Distinct systems minimise the translation greedily per multiplier; systems
    with repeated moduli fall back to scanning every translation.
    """
    M = _checked_lcm(system)
    if is_distinct(system):
        ordered = sorted(system.classes)
        moduli = [c.modulus for c in ordered]
        best = min(
            least_translate([(a * c.residue, c.modulus) for c in ordered]) for a in units(M)
        )
        return CongruenceSystem.from_pairs(zip(best, moduli))
    best_key = None
    for image in affine_orbit(system):
        key = tuple(sorted((c.modulus, c.residue) for c in image.classes))
        if best_key is None or key < best_key:
            best_key = key
    return CongruenceSystem(CongruenceClass(r, m) for m, r in best_key)


def canonical_form_bruteforce(system: CongruenceSystem) -> CongruenceSystem:
    """Reference implementation scanning the full ``units(M) x [0, M)`` grid."""
    return min((image.sorted() for image in affine_orbit(system)), key=lambda s: s.classes)


def affine_equivalent(s: CongruenceSystem, t: CongruenceSystem) -> bool:
    if sorted(s.moduli) != sorted(t.moduli):
        return False
    return canonical_form(s) == canonical_form(t)


def delta(system: CongruenceSystem) -> CongruenceSystem:
    """``{1 (mod 2)} + {2r (mod 2m)}``: a minimal distinct cover with one more class."""
    return CongruenceSystem(
        [CongruenceClass(1, 2)]
        + [CongruenceClass(2 * c.residue, 2 * c.modulus) for c in system.classes]
    )


def delta_preimage(system: CongruenceSystem) -> CongruenceSystem | None:
    """The system ``T`` with ``delta(T) == system`` (up to class order), if any."""
    odd = [c for c in system.classes if c == CongruenceClass(1, 2)]
    if len(odd) != 1 or len(system) < 2:
        return None
    rest = [c for c in system.classes if c is not odd[0]]
    if any(c.modulus % 2 or c.residue % 2 or c.modulus < 4 for c in rest):
        return None
    return CongruenceSystem(CongruenceClass(c.residue // 2, c.modulus // 2) for c in rest)


def in_c_k(system: CongruenceSystem) -> bool:
    """Distinct, covering and minimal."""
    return is_distinct(system) and covers(system) and not redundant_indices(system)


def is_delta_primitive(system: CongruenceSystem) -> bool:
    """Neither ``S`` nor ``S + 1`` is the delta image of a smaller system.

    Raises PreconditionError unless ``system`` is a distinct minimal cover.
    """
    if not in_c_k(system):
        raise PreconditionError(f"{system} is not a distinct minimal covering system")
    return delta_preimage(system) is None and delta_preimage(translate(system, 1)) is None
