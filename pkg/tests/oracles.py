"""Independent reference computations used to check the fast paths.

Nothing here shares code with the search beyond the system value types.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import reduce
from math import gcd

from covsys.core import CongruenceSystem, is_minimal
from covsys.transforms import canonical_form


def lcm_of(values):
    return reduce(lambda a, b: a * b // gcd(a, b), values, 1)


def mask(r, m, M):
    bits = 0
    for j in range(r % m, M, m):
        bits |= 1 << j
    return bits


def covers_brute(pairs, span):
    """Test every integer in ``[0, span)`` directly."""
    return all(any((n - r) % m == 0 for r, m in pairs) for n in range(span))


def minimal_by_removal(pairs):
    """Definition of minimal: no single class can be dropped."""
    M = lcm_of(m for _, m in pairs)
    if not covers_brute(pairs, M):
        raise ValueError("not a cover")
    return all(not covers_brute(pairs[:i] + pairs[i + 1 :], M) for i in range(len(pairs)))


def reciprocal_sum_fractions(moduli):
    return sum((Fraction(1, m) for m in moduli), Fraction(0))


def _holes(moduli, want_minimal):
    """Hole filling: the least uncovered residue must lie in some unused class."""
    moduli = tuple(sorted(moduli))
    M = lcm_of(moduli)
    full = (1 << M) - 1
    masks = {}

    def class_bits(r, m):
        key = (r, m)
        if key not in masks:
            masks[key] = mask(r, m, M)
        return masks[key]

    def go(covered, unused, chosen):
        if covered == full:
            yield chosen
            return
        if not unused:
            return
        hole = full & ~covered
        u = (hole & -hole).bit_length() - 1
        if hole.bit_count() > sum(M // moduli[i] for i in unused):
            return
        tried = set()
        for i in unused:
            m = moduli[i]
            if m in tried:
                continue
            tried.add(m)
            rest = tuple(j for j in unused if j != i)
            yield from go(covered | class_bits(u % m, m), rest, chosen + [(u % m, m)])

    return go(0, tuple(range(len(moduli))), [])


def any_cover_by_holes(moduli):
    """Can some choice of residues (moduli may repeat, each used at most once) cover Z?"""
    if 1 in moduli:
        return True
    return next(iter(_holes(moduli, False)), None) is not None


def minimal_covers_by_holes(moduli):
    """All minimal covers using each (distinct) modulus exactly once."""
    found = set()
    k = len(moduli)
    for chosen in _holes(moduli, True):
        if len(chosen) != k:
            continue
        system = CongruenceSystem.from_pairs(sorted(chosen, key=lambda rm: rm[1]))
        if is_minimal(system):
            found.add(system)
    return found


def canonical_set(systems):
    return {canonical_form(s) for s in systems}


def count_exact_covers(moduli_counts):
    """Number of exact covers using exactly ``count`` classes of each modulus.

    ``moduli_counts`` maps modulus -> number of classes.  Each exact cover is
    reached exactly once by always covering the least uncovered residue.
    """
    M = lcm_of(moduli_counts)
    full = (1 << M) - 1

    def go(covered, left):
        if covered == full:
            return 1 if not any(left.values()) else 0
        hole = full & ~covered
        u = (hole & -hole).bit_length() - 1
        total = 0
        for m, c in left.items():
            if not c:
                continue
            bits = mask(u, m, M)
            if bits & covered:
                continue
            left[m] -= 1
            total += go(covered | bits, left)
            left[m] += 1
        return total

    return go(0, dict(moduli_counts))


def exact_cover_exists(moduli_counts):
    """Is there an exact cover using exactly ``count`` classes of each modulus?"""
    moduli_counts = {m: c for m, c in moduli_counts.items() if c}
    if sum((Fraction(c, m) for m, c in moduli_counts.items()), Fraction(0)) != 1:
        return False
    M = lcm_of(moduli_counts)
    full = (1 << M) - 1

    def go(covered, left):
        if covered == full:
            return True
        hole = full & ~covered
        u = (hole & -hole).bit_length() - 1
        for m, c in left.items():
            if not c:
                continue
            bits = mask(u, m, M)
            if bits & covered:
                continue
            left[m] -= 1
            found = go(covered | bits, left)
            left[m] += 1
            if found:
                return True
        return False

    return go(0, dict(moduli_counts))


def prime_power_multisets(n, top, k):
    """Every multiset of ``k`` moduli drawn from ``n, n^2, ..., n^top``, as counts."""
    pool = [n**e for e in range(1, top + 1)]
    for combo in itertools.combinations_with_replacement(pool, k):
        counts = dict.fromkeys(pool, 0)
        for m in combo:
            counts[m] += 1
        yield counts


def divisor_subsets(M, k, min_modulus=2):
    divs = [d for d in range(min_modulus, M + 1) if M % d == 0]
    return itertools.combinations(divs, k)
