"""Exact covering systems with restricted moduli.

Two families: all moduli powers of a fixed ``n``, and exactly two distinct
moduli ``m`` and ``j*m``.
"""

from __future__ import annotations

import itertools
from math import comb

from .core import CongruenceClass, CongruenceSystem, PreconditionError


def exact_prime_power_exists(n: int, k: int) -> bool:
    """Is there an exact cover by ``k`` classes whose moduli are all powers of ``n``?"""
    if n <= 1 or k <= 1:
        raise PreconditionError("need n > 1 and k > 1")
    return (k - 1) % (n - 1) == 0


def exact_prime_power_construct(n: int, k: int) -> CongruenceSystem:
    """An explicit exact cover by ``k`` classes with moduli ``n, n^2, ..., n^q``.

    With ``k = q(n-1) + 1``, level ``i < q`` holds ``t*n^(i-1) (mod n^i)`` for
    ``t = 1..n-1`` and the top level holds all ``n`` classes ``t*n^(q-1) (mod n^q)``.
    """
    if not exact_prime_power_exists(n, k):
        raise PreconditionError(f"no exact cover by {k} classes with moduli powers of {n}")
    q = (k - 1) // (n - 1)
    classes = []
    for i in range(1, q):
        classes += [CongruenceClass(t * n ** (i - 1), n**i) for t in range(1, n)]
    classes += [CongruenceClass(t * n ** (q - 1), n**q) for t in range(n)]
    return CongruenceSystem(classes)


def _valid_splits(m: int, k: int) -> list[int]:
    if k <= m:
        raise PreconditionError(f"need k > m, got m={m}, k={k}")
    return [d for d in range(1, m) if (k - m) % d == 0]


def exact_two_moduli_count(m: int, k: int) -> int:
    """Number of exact covers by ``k`` classes using exactly the moduli ``m`` and some ``j*m``.

    ``d`` of the ``m`` classes mod ``m`` are left open and each is split into
    ``j = (k-m)/d + 1`` classes mod ``j*m``; ``d`` ranges over divisors of
    ``k - m`` below ``m``.
    """
    return sum(comb(m, d) for d in _valid_splits(m, k))


def exact_two_moduli_enumerate(m: int, k: int) -> list[CongruenceSystem]:
    """The systems counted by ``exact_two_moduli_count``, one per choice."""
    out = []
    for d in _valid_splits(m, k):
        j = (k - m) // d + 1
        for opened in itertools.combinations(range(m), d):
            kept = [CongruenceClass(r, m) for r in range(m) if r not in opened]
            split = [CongruenceClass(s + m * t, j * m) for s in opened for t in range(j)]
            out.append(CongruenceSystem(kept + split))
    return out
