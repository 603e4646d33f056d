"""Enumeration of distinct minimal covering systems with a given number of moduli.

Pipeline per cardinality ``k``:

1. candidate lcms ``M`` with ``sum a_i (p_i - 1) + 1 <= k`` over ``M = prod p_i^a_i``
   (a minimal cover always satisfies this bound);
2. every ``k``-subset of the divisors of the divisibility-maximal lcms;
3. ``prune_bad``, a sound but incomplete test rejecting lists that cannot cover;
4. ``residue_search``, an exhaustive backtracking over residues on bit vectors;
5. reduction to one canonical representative per affine class.
"""

from __future__ import annotations

import enum
import itertools
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb, gcd
from typing import Callable, Iterable, Iterator, NamedTuple, Sequence

from .core import CongruenceSystem, CovSysError, _periodic_base, lcm, max_lcm
from .transforms import is_delta_primitive, least_translate, units

log = logging.getLogger(__name__)


class CapacityError(CovSysError):
    """A configured resource ceiling was hit while searching a candidate."""


class Verdict(str, enum.Enum):
    UNKNOWN = "unknown"  # also the "don't know" answer of prune_bad
    BAD = "bad"
    GOOD = "good"


def factorize(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def lcm_cost(M: int) -> int:
    """``sum a_i (p_i - 1) + 1``: the fewest classes a minimal cover with lcm ``M`` can have."""
    return sum(e * (p - 1) for p, e in factorize(M)) + 1


def divisors(n: int) -> list[int]:
    small = [d for d in range(1, int(n**0.5) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


@dataclass(frozen=True)
class LcmCandidate:
    value: int
    factorization: tuple[tuple[int, int], ...]
    cost: int


class LcmLists(NamedTuple):
    all: list[LcmCandidate]
    maximal: list[LcmCandidate]


def candidate_lcms(k_max: int, min_modulus: int = 2) -> LcmLists:
    """All ``M > 1`` (``M >= min_modulus``) of cost at most ``k_max``, and the maximal ones."""
    budget = k_max - 1
    primes = [p for p in range(2, budget + 2) if all(p % q for q in range(2, p))]
    found: list[int] = []

    def extend(i: int, value: int, left: int) -> None:
        if i == len(primes):
            if value > 1 and value >= min_modulus:
                found.append(value)
            return
        p = primes[i]
        e = 0
        while e * (p - 1) <= left:
            extend(i + 1, value * p**e, left - e * (p - 1))
            e += 1

    if budget >= 1:
        extend(0, 1, budget)
    found.sort()
    cands = [LcmCandidate(M, tuple(factorize(M)), lcm_cost(M)) for M in found]
    maximal = [c for c in cands if not any(o.value != c.value and o.value % c.value == 0 for o in cands)]
    return LcmLists(cands, maximal)


@dataclass
class ModuliCandidate:
    moduli: tuple[int, ...]
    lcm: int
    verdict: Verdict = Verdict.UNKNOWN

    @classmethod
    def of(cls, moduli: Iterable[int]) -> ModuliCandidate:
        ms = tuple(sorted(moduli))
        return cls(ms, lcm(*ms))


def enumerate_moduli_lists(
    lcm_set: Iterable[LcmCandidate | int], k: int, min_modulus: int = 2
) -> Iterator[ModuliCandidate]:
    """Every ``k``-subset of divisors (``>= min_modulus``) of each lcm, each emitted once."""
    seen: set[tuple[int, ...]] = set()
    for M in lcm_set:
        value = M.value if isinstance(M, LcmCandidate) else M
        divs = [d for d in divisors(value) if d > 1 and d >= min_modulus]
        for subset in itertools.combinations(divs, k):
            if subset in seen:
                continue
            seen.add(subset)
            yield ModuliCandidate(subset, lcm(*subset))


def count_moduli_lists(lcm_set: Iterable[LcmCandidate], k: int, min_modulus: int = 2) -> int:
    """Upper bound on ``enumerate_moduli_lists`` output (before deduplication)."""
    total = 0
    for M in lcm_set:
        total += comb(sum(1 for d in divisors(M.value) if d > 1 and d >= min_modulus), k)
    return total


# -- pruning -----------------------------------------------------------------


class _Budget:
    __slots__ = ("left",)

    def __init__(self, left: int) -> None:
        self.left = left


def prune_bad(candidate: ModuliCandidate | Sequence[int], budget: int = 20_000) -> Verdict:
    """Return ``Verdict.BAD`` only if no choice of residues covers; else ``UNKNOWN``.

    Two arguments, each sound on its own:

    * density: the classes cover at most ``sum M/m_i`` residues mod ``M``;
    * prime layers: for a prime ``p | M`` the integers ``x = t + p*y`` with ``t``
      fixed form a copy of Z on which a class with ``p | m`` becomes a class
      mod ``m/p`` (or is empty) and a class with ``p`` not dividing ``m`` keeps
      modulus ``m``.  Every class with ``p | m`` lands in exactly one layer, so
      if each way of distributing them over the ``p`` layers leaves some layer
      whose list is bad, the whole list is bad.

    Layer lists may repeat moduli or contain 1; they are judged recursively.
    ``budget`` bounds the number of sub-lists examined; when it runs out the
    answer is ``UNKNOWN``.
    """
    moduli = candidate.moduli if isinstance(candidate, ModuliCandidate) else tuple(candidate)
    memo: dict[tuple[int, ...], bool] = {}
    bad = _is_bad(tuple(sorted(moduli)), memo, _Budget(budget))
    return Verdict.BAD if bad else Verdict.UNKNOWN


def _density_bad(moduli: tuple[int, ...]) -> bool:
    M = lcm(*moduli)
    return sum(M // m for m in moduli) < M


def _is_bad(moduli: tuple[int, ...], memo: dict, budget: _Budget) -> bool:
    if not moduli:
        return True
    if moduli[0] == 1:
        return False
    hit = memo.get(moduli)
    if hit is not None:
        return hit
    if _density_bad(moduli):
        memo[moduli] = True
        return True
    if budget.left <= 0:
        return False
    budget.left -= 1
    M = lcm(*moduli)
    result = False
    for p, _ in sorted(factorize(M), reverse=True):
        rest = tuple(m for m in moduli if m % p)
        lifted = [m // p for m in moduli if m % p == 0]
        if not _some_layering_survives(rest, lifted, p, memo, budget):
            result = True
            break
        if budget.left <= 0:
            return False
    memo[moduli] = result
    return result


def _some_layering_survives(
    rest: tuple[int, ...], lifted: list[int], p: int, memo: dict, budget: _Budget
) -> bool:
    """Is there a split of ``lifted`` into at most ``p`` layers with no layer known bad?"""
    n = len(lifted)
    if n < p and _is_bad(rest, memo, budget):
        # some layer receives none of the lifted moduli
        return False
    # set partitions in restricted-growth form; layers are interchangeable
    labels = [0] * n

    def layer_bad(members: list[int]) -> bool:
        return _is_bad(tuple(sorted(rest + tuple(members))), memo, budget)

    def assign(i: int, used: int) -> bool:
        if budget.left <= 0:
            return True
        if i == n:
            groups: list[list[int]] = [[] for _ in range(used)]
            for m, lab in zip(lifted, labels):
                groups[lab].append(m)
            return not any(layer_bad(g) for g in groups)
        for lab in range(min(used + 1, p)):
            labels[i] = lab
            if assign(i + 1, max(used, lab + 1)):
                return True
        return False

    return assign(0, 0)


# -- residue search ----------------------------------------------------------


class Symmetry(str, enum.Enum):
    NONE = "none"  # every residue tuple
    FIRST = "first"  # smallest modulus gets residue 0
    TRANSLATION = "translation"  # least translate only: one system per translation orbit


@dataclass
class SearchStats:
    nodes: int = 0
    solutions: int = 0


def residue_search(
    candidate: ModuliCandidate | Sequence[int],
    symmetry: Symmetry | str = Symmetry.FIRST,
    max_nodes: int | None = None,
    stats: SearchStats | None = None,
) -> list[CongruenceSystem]:
    """All minimal covering systems on the given (distinct) moduli, up to ``symmetry``.

    Classes are placed in increasing order of modulus.  A branch dies when the
    new class covers nothing new, when it swallows every residue private to an
    earlier class, or when the unplaced classes cannot cover the remaining
    residues even if they were disjoint.  With ``Symmetry.FIRST`` the result
    contains every system with ``r_1 = 0``; with ``Symmetry.TRANSLATION`` only
    those equal to their own least translate.

    Raises CapacityError if more than ``max_nodes`` partial systems are visited.
    """
    symmetry = Symmetry(symmetry)
    moduli = tuple(sorted(candidate.moduli if isinstance(candidate, ModuliCandidate) else candidate))
    if len(set(moduli)) != len(moduli):
        raise ValueError("residue_search expects distinct moduli")
    k = len(moduli)
    M = lcm(*moduli)
    if M > max_lcm():
        raise CapacityError(f"lcm {M} of moduli {list(moduli)} exceeds the ceiling {max_lcm()}")
    full = (1 << M) - 1
    bases = [_periodic_base(m, M) for m in moduli]
    capacity = [0] * (k + 1)
    for i in range(k - 1, -1, -1):
        capacity[i] = capacity[i + 1] + M // moduli[i]

    if symmetry is Symmetry.NONE:
        ranges = [m for m in moduli]
    elif symmetry is Symmetry.FIRST:
        ranges = [1] + list(moduli[1:])
    else:
        ranges = []
        period = 1
        for m in moduli:
            ranges.append(gcd(period, m))
            period = period * m // gcd(period, m)

    stats = stats if stats is not None else SearchStats()
    limit = max_nodes if max_nodes is not None else -1
    out: list[tuple[int, ...]] = []
    residues = [0] * k
    last = k - 1
    last_base = bases[last]
    last_m = moduli[last]
    last_range = ranges[last]

    def place(i: int, covered: int, privates: list[int]) -> None:
        stats.nodes += 1
        if stats.nodes == limit:
            raise CapacityError(f"node budget {max_nodes} exhausted on moduli {list(moduli)}")
        if i == last:
            hole = full & ~covered
            if not hole:
                return
            r = ((hole & -hole).bit_length() - 1) % last_m
            if r >= last_range:
                return
            mask = last_base << r
            if hole & ~mask:
                return
            for p in privates:
                if not p & ~mask:
                    return
            residues[i] = r
            out.append(tuple(residues))
            return
        base = bases[i]
        need_after = capacity[i + 1]
        for r in range(ranges[i]):
            mask = base << r
            fresh = mask & ~covered
            if not fresh:
                continue
            now = covered | mask
            if (full & ~now).bit_count() > need_after:
                continue
            shrunk = []
            for p in privates:
                p &= ~mask
                if not p:
                    break
                shrunk.append(p)
            else:
                shrunk.append(fresh)
                residues[i] = r
                place(i + 1, now, shrunk)

    if k == 1:
        # a single class mod m >= 2 never covers
        return []
    if capacity[0] >= M:
        place(0, 0, [])
    stats.solutions += len(out)
    return [CongruenceSystem.from_pairs(zip(res, moduli)) for res in out]


def residue_search_naive(moduli: Sequence[int]) -> list[CongruenceSystem]:
    """Every covering residue assignment, by brute force over the full product."""
    moduli = tuple(sorted(moduli))
    M = lcm(*moduli)
    full = (1 << M) - 1
    bases = [_periodic_base(m, M) for m in moduli]
    out = []
    for res in itertools.product(*(range(m) for m in moduli)):
        bits = 0
        for b, r in zip(bases, res):
            bits |= b << r
        if bits == full:
            out.append(CongruenceSystem.from_pairs(zip(res, moduli)))
    return out


# -- classification ----------------------------------------------------------


@dataclass(frozen=True)
class ClassifiedSystem:
    """One affine class: its canonical representative and delta-primitivity."""

    system: CongruenceSystem
    delta_primitive: bool

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.system.moduli


def affine_classes(moduli: Sequence[int], found: Iterable[CongruenceSystem]) -> list[CongruenceSystem]:
    """Reduce translation-reduced systems on ``moduli`` to one canonical form per affine class."""
    moduli = tuple(sorted(moduli))
    M = lcm(*moduli)
    mults = units(M)
    seen: set[tuple[int, ...]] = set()
    canon: set[tuple[int, ...]] = set()
    for system in found:
        res = least_translate(sorted(zip(system.residues, system.moduli), key=lambda rm: rm[1]))
        if res in seen:
            continue
        orbit = {least_translate([(a * r, m) for r, m in zip(res, moduli)]) for a in mults}
        seen |= orbit
        canon.add(min(orbit))
    return [CongruenceSystem.from_pairs(zip(res, moduli)) for res in sorted(canon)]


@dataclass
class CandidateOutcome:
    moduli: tuple[int, ...]
    pruned: bool
    classes: list[ClassifiedSystem]
    nodes: int
    seconds: float


def solve_candidate(
    moduli: tuple[int, ...], prune: bool = True, max_nodes: int | None = None
) -> CandidateOutcome:
    """Prune, search and reduce a single moduli list."""
    start = time.perf_counter()
    if prune and prune_bad(moduli) is Verdict.BAD:
        return CandidateOutcome(moduli, True, [], 0, time.perf_counter() - start)
    stats = SearchStats()
    found = residue_search(moduli, Symmetry.TRANSLATION, max_nodes=max_nodes, stats=stats)
    classes = [ClassifiedSystem(s, is_delta_primitive(s)) for s in affine_classes(moduli, found)]
    return CandidateOutcome(moduli, False, classes, stats.nodes, time.perf_counter() - start)


def _solve_chunk(args: tuple[list[tuple[int, ...]], bool, int | None]) -> list[CandidateOutcome]:
    chunk, prune, max_nodes = args
    return [solve_candidate(m, prune, max_nodes) for m in chunk]


@dataclass
class ClassifyConfig:
    k_min: int
    k_max: int
    min_modulus: int = 2
    prune: bool = True
    workers: int = 1
    max_nodes_per_candidate: int | None = 200_000_000
    chunk_size: int = 64


@dataclass
class ClassifyResult:
    """Classes found for each ``k`` plus bookkeeping about the candidate lists."""

    classes: list[tuple[int, ClassifiedSystem]] = field(default_factory=list)
    candidates: dict[int, int] = field(default_factory=dict)
    pruned: dict[int, int] = field(default_factory=dict)
    survivors: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)
    good: dict[int, list[tuple[int, ...]]] = field(default_factory=dict)


def admissible_candidates(k: int, min_modulus: int = 2) -> list[tuple[int, ...]]:
    """Moduli lists of size ``k`` passing the lcm-cost bound, in generation order."""
    lists = candidate_lcms(k, min_modulus)
    out = []
    for cand in enumerate_moduli_lists(lists.maximal, k, min_modulus):
        if lcm_cost(cand.lcm) <= k and not _density_bad(cand.moduli):
            out.append(cand.moduli)
    return out


def classify_detailed(
    config: ClassifyConfig, progress: Callable[[str], None] | None = None
) -> ClassifyResult:
    result = ClassifyResult()
    executor = ProcessPoolExecutor(config.workers) if config.workers > 1 else None
    try:
        for k in range(config.k_min, config.k_max + 1):
            cands = admissible_candidates(k, config.min_modulus)
            result.candidates[k] = len(cands)
            chunks = [
                (cands[i : i + config.chunk_size], config.prune, config.max_nodes_per_candidate)
                for i in range(0, len(cands), config.chunk_size)
            ]
            mapper = executor.map if executor is not None else map
            survivors, good, pruned = [], [], 0
            t0 = time.perf_counter()
            done = 0
            for outcomes in mapper(_solve_chunk, chunks):
                for oc in outcomes:
                    done += 1
                    if oc.pruned:
                        pruned += 1
                        continue
                    survivors.append(oc.moduli)
                    if oc.classes:
                        good.append(oc.moduli)
                    result.classes.extend((k, c) for c in oc.classes)
                if progress is not None:
                    progress(
                        f"k={k}: {done}/{len(cands)} candidates, {len(good)} good, "
                        f"{time.perf_counter() - t0:.1f}s"
                    )
            result.pruned[k] = pruned
            result.survivors[k] = sorted(survivors)
            result.good[k] = sorted(good)
    finally:
        if executor is not None:
            executor.shutdown()
    result.classes.sort(key=lambda kc: (kc[0], kc[1].moduli, kc[1].system.residues))
    return result


def classify(
    k_min: int,
    k_max: int,
    min_modulus: int = 2,
    *,
    prune: bool = True,
    workers: int = 1,
    progress: Callable[[str], None] | None = None,
) -> list:
    """Canonical representatives of every affine class of distinct minimal covers.

    Returns ``ClassificationRecord`` objects sorted by ``(k, moduli, residues)``.
    """
    from .catalog import ClassificationRecord

    cfg = ClassifyConfig(k_min, k_max, min_modulus, prune=prune, workers=workers)
    res = classify_detailed(cfg, progress)
    return [ClassificationRecord.from_system(c.system, c.delta_primitive) for _, c in res.classes]
