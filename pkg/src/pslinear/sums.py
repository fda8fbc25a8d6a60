"""Triples (k, l, m) whose seven sums k, l, m, k+l, l+m, m+k, k+l+m all lie in PS(alpha)."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Tuple

from .certreal import as_alpha
from .errors import BudgetExceeded, InvalidParams, NotMember
from .pscore import member, rank, segment


@dataclass(frozen=True)
class SevenSumTriple:
    k: int
    l: int  # noqa: E741
    m: int
    witnesses: Tuple[int, ...]  # PS indices of k, l, m, k+l, l+m, m+k, k+l+m
    degenerate: bool = False

    @property
    def sums(self) -> Tuple[int, ...]:
        return seven_sums(self.k, self.l, self.m)


def seven_sums(k: int, l: int, m: int) -> Tuple[int, ...]:  # noqa: E741
    return (k, l, m, k + l, l + m, m + k, k + l + m)


def _index(alpha, limit: int, max_terms: int) -> Dict[int, int]:
    count = rank(alpha, limit)
    if count > max_terms:
        raise BudgetExceeded(f"{count} terms needed, budget is {max_terms}")
    return {t.value: t.n for t in segment(alpha, 1, count)}


def _block(args):
    members, index, lo, hi, distinct = args
    out = []
    for i in range(lo, hi):
        k = members[i]
        for j in range(i + 1 if distinct else i, len(members)):
            l = members[j]  # noqa: E741
            if k + l not in index:
                continue
            for m in members[j + 1 if distinct else j :]:
                if m + k in index and m + l in index and k + l + m in index:
                    out.append((k, l, m))
    return out


def certify(alpha, k: int, l: int, m: int) -> SevenSumTriple:  # noqa: E741
    """Seven independent certified membership checks."""
    alpha = as_alpha(alpha)
    wit = []
    for s in seven_sums(k, l, m):
        n = member(s, alpha)
        if n is None:
            raise NotMember(f"{s} is not in PS({alpha})")
        wit.append(n)
    return SevenSumTriple(k, l, m, tuple(wit), degenerate=len({k, l, m}) < 3)


def find_triples(
    alpha,
    bound: int,
    limit: Optional[int] = None,
    allow_degenerate: bool = False,
    workers: int = 1,
    max_terms: int = 5_000_000,
) -> List[SevenSumTriple]:
    """Triples with ``k < l < m <= bound`` (``k <= l <= m`` with
    ``allow_degenerate``), in ascending ``(k + l + m, k, l)`` order.

    Candidates come from a membership index of PS(alpha) up to ``3 bound``;
    every returned triple is re-checked with ``certify``.
    """
    alpha = as_alpha(alpha)
    if bound < 1:
        raise InvalidParams("bound must be positive")
    if limit is not None and limit < 1:
        raise InvalidParams("limit must be positive")
    index = _index(alpha, 3 * bound, max_terms)
    members = sorted(v for v in index if v <= bound)
    distinct = not allow_degenerate
    if workers <= 1 or len(members) < 64:
        found = _block((members, index, 0, len(members), distinct))
    else:
        step = -(-len(members) // workers)
        jobs = [(members, index, b, min(b + step, len(members)), distinct) for b in range(0, len(members), step)]
        with ProcessPoolExecutor(workers) as pool:
            found = [t for block in pool.map(_block, jobs) for t in block]
    found.sort(key=lambda t: (sum(t), t))
    if limit is not None:
        found = found[:limit]
    return [certify(alpha, *t) for t in found]


def triple_oracle(alpha, bound: int, allow_degenerate: bool = False) -> List[Tuple[int, int, int]]:
    """Every triple up to ``bound`` by direct enumeration and ``member`` calls."""
    alpha = as_alpha(alpha)
    memo: Dict[int, bool] = {}

    def inside(v):
        if v not in memo:
            memo[v] = member(v, alpha) is not None
        return memo[v]

    out = []
    for k, l, m in combinations_with_replacement(range(1, bound + 1), 3):  # noqa: E741
        if not allow_degenerate and len({k, l, m}) < 3:
            continue
        if all(inside(s) for s in seven_sums(k, l, m)):
            out.append((k, l, m))
    out.sort(key=lambda t: (sum(t), t))
    return out
