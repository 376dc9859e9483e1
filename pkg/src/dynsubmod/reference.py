"""Exact and greedy baselines used to judge the dynamic solver."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .oracles import MatroidOracle, SubmodularOracle

BRUTE_FORCE_LIMIT = 20


@dataclass
class BaselineResult:
    set: frozenset[int]
    value: float
    queries_used: int


def brute_force_opt(V: Iterable[int], f: SubmodularOracle, k: int | None = None,
                    matroid: MatroidOracle | None = None) -> BaselineResult:
    """Exact maximizer by enumeration: all subsets of size <= k, or all independent sets.

    Pass exactly one of ``k`` (cardinality) and ``matroid``.
    """
    V = sorted(set(V))
    if (k is None) == (matroid is None):
        raise ValueError("pass exactly one of k and matroid")
    if len(V) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"brute force over {len(V)} elements refused (limit {BRUTE_FORCE_LIMIT}); "
                         "use greedy_cardinality/greedy_matroid for larger ground sets")
    f = f.handle()
    best_set: frozenset[int] = frozenset()
    best = f.evaluate(best_set)
    if k is not None:
        for size in range(1, min(k, len(V)) + 1):
            for S in combinations(V, size):
                value = f.evaluate(S)
                if value > best:
                    best, best_set = value, frozenset(S)
        return BaselineResult(best_set, best, f.queries)

    M = matroid.handle()

    # depth-first over independent sets, each visited once in increasing id order
    def extend(S: tuple[int, ...], start: int):
        nonlocal best, best_set
        for j in range(start, len(V)):
            T = S + (V[j],)
            if not M.is_independent(T):
                continue
            value = f.evaluate(T)
            if value > best:
                best, best_set = value, frozenset(T)
            extend(T, j + 1)

    extend((), 0)
    return BaselineResult(best_set, best, f.queries + M.queries)


def greedy_cardinality(V: Iterable[int], f: SubmodularOracle, k: int) -> BaselineResult:
    """k rounds of best-marginal selection; stops early when no element adds value."""
    f = f.handle()
    remaining = sorted(set(V))
    S: frozenset[int] = frozenset()
    f_S = f.evaluate(S)
    for _ in range(k):
        best_gain, best_e, best_val = 0, None, f_S
        for e in remaining:
            value = f.evaluate(S | {e})
            if value - f_S > best_gain:
                best_gain, best_e, best_val = value - f_S, e, value
        if best_e is None:
            break
        S = S | {best_e}
        f_S = best_val
        remaining.remove(best_e)
    return BaselineResult(S, f_S, f.queries)


def greedy_matroid(V: Iterable[int], f: SubmodularOracle, M: MatroidOracle) -> BaselineResult:
    """Best-marginal element that keeps S independent, until none adds value."""
    f, M = f.handle(), M.handle()
    remaining = sorted(set(V))
    S: frozenset[int] = frozenset()
    f_S = f.evaluate(S)
    while remaining:
        feasible = [e for e in remaining if M.is_independent(S | {e})]
        remaining = feasible
        best_gain, best_e, best_val = 0, None, f_S
        for e in feasible:
            value = f.evaluate(S | {e})
            if value - f_S > best_gain:
                best_gain, best_e, best_val = value - f_S, e, value
        if best_e is None:
            break
        S = S | {best_e}
        f_S = best_val
        remaining.remove(best_e)
    return BaselineResult(S, f_S, f.queries + M.queries)
