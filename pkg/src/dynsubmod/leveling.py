"""Randomized leveled structure shared by the matroid and cardinality cores.

Level 0 holds the alive set.  Level ``i >= 1`` holds its survivor pool ``R``
and, once built, the sampled element ``chosen`` plus whatever partial solution
the subclass keeps.  ``levels`` always has indices ``0..T+1`` with
``levels[T+1].R`` empty.
"""
from __future__ import annotations

import copy
import enum
import random
from collections import Counter
from dataclasses import dataclass
from typing import Callable

from .errors import PreconditionError
from .oracles import SubmodularOracle
from .randomset import RandomSet


class PromoteTag(enum.Enum):
    FAIL = "fail"
    FREE = "free"
    SWAP = "swap"


@dataclass(frozen=True)
class PromoteResult:
    tag: PromoteTag
    swapped: int | None = None
    # gain = f(S + e) - f(S) and value = f(S + e) for the set S the test ran against
    gain: float = 0
    value: float = 0

    def __bool__(self) -> bool:
        return self.tag is not PromoteTag.FAIL


@dataclass
class InvariantReport:
    results: dict[str, str | None]

    @property
    def ok(self) -> bool:
        return all(v is None for v in self.results.values())

    def failures(self) -> dict[str, str]:
        return {k: v for k, v in self.results.items() if v is not None}


# hook(instance, element, start_level, frontier, z): one call per element
# placed by construct_level; z is the highest level index whose R received it
PlacementHook = Callable[["LeveledInstance", int, int, int, int], None]


class LeveledInstance:
    """Insert/delete/rebuild logic common to both constraint types.

    Subclasses provide ``_new_level``, ``_promote(j, e)`` (test ``e`` against
    level ``j``) and ``_select(ell, e, result)`` (make ``e`` the chosen element
    of level ``ell``).
    """

    def __init__(self, f: SubmodularOracle, rng: random.Random | int | None = None,
                 float_tol: float = 0):
        self.f = f
        self.report_f = f.handle()
        self.audit_f = f.handle()
        self.rng = rng if isinstance(rng, random.Random) else random.Random(rng)
        self.float_tol = float_tol
        self.weights: dict[int, float] = {}
        self.levels = [self._new_level(), self._new_level()]
        self.on_placement: PlacementHook | None = None
        self.version = 0
        self._solution_cache: tuple[int, frozenset[int], float] | None = None

    # -- subclass hooks -------------------------------------------------------

    def _new_level(self):
        raise NotImplementedError

    def _promote(self, j: int, e: int, audit: bool = False) -> PromoteResult:
        raise NotImplementedError

    def _select(self, ell: int, e: int, res: PromoteResult) -> None:
        raise NotImplementedError

    # -- state ------------------------------------------------------------------

    @property
    def T(self) -> int:
        return len(self.levels) - 2

    @property
    def alive(self) -> RandomSet:
        return self.levels[0].R

    def update_queries(self) -> int:
        return self.f.queries

    def audit_queries(self) -> int:
        return self.audit_f.queries

    def report_queries(self) -> int:
        return self.report_f.queries

    def clone(self, rng: random.Random | int | None = None) -> "LeveledInstance":
        """Copy of the structure sharing the oracle handles."""
        new = copy.copy(self)
        new.levels = [lvl.copy() for lvl in self.levels]
        new.weights = dict(self.weights)
        new.rng = rng if isinstance(rng, random.Random) else random.Random(rng)
        new._solution_cache = None
        return new

    # -- algorithms --------------------------------------------------------------

    def init(self, V) -> int:
        if len(self.alive) or self.T:
            raise PreconditionError("init on a non-empty instance")
        levels = self.levels
        for v in V:
            levels[0].R.add(v)
        for e in levels[0].R:
            if self._promote(0, e):
                levels[1].R.add(e)
        return self.construct_level(1)

    def construct_level(self, i: int) -> int:
        """Rebuild levels ``i..`` from ``R_i`` and the levels below it; returns T."""
        levels = self.levels
        del levels[i + 1:]
        levels[i].clear_selection()
        self.version += 1
        ell = i
        hook = self.on_placement
        for e in levels[i].R.permuted(self.rng):
            frontier = ell
            res = self._promote(ell - 1, e)
            if res:
                self._select(ell, e, res)
                levels.append(self._new_level())
                z = ell
                ell += 1
            else:
                z = self._lowest_failing(e, i, ell - 1)
            for r in range(i + 1, z + 1):
                levels[r].R.add(e)
            if hook is not None:
                hook(self, e, i, frontier, z)
        return ell - 1

    def _lowest_failing(self, e: int, lo: int, hi: int) -> int:
        # promote is known to fail at hi; monotone in the level index
        if hi < lo:
            return lo
        while lo < hi:
            mid = (lo + hi) // 2
            if self._promote(mid, e):
                lo = mid + 1
            else:
                hi = mid
        return lo

    def insert(self, v: int) -> None:
        levels = self.levels
        if v in levels[0].R:
            raise PreconditionError(f"element {v} is already alive")
        levels[0].R.add(v)
        self.version += 1
        for i in range(1, self.T + 2):
            res = self._promote(i - 1, v)
            if not res:
                break
            R = levels[i].R
            R.add(v)
            if self.rng.randrange(len(R)) == 0:
                del levels[i + 1:]
                self._select(i, v, res)
                nxt = self._new_level()
                levels.append(nxt)
                for e in R:
                    if e != v and self._promote(i, e):
                        nxt.R.add(e)
                self.construct_level(i + 1)
                break

    def delete(self, v: int) -> None:
        levels = self.levels
        if v not in levels[0].R:
            raise PreconditionError(f"element {v} is not alive")
        levels[0].R.remove(v)
        self.version += 1
        for i in range(1, self.T + 1):
            lvl = levels[i]
            if v not in lvl.R:
                break
            lvl.R.remove(v)
            if lvl.chosen == v:
                self.construct_level(i)
                break
        self.weights.pop(v, None)

    def solution(self) -> tuple[frozenset[int], float]:
        """(I_T, f(I_T)); the evaluation is billed to the reporting counter."""
        cached = self._solution_cache
        if cached is not None and cached[0] == self.version:
            return cached[1], cached[2]
        S = self.levels[self.T].I
        value = self.report_f.evaluate(S)
        self._solution_cache = (self.version, S, value)
        return S, value

    def promote_profile(self, e: int, upto: int | None = None) -> list[bool]:
        """Promote outcome of ``e`` at every level ``0..upto``, on the audit counter."""
        upto = self.T if upto is None else upto
        return [bool(self._promote(j, e, audit=True)) for j in range(upto + 1)]


def rebuild_choice_counts(instance: LeveledInstance, level: int, trials: int,
                          seed: int = 0) -> Counter:
    """Rebuild ``level`` on fresh clones ``trials`` times; tally the chosen element."""
    counts: Counter = Counter()
    for t in range(trials):
        twin = instance.clone(random.Random(f"{seed}:{t}"))
        twin.construct_level(level)
        counts[twin.levels[level].chosen] += 1
    return counts


def chi_square_uniform(counts: Counter, support) -> tuple[float, float]:
    """Pearson chi-square statistic and p-value of ``counts`` against uniform on ``support``."""
    from scipy.stats import chisquare

    observed = [counts.get(x, 0) for x in sorted(support)]
    if sum(counts.values()) != sum(observed):
        raise ValueError("counts contain elements outside the support")
    stat, p = chisquare(observed)
    return float(stat), float(p)
