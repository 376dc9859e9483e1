"""Fully dynamic leveled structure for one fixed OPT guess under a cardinality constraint."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from .errors import PreconditionError
from .leveling import InvariantReport, LeveledInstance, PromoteResult, PromoteTag
from .matroid_core import _exact
from .oracles import SubmodularOracle
from .randomset import RandomSet


def _promote_card(f: SubmodularOracle, I: frozenset[int], e: int, f_I: float, tau, k: int,
                  tol: float = 0) -> PromoteResult:
    if e in I:
        raise PreconditionError(f"element {e} already in I")
    if len(I) >= k:
        return PromoteResult(PromoteTag.FAIL)
    value = f.evaluate(I | {e})
    gain = value - f_I
    tag = PromoteTag.FREE if gain >= tau - tol else PromoteTag.FAIL
    return PromoteResult(tag, gain=gain, value=value)


def promote_card(f: SubmodularOracle, I: frozenset[int], e: int, f_I: float, tau, k: int,
                 tol: float = 0) -> bool:
    """True iff ``f(I+e) - f(I) >= tau`` and ``|I| < k``; one query given cached ``f(I)``."""
    return bool(_promote_card(f, I, e, f_I, tau, k, tol))


@dataclass
class CardinalityLevel:
    R: RandomSet = field(default_factory=RandomSet)
    I: frozenset[int] = frozenset()
    chosen: int | None = None
    f_I: float = 0

    def clear_selection(self) -> None:
        self.chosen = None

    def copy(self) -> "CardinalityLevel":
        return CardinalityLevel(self.R.copy(), self.I, self.chosen, self.f_I)


class CardinalityInstance(LeveledInstance):
    """Levels for a single guess ``opt_guess``; threshold ``tau = opt_guess / 2k``."""

    def __init__(self, f: SubmodularOracle, k: int, opt_guess,
                 rng: random.Random | int | None = None, float_tol: float = 0):
        if k < 1:
            raise ValueError("k must be positive")
        self.k = k
        self.opt_guess = _exact(opt_guess)
        self.tau = self.opt_guess / (2 * k)
        super().__init__(f, rng, float_tol)

    def _new_level(self) -> CardinalityLevel:
        return CardinalityLevel()

    def _promote(self, j: int, e: int, audit: bool = False) -> PromoteResult:
        lvl = self.levels[j]
        return _promote_card(self.audit_f if audit else self.f, lvl.I, e, lvl.f_I, self.tau,
                             self.k, self.float_tol)

    def _select(self, ell: int, e: int, res: PromoteResult) -> None:
        prev, lvl = self.levels[ell - 1], self.levels[ell]
        self.weights[e] = res.gain
        lvl.chosen = e
        lvl.I = prev.I | {e}
        lvl.f_I = res.value


def check_invariants_card(inst: CardinalityInstance, alive: Iterable[int] | None = None) -> InvariantReport:
    """First-principles recomputation of the level invariants (audit counter)."""
    f = inst.audit_f
    levels, T = inst.levels, inst.T
    res: dict[str, str | None] = dict.fromkeys(
        ("starter", "survivor", "cardinality", "weight", "terminator", "bounds"))

    L0 = levels[0]
    if alive is not None and L0.R.as_set() != frozenset(alive):
        res["starter"] = "R_0 differs from the alive set"
    elif L0.I or L0.f_I != 0:
        res["starter"] = "I_0 not empty"

    fresh = [f.evaluate(lvl.I) for lvl in levels[:T + 1]]

    for i in range(1, T + 1):
        prev, lvl = levels[i - 1], levels[i]
        if lvl.chosen is None or lvl.I != prev.I | {lvl.chosen} or len(lvl.I) != i:
            res["cardinality"] = f"I_{i} != I_{i - 1} + e_{i}"
            break
        if abs(lvl.f_I - fresh[i]) > inst.float_tol:
            res["cardinality"] = f"cached f(I_{i})={lvl.f_I} but f gives {fresh[i]}"
            break

    for i in range(1, T + 1):
        prev, lvl = levels[i - 1], levels[i]
        e = lvl.chosen
        if e is None or e not in lvl.R:
            res["weight"] = f"e_{i} not in R_{i}"
            break
        if e in prev.I or not _promote_card(f, prev.I, e, fresh[i - 1], inst.tau, inst.k, inst.float_tol):
            res["weight"] = f"e_{i} is not promoting for level {i - 1}"
            break

    for i in range(1, T + 2):
        prev = levels[i - 1]
        expected = set()
        for e in prev.R:
            if e == prev.chosen:
                continue
            if e in prev.I:
                res["survivor"] = f"element {e} of I_{i - 1} still in R_{i - 1}"
                continue
            if _promote_card(f, prev.I, e, fresh[i - 1], inst.tau, inst.k, inst.float_tol):
                expected.add(e)
        if levels[i].R.as_set() != expected:
            diff = sorted(levels[i].R.as_set() ^ expected)
            res["survivor"] = f"R_{i} differs from its filter on {diff[:5]}"
            break

    if levels[T + 1].R or levels[T + 1].chosen is not None:
        res["terminator"] = f"R_{T + 1} is not empty"
    if T > inst.k:
        res["bounds"] = f"T={T} exceeds k={inst.k}"
    return InvariantReport(res)
