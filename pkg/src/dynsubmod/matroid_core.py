"""Fully dynamic leveled structure for one fixed MAX guess under a matroid constraint."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import PreconditionError
from .leveling import InvariantReport, LeveledInstance, PromoteResult, PromoteTag
from .oracles import MatroidOracle, SubmodularOracle
from .randomset import RandomSet

INF = math.inf


def find_min_circuit_swap(M: MatroidOracle, I: frozenset[int], e: int,
                          weights: Mapping[int, float], known_dependent: bool = False) -> int:
    """Lightest element whose removal makes ``I + e`` independent again.

    Sort ``I + e`` by decreasing weight and binary-search the shortest dependent
    prefix; its last element is the answer.  ``e`` weighs +inf unless
    ``weights`` says otherwise, so ``e`` itself only comes back when it is a loop.
    Equal weights resolve to the smallest id.  Uses ``ceil(log2(|I|+1))``
    independence queries, plus one when the full set has to be confirmed
    dependent.
    """
    if e in I:
        raise PreconditionError(f"element {e} already in I")
    order = sorted(I | {e}, key=lambda x: (-weights.get(x, INF), -x))
    lo, hi = 1, len(order)
    while lo < hi:
        mid = (lo + hi) // 2
        if M.is_independent(order[:mid]):
            lo = mid + 1
        else:
            hi = mid
    if lo == len(order) and not known_dependent and M.is_independent(order):
        raise PreconditionError("I + e is independent; there is no circuit")
    return order[lo - 1]


def promote(f: SubmodularOracle, M: MatroidOracle, I: frozenset[int], I_prime: frozenset[int],
            e: int, weights: Mapping[int, float], f_I_prime: float, lower, upper,
            tol: float = 0) -> PromoteResult:
    """Admission test of ``e`` against a level holding ``(I, I')``.

    Fails unless the marginal gain on ``I'`` lies in ``[lower, upper]``; then it
    is free when ``I + e`` stays independent, a swap of the lightest circuit
    element ê when ``2 w(ê) <= gain``, and a failure otherwise.
    """
    if e in I_prime:
        raise PreconditionError(f"element {e} already in I'")
    value = f.evaluate(I_prime | {e})
    gain = value - f_I_prime
    if tol:
        lower, upper = lower - tol, upper + tol
    if gain < lower or gain > upper:
        return PromoteResult(PromoteTag.FAIL, gain=gain, value=value)
    if M.is_independent(I | {e}):
        return PromoteResult(PromoteTag.FREE, gain=gain, value=value)
    swap = find_min_circuit_swap(M, I, e, weights, known_dependent=True)
    if swap != e and 2 * weights[swap] <= gain + tol:
        return PromoteResult(PromoteTag.SWAP, swapped=swap, gain=gain, value=value)
    return PromoteResult(PromoteTag.FAIL, gain=gain, value=value)


@dataclass
class MatroidLevel:
    R: RandomSet = field(default_factory=RandomSet)
    I: frozenset[int] = frozenset()
    I_prime: frozenset[int] = frozenset()
    chosen: int | None = None
    swapped: int | None = None
    f_I_prime: float = 0

    def clear_selection(self) -> None:
        self.chosen = self.swapped = None

    def copy(self) -> "MatroidLevel":
        return MatroidLevel(self.R.copy(), self.I, self.I_prime, self.chosen, self.swapped,
                            self.f_I_prime)


class MatroidInstance(LeveledInstance):
    """Levels for a single guess ``max_guess`` of the largest singleton value.

    Stored weights are fixed when an element becomes some level's chosen
    element; every promote check is admitted only for gains in
    ``[epsilon/(10k) * max_guess, max_guess]``.
    """

    def __init__(self, f: SubmodularOracle, M: MatroidOracle, epsilon, max_guess,
                 rng: random.Random | int | None = None, k: int | None = None,
                 float_tol: float = 0):
        self.M = M
        self.audit_M = M.handle()
        self.k = M.rank if k is None else k
        if self.k < 1:
            raise ValueError("matroid rank must be positive")
        self.epsilon = _exact(epsilon)
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        self.max_guess = _exact(max_guess)
        self.lower = self.epsilon * self.max_guess / (10 * self.k)
        self.upper = self.max_guess
        super().__init__(f, rng, float_tol)

    def _new_level(self) -> MatroidLevel:
        return MatroidLevel()

    def _promote(self, j: int, e: int, audit: bool = False) -> PromoteResult:
        lvl = self.levels[j]
        f, M = (self.audit_f, self.audit_M) if audit else (self.f, self.M)
        return promote(f, M, lvl.I, lvl.I_prime, e, self.weights, lvl.f_I_prime,
                       self.lower, self.upper, self.float_tol)

    def _select(self, ell: int, e: int, res: PromoteResult) -> None:
        prev, lvl = self.levels[ell - 1], self.levels[ell]
        self.weights[e] = res.gain
        I = prev.I | {e}
        if res.swapped is not None:
            I = I - {res.swapped}
        lvl.chosen = e
        lvl.swapped = res.swapped
        lvl.I = I
        lvl.I_prime = prev.I_prime | {e}
        lvl.f_I_prime = res.value

    def update_queries(self) -> int:
        return self.f.queries + self.M.queries

    def audit_queries(self) -> int:
        return self.audit_f.queries + self.audit_M.queries

    def level_bound(self) -> float:
        return self.k * (math.log2(self.k / self.epsilon) + 4)


def _exact(x):
    """Rationals stay exact; floats are read through their shortest decimal form."""
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, float) and math.isfinite(x):
        return Fraction(repr(x))
    return x


# -- invariant checking --------------------------------------------------------------


def check_level_invariants(inst: MatroidInstance, alive: Iterable[int] | None = None) -> InvariantReport:
    """Recompute the level invariants from first principles on the audit counters.

    Every f(I'_j) is re-evaluated, every survivor pool is re-filtered through
    promote, and ``I'_j`` is re-derived as a union.  ``alive`` (when given) is
    the caller's own record of V_t for the starter check.
    """
    f, M = inst.audit_f, inst.audit_M
    levels, T = inst.levels, inst.T
    res: dict[str, str | None] = dict.fromkeys(
        ("starter", "survivor", "independent", "weight", "terminator", "bounds"))

    L0 = levels[0]
    if alive is not None and L0.R.as_set() != frozenset(alive):
        res["starter"] = f"R_0 differs from alive set by {sorted(L0.R.as_set() ^ frozenset(alive))[:5]}"
    elif L0.I or L0.I_prime or L0.f_I_prime != 0:
        res["starter"] = "I_0 or I'_0 not empty"

    fresh = [f.evaluate(lvl.I_prime) for lvl in levels[:T + 1]]

    # independent: I_i = I_{i-1} + e_i - promote(...), independent; I'_i the union
    union: frozenset[int] = frozenset()
    for i in range(1, T + 1):
        prev, lvl = levels[i - 1], levels[i]
        e = lvl.chosen
        if e is None:
            res["independent"] = f"level {i} has no chosen element"
            break
        union = union | lvl.I
        if lvl.I_prime != union or lvl.I_prime != prev.I_prime | {e}:
            res["independent"] = f"I'_{i} is not the union of I_1..I_{i}"
            break
        if abs(lvl.f_I_prime - fresh[i]) > inst.float_tol:
            res["independent"] = f"cached f(I'_{i})={lvl.f_I_prime} but f gives {fresh[i]}"
            break
        try:
            p = promote(f, M, prev.I, prev.I_prime, e, inst.weights, fresh[i - 1],
                        inst.lower, inst.upper, inst.float_tol)
        except PreconditionError as exc:
            res["independent"] = f"level {i}: {exc}"
            break
        expected = prev.I | {e}
        if p.swapped is not None:
            expected = expected - {p.swapped}
        if not p or lvl.I != expected:
            res["independent"] = f"I_{i} != I_{i - 1} + e_{i} - promote(e_{i})"
            break
        if not M.is_independent(lvl.I):
            res["independent"] = f"I_{i} is dependent"
            break

    # weight: e_i in R_i and w(e_i) = f(I'_{i-1} + e_i) - f(I'_{i-1})
    for i in range(1, T + 1):
        lvl, prev = levels[i], levels[i - 1]
        e = lvl.chosen
        if e is None or e not in lvl.R:
            res["weight"] = f"e_{i} not in R_{i}"
            break
        gain = f.evaluate(prev.I_prime | {e}) - f.evaluate(prev.I_prime)
        w = inst.weights.get(e)
        if w is None or abs(w - gain) > inst.float_tol:
            res["weight"] = f"w(e_{i})={w} but marginal is {gain}"
            break

    # survivor: R_i = {e in R_{i-1} - e_{i-1} : promote(L_{i-1}, e) != Fail}
    for i in range(1, T + 2):
        prev = levels[i - 1]
        expected = set()
        for e in prev.R:
            if e == prev.chosen:
                continue
            try:
                ok = promote(f, M, prev.I, prev.I_prime, e, inst.weights, fresh[i - 1],
                             inst.lower, inst.upper, inst.float_tol)
            except PreconditionError:
                ok = True  # an element of I'_{i-1} sitting in R_{i-1}; flagged below
                res["survivor"] = f"element {e} of I'_{i - 1} still in R_{i - 1}"
            if ok:
                expected.add(e)
        got = levels[i].R.as_set()
        if got != expected:
            diff = sorted(got ^ expected)
            res["survivor"] = f"R_{i} differs from its filter on {diff[:5]}"
            break

    if levels[T + 1].R or levels[T + 1].chosen is not None:
        res["terminator"] = f"R_{T + 1} is not empty"

    problems = []
    if T > inst.level_bound():
        problems.append(f"T={T} exceeds k(log2(k/eps)+4)={inst.level_bound():.2f}")
    for i in range(1, T + 1):
        lvl = levels[i]
        w = inst.weights.get(lvl.chosen)
        if w is None or not (inst.lower - inst.float_tol <= w <= inst.upper + inst.float_tol):
            problems.append(f"w(e_{i})={w} outside [{inst.lower}, {inst.upper}]")
        if lvl.swapped is not None and w is not None and w < 2 * inst.weights[lvl.swapped] - inst.float_tol:
            problems.append(f"e_{i} replaced {lvl.swapped} without doubling the weight")
        if len(lvl.I) not in (len(levels[i - 1].I), len(levels[i - 1].I) + 1):
            problems.append(f"|I_{i}| jumps by more than one")
    if problems:
        res["bounds"] = problems[0]
    return InvariantReport(res)
