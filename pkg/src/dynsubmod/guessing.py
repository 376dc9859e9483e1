"""Parallel instances over a geometric family of guesses, behind one solver facade.

Cardinality runs guess OPT as ``(1+eps)^i``; matroid runs guess MAX as ``2^i``.
An element only enters the instances whose guess interval admits its
singleton value, so every update touches a bounded number of instances.
"""
from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .cardinality_core import CardinalityInstance, check_invariants_card
from .errors import PreconditionError
from .leveling import InvariantReport, LeveledInstance
from .matroid_core import MatroidInstance, _exact, check_level_invariants
from .oracles import MatroidOracle, OracleBundle, SubmodularOracle, load_oracle_spec

OPT_MODE = "opt"
MAX_MODE = "max"


class RoutingClampWarning(UserWarning):
    pass


def _ceil_log(base: Fraction, x) -> int:
    """Smallest integer i with base**i >= x (x > 0), exactly."""
    i = math.ceil(math.log(float(x)) / math.log(float(base)))
    while base ** i < x:
        i += 1
    while base ** (i - 1) >= x:
        i -= 1
    return i


def _floor_log(base: Fraction, x) -> int:
    """Largest integer i with base**i <= x (x > 0), exactly."""
    i = math.floor(math.log(float(x)) / math.log(float(base)))
    while base ** i > x:
        i -= 1
    while base ** (i + 1) <= x:
        i += 1
    return i


def family_base(mode: str, epsilon) -> Fraction:
    return 1 + _exact(epsilon) if mode == OPT_MODE else Fraction(2)


def admission_span(mode: str, k: int, epsilon) -> Fraction:
    """Ratio between the largest and smallest guess that admits a given value."""
    return Fraction(2 * k) if mode == OPT_MODE else 10 * k / _exact(epsilon)


def max_route_width(mode: str, k: int, epsilon) -> int:
    """ceil(log_{1+eps}(2k)) + 1 for OPT guesses, ceil(log2(10k/eps)) + 1 for MAX guesses."""
    return _ceil_log(family_base(mode, epsilon), admission_span(mode, k, epsilon)) + 1


def route(value, mode: str, k: int, epsilon,
          clamp: tuple[int, int] | None = None) -> tuple[int, int] | None:
    """Closed range of guess indices whose interval admits an element of singleton ``value``.

    OPT mode admits ``g/2k <= value <= g``; MAX mode admits
    ``eps/10k * g <= value <= g``, with ``g`` the guess of index i.  Elements of
    value 0 can never be promoting and are routed nowhere (None).
    """
    if value <= 0:
        return None
    base = family_base(mode, epsilon)
    value = _exact(value)
    lo = _ceil_log(base, value)
    hi = _floor_log(base, value * admission_span(mode, k, epsilon))
    if clamp is not None:
        c_lo, c_hi = clamp
        if lo < c_lo or hi > c_hi:
            warnings.warn(f"value {value} routed to [{lo}, {hi}], clamped to [{c_lo}, {c_hi}]",
                          RoutingClampWarning, stacklevel=2)
        lo, hi = max(lo, c_lo), min(hi, c_hi)
        if lo > hi:
            return None
    return lo, hi


class GuessFamily:
    """Lazily created instances keyed by guess index."""

    def __init__(self, mode: str, k: int, epsilon,
                 factory: Callable[[Fraction, random.Random], LeveledInstance],
                 seed: int = 0, clamp: tuple[int, int] | None = None):
        if mode not in (OPT_MODE, MAX_MODE):
            raise ValueError(f"unknown guess mode {mode!r}")
        self.mode = mode
        self.k = k
        self.epsilon = _exact(epsilon)
        self.base = family_base(mode, epsilon)
        self.factory = factory
        self.seed = seed
        self.clamp = clamp
        self.instances: dict[int, LeveledInstance] = {}
        self._created: dict[int, int] = {}
        # counters of instances that emptied out and were dropped
        self.retired = {"update": 0, "audit": 0, "report": 0}

    def guess(self, i: int) -> Fraction:
        return self.base ** i

    def route(self, value) -> tuple[int, int] | None:
        return route(value, self.mode, self.k, self.epsilon, self.clamp)

    def instance(self, i: int) -> LeveledInstance:
        inst = self.instances.get(i)
        if inst is None:
            n = self._created.get(i, 0)
            self._created[i] = n + 1
            # independent stream per (seed, index, incarnation)
            inst = self.factory(self.guess(i), random.Random(f"{self.seed}:{i}:{n}"))
            self.instances[i] = inst
        return inst

    def drop_if_empty(self, i: int) -> None:
        inst = self.instances.get(i)
        if inst is not None and not len(inst.alive):
            self.retired["update"] += inst.update_queries()
            self.retired["audit"] += inst.audit_queries()
            self.retired["report"] += inst.report_queries()
            del self.instances[i]


@dataclass
class Solution:
    elements: frozenset[int]
    value: float
    index: int | None


class DynamicSolver:
    """Fully dynamic solver for an unknown OPT (cardinality) or MAX (matroid).

    ``insert``/``delete`` query ``f({e})`` once per insertion (memoized until
    deletion), route the event and apply it to every admitting instance.
    ``solution`` returns the best ``I_T`` across live instances.
    """

    def __init__(self, f: SubmodularOracle, constraint: str, epsilon, k: int | None = None,
                 matroid: MatroidOracle | None = None, seed: int = 0,
                 clamp: tuple[int, int] | None = None, float_tol: float = 0):
        self.constraint = constraint
        self.f = f
        self.route_f = f.handle()
        self.matroid = matroid
        self.float_tol = float_tol
        if constraint == "cardinality":
            if k is None or k < 1:
                raise ValueError("cardinality constraint needs k >= 1")
            mode = OPT_MODE

            def factory(guess, rng):
                return CardinalityInstance(f.handle(), k, guess, rng, float_tol)
        elif constraint == "matroid":
            if matroid is None:
                raise ValueError("matroid constraint needs a matroid oracle")
            k = matroid.rank if k is None else k
            mode = MAX_MODE

            def factory(guess, rng):
                return MatroidInstance(f.handle(), matroid.handle(), epsilon, guess, rng, k, float_tol)
        else:
            raise ValueError(f"unknown constraint {constraint!r}")
        self.k = k
        self.epsilon = _exact(epsilon)
        self.family = GuessFamily(mode, k, epsilon, factory, seed, clamp)
        self.singleton: dict[int, float] = {}
        self._routes: dict[int, list[int]] = {}
        self.last_touched: list[int] = []

    @classmethod
    def new(cls, constraint: str, k: int | None, epsilon, seed: int,
            oracle_spec: str | OracleBundle | dict, **kw) -> "DynamicSolver":
        bundle = oracle_spec if isinstance(oracle_spec, OracleBundle) else load_oracle_spec(oracle_spec)
        return cls(bundle.f, constraint, epsilon, k=k, matroid=bundle.matroid, seed=seed, **kw)

    @property
    def alive(self):
        return self.singleton.keys()

    def _admit(self, e: int) -> list[int]:
        self.singleton[e] = value = self.route_f.evaluate((e,))
        r = self.family.route(value)
        self._routes[e] = touched = [] if r is None else list(range(r[0], r[1] + 1))
        return touched

    def insert(self, e: int) -> list[int]:
        if e in self.singleton:
            raise PreconditionError(f"element {e} is already alive")
        touched = self._admit(e)
        for i in touched:
            self.family.instance(i).insert(e)
        self.last_touched = touched
        return touched

    def delete(self, e: int) -> list[int]:
        if e not in self.singleton:
            raise PreconditionError(f"element {e} is not alive")
        touched = self._routes.pop(e)
        for i in touched:
            self.family.instances[i].delete(e)
            self.family.drop_if_empty(i)
        del self.singleton[e]
        self.last_touched = touched
        return touched

    def initialize(self, V: Iterable[int]) -> None:
        """Bulk build from an empty solver: one leveling pass per instance."""
        if self.singleton:
            raise PreconditionError("initialize needs an empty solver")
        groups: dict[int, list[int]] = {}
        for e in V:
            if e in self.singleton:
                raise PreconditionError(f"element {e} listed twice")
            for i in self._admit(e):
                groups.setdefault(i, []).append(e)
        for i in sorted(groups):
            self.family.instance(i).init(groups[i])
        self.last_touched = sorted(groups)

    def solution(self) -> Solution:
        best = Solution(frozenset(), 0, None)
        for i in sorted(self.family.instances):
            S, value = self.family.instances[i].solution()
            if best.index is None or value > best.value:
                best = Solution(S, value, i)
        return best

    def check_invariants(self, indices: Iterable[int] | None = None) -> dict[int, InvariantReport]:
        insts = self.family.instances
        indices = sorted(insts) if indices is None else [i for i in indices if i in insts]
        check = check_invariants_card if self.constraint == "cardinality" else check_level_invariants
        members: dict[int, list[int]] = {i: [] for i in indices}
        for e, touched in self._routes.items():
            for i in touched:
                if i in members:
                    members[i].append(e)
        return {i: check(insts[i], members[i]) for i in indices}

    def update_queries(self) -> int:
        return (self.route_f.queries + self.family.retired["update"]
                + sum(inst.update_queries() for inst in self.family.instances.values()))

    def audit_queries(self) -> int:
        return self.family.retired["audit"] + sum(inst.audit_queries() for inst in self.family.instances.values())

    def report_queries(self) -> int:
        return self.family.retired["report"] + sum(inst.report_queries() for inst in self.family.instances.values())

    def stats(self) -> dict:
        insts = self.family.instances
        return {
            "alive": len(self.singleton),
            "live_instances": len(insts),
            "levels": {i: insts[i].T for i in sorted(insts)},
            "update_queries": self.update_queries(),
            "audit_queries": self.audit_queries(),
            "report_queries": self.report_queries(),
        }
