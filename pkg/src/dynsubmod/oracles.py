"""Query-counted set-function and matroid oracles.

Every call to :meth:`SubmodularOracle.evaluate` or
:meth:`MatroidOracle.is_independent` costs exactly one query on the handle it
was made through.  Handles share the (immutable) function data and own their
counter, so each consumer gets its own tally via :meth:`handle`.
"""
from __future__ import annotations

import copy
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import DomainError, PreconditionError, SpecError


class _Counted:
    ground: frozenset[int] | None

    def __init__(self, ground: Iterable[int] | None = None):
        self.ground = None if ground is None else frozenset(ground)
        self.queries = 0

    def handle(self):
        """Fresh view onto the same oracle with its own zeroed counter."""
        h = copy.copy(self)
        h.queries = 0
        return h

    def _check(self, S) -> None:
        if self.ground is not None and not self.ground.issuperset(S):
            bad = sorted(set(S) - self.ground)
            raise DomainError(f"unknown element ids {bad[:5]}")


class SubmodularOracle(_Counted):
    """Normalized monotone submodular f with a query counter."""

    def _value(self, S: frozenset[int]) -> float:
        raise NotImplementedError

    def evaluate(self, S: Iterable[int]) -> float:
        S = S if isinstance(S, (set, frozenset)) else frozenset(S)
        self._check(S)
        self.queries += 1
        if not S:
            return 0
        return self._value(S)

    def marginal_gain(self, S: Iterable[int], e: int, f_S: float | None = None) -> float:
        """f(S+e) - f(S).  Two queries, or one when the caller passes a cached f(S)."""
        S = frozenset(S)
        if e in S:
            raise PreconditionError(f"element {e} already in S")
        with_e = self.evaluate(S | {e})
        if f_S is None:
            f_S = self.evaluate(S)
        return with_e - f_S


class FunctionOracle(SubmodularOracle):
    def __init__(self, fn: Callable[[frozenset[int]], float], ground: Iterable[int] | None = None):
        super().__init__(ground)
        self.fn = fn

    def _value(self, S):
        return self.fn(S)


class ModularOracle(SubmodularOracle):
    def __init__(self, values: Mapping[int, float]):
        if any(v < 0 for v in values.values()):
            raise SpecError("modular values must be nonnegative")
        super().__init__(values.keys())
        self.values = dict(values)

    def _value(self, S):
        values = self.values
        return sum(values[e] for e in S)


@dataclass
class CoverageSpec:
    universe_size: int
    covers: dict[int, frozenset[int]]
    item_weights: Sequence[float] | None = None

    def __post_init__(self):
        if self.universe_size <= 0:
            raise SpecError("universe_size must be positive")
        self.covers = {int(e): frozenset(int(x) for x in items) for e, items in self.covers.items()}
        for e, items in self.covers.items():
            if e < 0:
                raise SpecError(f"negative element id {e}")
            if any(x < 0 or x >= self.universe_size for x in items):
                raise SpecError(f"element {e} covers an item outside the universe")
        if self.item_weights is not None:
            if len(self.item_weights) != self.universe_size:
                raise SpecError("need one weight per universe item")
            if any(w < 0 for w in self.item_weights):
                raise SpecError("item weights must be nonnegative")


class CoverageOracle(SubmodularOracle):
    """f(S) = total weight of the union of the items covered by S."""

    def __init__(self, spec: CoverageSpec):
        super().__init__(spec.covers.keys())
        self.covers = spec.covers
        self.weights = None if spec.item_weights is None else tuple(spec.item_weights)

    def _value(self, S):
        covers = self.covers
        items = set().union(*[covers[e] for e in S])
        if self.weights is None:
            return len(items)
        w = self.weights
        return sum(w[x] for x in items)


def make_coverage_oracle(spec: CoverageSpec) -> CoverageOracle:
    return CoverageOracle(spec)


# -- matroids ---------------------------------------------------------------


class MatroidOracle(_Counted):
    rank: int

    def _independent(self, S: frozenset[int]) -> bool:
        raise NotImplementedError

    def is_independent(self, S: Iterable[int]) -> bool:
        S = S if isinstance(S, (set, frozenset)) else frozenset(S)
        self._check(S)
        self.queries += 1
        return self._independent(S)


class UniformMatroid(MatroidOracle):
    def __init__(self, k: int, ground: Iterable[int] | None = None):
        if k < 1:
            raise SpecError("uniform matroid rank must be positive")
        super().__init__(ground)
        self.rank = k if ground is None else min(k, len(self.ground))

    def _independent(self, S):
        return len(S) <= self.rank


class PartitionMatroid(MatroidOracle):
    def __init__(self, blocks: Sequence[Iterable[int]], capacities: Sequence[int]):
        blocks = [frozenset(int(e) for e in b) for b in blocks]
        if len(blocks) != len(capacities):
            raise SpecError("one capacity per block")
        if any(c < 0 for c in capacities):
            raise SpecError("capacities must be nonnegative")
        block_of: dict[int, int] = {}
        for j, b in enumerate(blocks):
            for e in b:
                if e in block_of:
                    raise SpecError(f"element {e} appears in two blocks")
                block_of[e] = j
        super().__init__(block_of.keys())
        self.block_of = block_of
        self.capacities = tuple(int(c) for c in capacities)
        self.rank = sum(min(c, len(b)) for b, c in zip(blocks, self.capacities))

    def _independent(self, S):
        used = [0] * len(self.capacities)
        for e in S:
            j = self.block_of[e]
            used[j] += 1
            if used[j] > self.capacities[j]:
                return False
        return True


class GraphicMatroid(MatroidOracle):
    """Edges of a multigraph; a set is independent iff it is a forest."""

    def __init__(self, edges: Iterable[Sequence[int]]):
        ends: dict[int, tuple[Any, Any]] = {}
        for item in edges:
            if len(item) != 3:
                raise SpecError(f"graphic edge must be [u, v, id], got {item!r}")
            u, v, eid = item
            eid = int(eid)
            if eid in ends:
                raise SpecError(f"duplicate edge id {eid}")
            ends[eid] = (u, v)
        super().__init__(ends.keys())
        self.ends = ends
        self.rank = _forest_size(ends.values())

    def _independent(self, S):
        parent: dict[Any, Any] = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while x != root:
                parent[x], x = root, parent.get(x, x)
            return root

        for e in S:
            u, v = self.ends[e]
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True


def _forest_size(pairs: Iterable[tuple[Any, Any]]) -> int:
    parent: dict[Any, Any] = {}

    def find(x):
        while parent.get(x, x) != x:
            x = parent[x]
        return x

    size = 0
    for u, v in pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            size += 1
    return size


def make_matroid(kind: str, **params) -> MatroidOracle:
    """``make_matroid("uniform", k=3)``, ``("partition", blocks=..., capacities=...)``
    or ``("graphic", edges=[[u, v, id], ...])``."""
    try:
        if kind == "uniform":
            return UniformMatroid(int(params["k"]), params.get("ground"))
        if kind == "partition":
            return PartitionMatroid(params["blocks"], params["capacities"])
        if kind == "graphic":
            return GraphicMatroid(params["edges"])
    except KeyError as exc:
        raise SpecError(f"{kind} matroid missing field {exc}") from None
    raise SpecError(f"unknown matroid kind {kind!r}")


# -- JSON specs -------------------------------------------------------------

FUNCTION_TYPES = ("coverage", "modular")
MATROID_TYPES = ("uniform", "partition", "graphic")


@dataclass
class OracleBundle:
    f: SubmodularOracle
    matroid: MatroidOracle | None = None
    raw: dict[str, Any] = field(default_factory=dict)

    @property
    def ground(self) -> frozenset[int]:
        return self.f.ground if self.f.ground is not None else frozenset()


def function_from_spec(obj: Mapping[str, Any]) -> SubmodularOracle:
    kind = obj.get("type")
    if kind == "coverage":
        try:
            spec = CoverageSpec(int(obj["universe"]), {int(e): v for e, v in obj["covers"].items()},
                                obj.get("weights"))
        except KeyError as exc:
            raise SpecError(f"coverage spec missing field {exc}") from None
        return CoverageOracle(spec)
    if kind == "modular":
        return ModularOracle({int(e): v for e, v in obj["values"].items()})
    raise SpecError(f"unknown function type {kind!r}")


def matroid_from_spec(obj: Mapping[str, Any]) -> MatroidOracle:
    kind = obj.get("type")
    params = {key: value for key, value in obj.items() if key != "type"}
    return make_matroid(kind, **params)


def load_oracle_spec(source: str | Path | Mapping | list) -> OracleBundle:
    """Accepts a path or an already parsed JSON value.

    Layouts: a single function object; ``{"function": {...}, "matroid": {...}}``;
    or a list holding one function object and at most one matroid object.
    """
    if isinstance(source, (str, Path)):
        with open(source) as fh:
            obj = json.load(fh)
    else:
        obj = source
    if isinstance(obj, list):
        funcs = [o for o in obj if o.get("type") in FUNCTION_TYPES]
        mats = [o for o in obj if o.get("type") in MATROID_TYPES]
        if len(funcs) != 1 or len(mats) > 1 or len(funcs) + len(mats) != len(obj):
            raise SpecError("oracle list needs one function and at most one matroid")
        obj = {"function": funcs[0], **({"matroid": mats[0]} if mats else {})}
    elif "type" in obj:
        if obj["type"] not in FUNCTION_TYPES:
            raise SpecError("a bare oracle spec must be a function (coverage/modular)")
        obj = {"function": obj}
    if "function" not in obj:
        raise SpecError("oracle spec has no function")
    f = function_from_spec(obj["function"])
    matroid = matroid_from_spec(obj["matroid"]) if obj.get("matroid") else None
    if matroid is not None and matroid.ground is not None and f.ground is not None:
        missing = f.ground - matroid.ground
        if missing:
            raise SpecError(f"matroid ground set misses elements {sorted(missing)[:5]}")
    return OracleBundle(f, matroid, dict(obj))


def random_coverage_spec(n: int, universe: int, max_cover: int, rng: random.Random,
                         min_cover: int = 1) -> dict[str, Any]:
    covers = {}
    for e in range(n):
        size = rng.randint(min_cover, min(max_cover, universe))
        covers[str(e)] = sorted(rng.sample(range(universe), size))
    return {"type": "coverage", "universe": universe, "covers": covers}


def random_partition_spec(n: int, n_blocks: int, max_capacity: int, rng: random.Random) -> dict[str, Any]:
    blocks: list[list[int]] = [[] for _ in range(n_blocks)]
    for e in range(n):
        blocks[rng.randrange(n_blocks)].append(e)
    blocks = [b for b in blocks if b]
    caps = [rng.randint(1, max_capacity) for _ in blocks]
    return {"type": "partition", "blocks": blocks, "capacities": caps}


def random_graphic_spec(n: int, n_vertices: int, rng: random.Random) -> dict[str, Any]:
    edges = []
    for e in range(n):
        u, v = rng.sample(range(n_vertices), 2)
        edges.append([u, v, e])
    return {"type": "graphic", "edges": edges}
