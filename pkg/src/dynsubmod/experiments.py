"""Reusable experiment drivers for the acceptance suite and the scripts."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .guessing import DynamicSolver, max_route_width
from .matroid_core import _exact
from .oracles import (OracleBundle, load_oracle_spec, random_coverage_spec, random_graphic_spec,
                      random_partition_spec)
from .randomset import RandomSet
from .reference import brute_force_opt
from .streams import INSERT, StreamEvent, generate_stream


def random_bundle(rng: random.Random, n: int, matroid: str | None = None, rank: int = 3,
                  universe: int | None = None, max_cover: int = 4, min_cover: int = 1) -> OracleBundle:
    """Coverage oracle on ids ``0..n-1``, optionally with a random matroid of rank <= ``rank``."""
    spec: dict = {"function": random_coverage_spec(n, universe or 2 * n, max_cover, rng, min_cover)}
    if matroid == "uniform":
        spec["matroid"] = {"type": "uniform", "k": rank}
    elif matroid == "partition":
        # keep the rank (sum of capacities) at most ``rank``
        m = random_partition_spec(n, rng.randint(1, rank), rank, rng)
        if sum(m["capacities"]) > rank:
            m["capacities"] = [1] * len(m["capacities"])
        spec["matroid"] = m
    elif matroid == "graphic":
        # a graph on rank + 1 vertices has rank at most ``rank``
        spec["matroid"] = random_graphic_spec(n, rank + 1, rng)
    elif matroid is not None:
        raise ValueError(f"unknown matroid family {matroid!r}")
    return load_oracle_spec(spec)


@dataclass
class ShadowLog:
    """Placements seen through the placement hook, checked against a linear scan."""
    placements: int = 0
    mismatches: list[tuple] = field(default_factory=list)

    def hook(self, inst, e, start, frontier, z):
        self.placements += 1
        profile = inst.promote_profile(e, frontier - 1)
        z_lin = start
        while z_lin <= frontier - 1 and profile[z_lin]:
            z_lin += 1
        monotone = all(profile[:start]) and all(
            not later or earlier for earlier, later in zip(profile, profile[1:]))
        if z_lin != z or not monotone:
            self.mismatches.append((e, start, frontier, z, z_lin, profile))


def attach_shadow(solver: DynamicSolver, log: ShadowLog) -> None:
    """Install ``log.hook`` on every instance the solver creates from now on."""
    family = solver.family
    factory = family.factory

    def wrapped(guess, rng):
        inst = factory(guess, rng)
        inst.on_placement = log.hook
        return inst

    family.factory = wrapped
    for inst in family.instances.values():
        inst.on_placement = log.hook


@dataclass
class StreamOutcome:
    steps: int = 0
    bound_failures: list[tuple] = field(default_factory=list)
    worst_ratio: float = 1.0
    level_failures: list[tuple] = field(default_factory=list)
    width_failures: list[tuple] = field(default_factory=list)
    max_levels: int = 0
    shadow: ShadowLog = field(default_factory=ShadowLog)


def approximation_stream(bundle: OracleBundle, constraint: str, k: int, epsilon,
                         events: list[StreamEvent], seed: int) -> StreamOutcome:
    """Replay ``events``; after each compare the best solution with brute force.

    Also records level-count bounds, routing widths and shadow-scan placements.
    """
    epsilon = _exact(epsilon)
    solver = DynamicSolver(bundle.f, constraint, epsilon, k=k, matroid=bundle.matroid, seed=seed)
    out = StreamOutcome()
    attach_shadow(solver, out.shadow)
    factor = 2 if constraint == "cardinality" else 4
    width = max_route_width(solver.family.mode, solver.k, epsilon)
    memo: dict[frozenset, float] = {}
    for t, ev in enumerate(events):
        touched = solver.insert(ev.element) if ev.op == INSERT else solver.delete(ev.element)
        if len(touched) > width:
            out.width_failures.append((t, len(touched), width))
        alive = frozenset(solver.alive)
        if alive not in memo:
            if constraint == "cardinality":
                memo[alive] = brute_force_opt(alive, bundle.f, k=k).value
            else:
                memo[alive] = brute_force_opt(alive, bundle.f, matroid=bundle.matroid).value
        opt = memo[alive]
        value = solver.solution().value
        if (factor + epsilon) * value < opt:
            out.bound_failures.append((t, value, opt))
        if opt:
            out.worst_ratio = min(out.worst_ratio, float(Fraction(value) / Fraction(opt)))
        for i, inst in solver.family.instances.items():
            out.max_levels = max(out.max_levels, inst.T)
            cap = inst.k if constraint == "cardinality" else inst.level_bound()
            if inst.T > cap:
                out.level_failures.append((t, i, inst.T, cap))
        out.steps += 1
    return out


def random_events(rng: random.Random, n: int) -> list[StreamEvent]:
    """A mixed bag of small streams over ids ``0..n-1``."""
    ids = list(range(n))
    kind = rng.choice(["insert_only", "sliding_window", "random_mix", "random_mix"])
    seed = rng.randrange(2**31)
    if kind == "insert_only":
        return generate_stream(n, n, "insert_only", seed, ids=ids)
    if kind == "sliding_window":
        return generate_stream(n, 3 * n, "sliding_window", seed, window=rng.randint(2, n), ids=ids)
    return generate_stream(n, 3 * n, "random_mix", seed, p_delete=rng.choice([0.2, 0.35, 0.5]), ids=ids)


def query_scaling_trial(n: int, seed: int, constraint: str = "cardinality", k: int = 5,
                        epsilon=1, window: int = 200, p_delete: float = 0.5,
                        max_cover: int = 6) -> dict:
    """Mean update queries over ``window`` random updates at steady state.

    Half of the ``n`` elements are loaded through the bulk initializer first;
    those queries are not part of the measurement.  Light deletes (the element
    sits in no pool above level 0 of any instance) are tallied separately.
    Cover sizes start at 0, so some elements are worthless; routing sends every
    other element into R_1 of each instance it reaches, so these are the light ones.
    """
    rng = random.Random(f"scaling:{constraint}:{n}:{seed}")
    bundle = random_bundle(rng, n, "uniform" if constraint == "matroid" else None, rank=k,
                           universe=n, max_cover=max_cover, min_cover=0)
    solver = DynamicSolver(bundle.f, constraint, epsilon, k=k, matroid=bundle.matroid, seed=seed)
    ids = list(range(n))
    rng.shuffle(ids)
    alive, dead = RandomSet(ids[: n // 2]), RandomSet(ids[n // 2:])
    solver.initialize(list(alive))
    start = solver.update_queries()
    light = light_cost = 0
    for _ in range(window):
        if rng.random() < p_delete:
            e = alive.sample(rng)
            alive.remove(e)
            dead.add(e)
            is_light = all(e not in inst.levels[1].R for inst in solver.family.instances.values())
            before = solver.update_queries()
            solver.delete(e)
            if is_light:
                light += 1
                light_cost += solver.update_queries() - before
        else:
            e = dead.sample(rng)
            dead.remove(e)
            alive.add(e)
            solver.insert(e)
    return {"n": n, "seed": seed, "constraint": constraint,
            "mean_queries": (solver.update_queries() - start) / window,
            "light_deletes": light, "light_delete_queries": light_cost}
