"""Drive the solver over a stream, check invariants, measure queries, emit JSONL."""
from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import PreconditionError
from .guessing import DynamicSolver, max_route_width
from .leveling import chi_square_uniform, rebuild_choice_counts
from .oracles import OracleBundle, load_oracle_spec
from .reference import brute_force_opt, greedy_cardinality, greedy_matroid
from .streams import INSERT, StreamEvent, generate_stream, parse_gen_spec, parse_stream

log = logging.getLogger(__name__)


class RunError(RuntimeError):
    pass


@dataclass
class RunConfig:
    constraint: str
    epsilon: float
    oracle: str | Path | OracleBundle | dict
    k: int | None = None
    seed: int = 0
    stream: str | Path | None = None
    gen: str | None = None
    events: list[StreamEvent] | None = None
    check_invariants: bool = False
    baseline: str | None = None
    baseline_every: int = 1
    out: str | Path | None = None
    float_tol: float = 0
    uniformity_trials: int = 0
    clamp: tuple[int, int] | None = None


@dataclass
class RunReport:
    steps: list[dict[str, Any]] = field(default_factory=list)
    summary: dict[str, Any] = field(default_factory=dict)

    def lines(self) -> list[str]:
        recs = [*self.steps, {"summary": self.summary}]
        return [json.dumps(r, sort_keys=True, separators=(",", ":")) for r in recs]

    def write_jsonl(self, path: str | Path) -> None:
        Path(path).write_text("".join(line + "\n" for line in self.lines()))


def _num(x):
    # JSON-safe plain number (exact rationals never reach the report)
    return x if isinstance(x, int) else float(x)


def load_events(cfg: RunConfig, bundle: OracleBundle) -> list[StreamEvent]:
    if cfg.events is not None:
        return list(cfg.events)
    if cfg.stream is not None:
        return parse_stream(cfg.stream)
    if cfg.gen is not None:
        kw = parse_gen_spec(cfg.gen)
        kw.setdefault("seed", cfg.seed)
        return generate_stream(ids=sorted(bundle.ground), **kw)
    raise RunError("need a stream file, a generator spec or explicit events")


def run(cfg: RunConfig) -> RunReport:
    bundle = cfg.oracle if isinstance(cfg.oracle, OracleBundle) else load_oracle_spec(cfg.oracle)
    if cfg.constraint == "matroid" and bundle.matroid is None:
        raise RunError("matroid constraint needs a matroid in the oracle spec")
    solver = DynamicSolver(bundle.f, cfg.constraint, cfg.epsilon, k=cfg.k, matroid=bundle.matroid,
                           seed=cfg.seed, clamp=cfg.clamp, float_tol=cfg.float_tol)
    events = load_events(cfg, bundle)
    mode = solver.family.mode
    width_cap = max_route_width(mode, solver.k, cfg.epsilon)
    factor = 2 if cfg.constraint == "cardinality" else 4
    bound = 1 / (factor + float(cfg.epsilon))
    report = RunReport()
    started = time.perf_counter()
    prev_u = prev_a = prev_r = 0
    violations = 0
    worst_ratio = None
    bound_failures = 0
    width_failures = 0
    max_T = 0

    for t, ev in enumerate(events):
        try:
            if ev.op == INSERT:
                touched = solver.insert(ev.element)
            else:
                touched = solver.delete(ev.element)
        except PreconditionError as exc:
            raise RunError(f"event {t} ({ev}): {exc}") from exc
        u = solver.update_queries()
        rec: dict[str, Any] = {
            "t": t,
            "op": ev.op,
            "element": ev.element,
            "alive": len(solver.alive),
            "touched": touched,
            "width_ok": len(touched) <= width_cap,
            "update_queries": u - prev_u,
        }
        width_failures += not rec["width_ok"]
        prev_u = u
        if cfg.check_invariants:
            reports = solver.check_invariants(touched)
            bad = {str(i): r.failures() for i, r in reports.items() if not r.ok}
            violations += len(bad)
            rec["invariants"] = bad or "pass"
        sol = solver.solution()
        levels = solver.stats()["levels"]
        max_T = max([max_T, *levels.values()])
        rec["levels"] = {str(i): T for i, T in levels.items()}
        rec["value"] = _num(sol.value)
        rec["instance"] = sol.index
        rec["solution"] = sorted(sol.elements)
        if cfg.baseline and t % cfg.baseline_every == 0:
            alive = sorted(solver.alive)
            base = _baseline(cfg.baseline, alive, bundle, cfg.constraint, solver.k)
            rec["baseline"] = _num(base)
            ratio = 1.0 if base == 0 else float(sol.value) / float(base)
            rec["ratio"] = ratio
            worst_ratio = ratio if worst_ratio is None else min(worst_ratio, ratio)
            if cfg.baseline == "exact":
                rec["bound_ok"] = (factor + cfg.epsilon) * sol.value >= base
                bound_failures += not rec["bound_ok"]
        a, r = solver.audit_queries(), solver.report_queries()
        rec["audit_queries"], rec["report_queries"] = a - prev_a, r - prev_r
        prev_a, prev_r = a, r
        report.steps.append(rec)

    per_update = [s["update_queries"] for s in report.steps]
    summary: dict[str, Any] = {
        "constraint": cfg.constraint,
        "k": solver.k,
        "epsilon": float(cfg.epsilon),
        "seed": cfg.seed,
        "events": len(events),
        "final_value": report.steps[-1]["value"] if report.steps else 0,
        "update_queries_total": sum(per_update),
        "update_queries_mean": sum(per_update) / len(per_update) if per_update else 0.0,
        "update_queries_max": max(per_update, default=0),
        "audit_queries_total": sum(s["audit_queries"] for s in report.steps),
        "report_queries_total": sum(s["report_queries"] for s in report.steps),
        "route_width_cap": width_cap,
        "route_width_failures": width_failures,
        "max_levels": max_T,
        "approx_bound": bound,
    }
    if cfg.check_invariants:
        summary["invariant_violations"] = violations
    if cfg.baseline:
        summary["baseline"] = cfg.baseline
        summary["worst_ratio"] = worst_ratio
        if cfg.baseline == "exact":
            summary["bound_failures"] = bound_failures
    if cfg.uniformity_trials:
        summary["uniformity"] = uniformity_check(solver, cfg.uniformity_trials, cfg.seed)
    report.summary = summary
    log.info("run finished: %d events in %.2fs", len(events), time.perf_counter() - started)
    if cfg.out is not None:
        report.write_jsonl(cfg.out)
    return report


def _baseline(kind: str, alive: list[int], bundle: OracleBundle, constraint: str, k: int) -> float:
    if kind == "exact":
        if constraint == "cardinality":
            return brute_force_opt(alive, bundle.f, k=k).value
        return brute_force_opt(alive, bundle.f, matroid=bundle.matroid).value
    if kind == "greedy":
        if constraint == "cardinality":
            return greedy_cardinality(alive, bundle.f, k).value
        return greedy_matroid(alive, bundle.f, bundle.matroid).value
    raise RunError(f"unknown baseline {kind!r}")


def uniformity_check(solver: DynamicSolver, trials: int, seed: int = 0) -> dict[str, Any]:
    """Chi-square test of the element chosen when level 1 of the largest pool is rebuilt."""
    candidates = [(len(inst.levels[1].R), i) for i, inst in solver.family.instances.items()
                  if inst.T >= 1 and len(inst.levels[1].R) >= 2]
    if not candidates:
        return {"skipped": "no instance has a level-1 pool with two or more elements"}
    size, index = max(candidates)
    inst = solver.family.instances[index]
    counts = rebuild_choice_counts(inst, 1, trials, seed)
    stat, p = chi_square_uniform(counts, inst.levels[1].R)
    return {"instance": index, "level": 1, "pool_size": size, "trials": trials,
            "chi2": stat, "p_value": p, "pass": p >= 1e-3}
