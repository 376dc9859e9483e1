"""Insert/delete event streams: text format, validation and generators."""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import SpecError, StreamValidationError

INSERT = "insert"
DELETE = "delete"

_LINE = re.compile(r"^([+-])\s*(\d+)$")


@dataclass(frozen=True)
class StreamEvent:
    op: str
    element: int
    t: int | None = None

    def __str__(self) -> str:
        return f"{'+' if self.op == INSERT else '-'} {self.element}"


def validate(events: Sequence[StreamEvent]) -> None:
    """Raise unless every delete hits an alive element and every insert a dead one."""
    alive: set[int] = set()
    for pos, ev in enumerate(events):
        if ev.op == INSERT:
            if ev.element in alive:
                raise StreamValidationError(f"insert of alive element {ev.element}", pos)
            alive.add(ev.element)
        elif ev.op == DELETE:
            if ev.element not in alive:
                raise StreamValidationError(f"delete of dead element {ev.element}", pos)
            alive.remove(ev.element)
        else:
            raise StreamValidationError(f"unknown op {ev.op!r}", pos)


def parse_stream_text(text: str) -> list[StreamEvent]:
    events = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if m is None:
            raise SpecError(f"line {lineno}: expected '+ <id>' or '- <id>', got {raw.strip()!r}")
        events.append(StreamEvent(INSERT if m.group(1) == "+" else DELETE, int(m.group(2)), len(events)))
    validate(events)
    return events


def parse_stream(path: str | Path) -> list[StreamEvent]:
    with open(path, newline="") as fh:
        return parse_stream_text(fh.read())


def format_stream(events: Iterable[StreamEvent]) -> str:
    return "".join(f"{ev}\n" for ev in events)


def generate_stream(n: int, ops: int, distribution: str = "random_mix", seed: int = 0,
                    window: int | None = None, p_delete: float = 0.5,
                    ids: Sequence[int] | None = None) -> list[StreamEvent]:
    """Reproducible valid stream over ``ids`` (default ``1..n``).

    ``insert_only`` inserts ``min(n, ops)`` elements in seeded random order;
    ``sliding_window`` keeps the ``window`` most recent elements alive, cycling
    through ids in order; ``random_mix`` deletes a random alive element with
    probability ``p_delete`` and otherwise inserts a random dead one.
    """
    if n <= 0 or ops < 0:
        raise SpecError("n must be positive and ops nonnegative")
    ids = list(range(1, n + 1)) if ids is None else list(ids)[:n]
    if len(ids) < n:
        raise SpecError(f"need {n} ids, got {len(ids)}")
    rng = random.Random(seed)
    events: list[StreamEvent] = []

    def emit(op, e):
        events.append(StreamEvent(op, e, len(events)))

    if distribution == "insert_only":
        order = ids[:]
        rng.shuffle(order)
        for e in order[:ops]:
            emit(INSERT, e)
    elif distribution == "sliding_window":
        if window is None or window <= 0 or window >= n + 1:
            raise SpecError("sliding_window needs 0 < window <= n")
        live: list[int] = []
        nxt = 0
        while len(events) < ops:
            if len(live) == window:
                emit(DELETE, live.pop(0))
            else:
                e = ids[nxt % n]
                nxt += 1
                live.append(e)
                emit(INSERT, e)
    elif distribution == "random_mix":
        if not 0 <= p_delete < 1:
            raise SpecError("p_delete must lie in [0, 1)")
        from .randomset import RandomSet

        alive, dead = RandomSet(), RandomSet(ids)
        while len(events) < ops:
            if alive and (not dead or rng.random() < p_delete):
                e = alive.sample(rng)
                alive.remove(e)
                dead.add(e)
                emit(DELETE, e)
            else:
                e = dead.sample(rng)
                dead.remove(e)
                alive.add(e)
                emit(INSERT, e)
    else:
        raise SpecError(f"unknown distribution {distribution!r}")
    return events


def parse_gen_spec(spec: str) -> dict:
    """``"random_mix:n=50,ops=400,p=0.3"`` -> keyword arguments for :func:`generate_stream`."""
    kind, _, rest = spec.partition(":")
    kw: dict = {"distribution": kind.strip()}
    names = {"n": "n", "ops": "ops", "w": "window", "window": "window", "p": "p_delete",
             "p_delete": "p_delete", "seed": "seed"}
    for part in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = part.partition("=")
        if not eq or key.strip() not in names:
            raise SpecError(f"bad generator field {part!r}")
        name = names[key.strip()]
        kw[name] = float(value) if name == "p_delete" else int(value)
    if "n" not in kw:
        raise SpecError("generator spec needs n=")
    kw.setdefault("ops", kw["n"])
    return kw
