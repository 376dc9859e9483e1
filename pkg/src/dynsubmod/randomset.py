from __future__ import annotations

import random
from typing import Iterable, Iterator


class RandomSet:
    """Set with O(1) add/remove/contains and uniform sampling.

    Members live in a dense list; a dict maps each member to its slot so
    removal can swap the last member into the hole.
    """

    __slots__ = ("_items", "_pos")

    def __init__(self, items: Iterable[int] = ()):
        self._items: list[int] = []
        self._pos: dict[int, int] = {}
        for x in items:
            self.add(x)

    def add(self, x: int) -> bool:
        if x in self._pos:
            return False
        self._pos[x] = len(self._items)
        self._items.append(x)
        return True

    def remove(self, x: int) -> None:
        i = self._pos.pop(x)
        last = self._items.pop()
        if last != x:
            self._items[i] = last
            self._pos[last] = i

    def discard(self, x: int) -> bool:
        if x not in self._pos:
            return False
        self.remove(x)
        return True

    def sample(self, rng: random.Random) -> int:
        if not self._items:
            raise IndexError("sample from an empty RandomSet")
        return self._items[rng.randrange(len(self._items))]

    def permuted(self, rng: random.Random) -> Iterator[int]:
        """Members in uniformly random order, drawn lazily without replacement.

        Works on a snapshot, so the set may be mutated while iterating.
        """
        pool = self._items[:]
        n = len(pool)
        for j in range(n - 1, -1, -1):
            r = rng.randrange(j + 1)
            pool[r], pool[j] = pool[j], pool[r]
            yield pool[j]

    def copy(self) -> "RandomSet":
        new = RandomSet.__new__(RandomSet)
        new._items = self._items[:]
        new._pos = dict(self._pos)
        return new

    def __contains__(self, x) -> bool:
        return x in self._pos

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[int]:
        return iter(self._items)

    def __bool__(self) -> bool:
        return bool(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, RandomSet):
            return self._pos.keys() == other._pos.keys()
        if isinstance(other, (set, frozenset)):
            return self._pos.keys() == other
        return NotImplemented

    def __repr__(self) -> str:
        return f"RandomSet({sorted(self._items)!r})"

    def as_set(self) -> frozenset[int]:
        return frozenset(self._items)
