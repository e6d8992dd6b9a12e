"""Finite permutation groups: closure, Cayley table, conjugacy classes,
irrep dimensions and identification of small groups by invariants."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

__all__ = [
    "SitePermutation",
    "GroupInfo",
    "GroupError",
    "RunawayClosureError",
    "IrrepAmbiguityError",
    "build_group",
    "irrep_dimensions",
    "identify_group",
    "MAX_GROUP_ORDER",
]

MAX_GROUP_ORDER = 1024
MAX_IRREP_ORDER = 16
MAX_CATALOG_ORDER = 8


class GroupError(ValueError):
    pass


class RunawayClosureError(GroupError):
    """Closing the input under composition produced far more elements than given."""


class IrrepAmbiguityError(GroupError):
    def __init__(self, order: int, n_classes: int, candidates):
        self.candidates = [tuple(c) for c in candidates]
        super().__init__(
            f"irrep dimensions of a group of order {order} with {n_classes} classes "
            f"are not determined uniquely: {self.candidates}"
        )


@dataclass(frozen=True, order=True)
class SitePermutation:
    """``perm[i]`` is the image of site ``i``.

    The matching matrix has ``U[perm[i], i] = 1``, so composition
    ``p * q`` (apply ``q`` first) corresponds to the matrix product ``U_p @ U_q``.
    """

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(x) for x in self.perm)
        if sorted(perm) != list(range(len(perm))):
            raise ValueError(f"not a permutation of 0..{len(perm) - 1}: {perm}")
        object.__setattr__(self, "perm", perm)

    @classmethod
    def identity(cls, n: int) -> "SitePermutation":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __len__(self):
        return len(self.perm)

    def __mul__(self, other: "SitePermutation") -> "SitePermutation":
        if other.n != self.n:
            raise ValueError("permutations act on different site counts")
        return SitePermutation(tuple(self.perm[i] for i in other.perm))

    def inverse(self) -> "SitePermutation":
        inv = [0] * self.n
        for i, p in enumerate(self.perm):
            inv[p] = i
        return SitePermutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.perm))

    def order(self) -> int:
        seen = [False] * self.n
        result = 1
        for start in range(self.n):
            length = 0
            k = start
            while not seen[k]:
                seen[k] = True
                k = self.perm[k]
                length += 1
            if length:
                result = math.lcm(result, length)
        return result

    def matrix(self):
        import numpy as np

        u = np.zeros((self.n, self.n))
        u[list(self.perm), list(range(self.n))] = 1.0
        return u

    def __str__(self):
        return "(" + " ".join(str(p) for p in self.perm) + ")"


@dataclass(frozen=True)
class GroupInfo:
    elements: tuple[SitePermutation, ...]
    table: tuple[tuple[int, ...], ...]
    classes: tuple[tuple[int, ...], ...]
    element_orders: tuple[int, ...]
    irrep_dims: tuple[int, ...] | None
    name: str
    closure_completed: bool = False

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in range(len(t)) for b in range(a))

    def identity_index(self) -> int:
        for k, g in enumerate(self.elements):
            if g.is_identity():
                return k
        raise GroupError("group has no identity")


def _closure(gens: Sequence[SitePermutation], limit: int) -> list[SitePermutation]:
    n = gens[0].n
    elements = set(gens) | {SitePermutation.identity(n)}
    frontier = list(elements)
    while frontier:
        fresh = []
        for a in frontier:
            for b in list(elements):
                for c in (a * b, b * a):
                    if c not in elements:
                        elements.add(c)
                        fresh.append(c)
                        if len(elements) > limit:
                            raise RunawayClosureError(
                                f"closure exceeded {limit} elements; input is far from a group"
                            )
        frontier = fresh
    return sorted(elements)


def build_group(perms: Iterable[SitePermutation]) -> GroupInfo:
    """Group on the given permutations, completing the closure if needed."""
    given = sorted(set(perms))
    if not given:
        raise GroupError("empty permutation list")
    if len({p.n for p in given}) != 1:
        raise GroupError("permutations act on different site counts")
    limit = min(max(2 * len(given), 1), MAX_GROUP_ORDER)
    # identity is always admitted even when it was not given
    if not any(p.is_identity() for p in given):
        limit = max(limit, len(given) + 1)
    elements = _closure(given, limit)
    completed = elements != given

    index = {g: k for k, g in enumerate(elements)}
    table = tuple(tuple(index[a * b] for b in elements) for a in elements)

    inverse = [index[g.inverse()] for g in elements]
    assigned = [False] * len(elements)
    classes = []
    for x in range(len(elements)):
        if assigned[x]:
            continue
        cls = sorted({table[table[g][x]][inverse[g]] for g in range(len(elements))})
        for k in cls:
            assigned[k] = True
        classes.append(tuple(cls))

    orders = tuple(sorted(g.order() for g in elements))
    info = GroupInfo(
        elements=tuple(elements),
        table=table,
        classes=tuple(classes),
        element_orders=orders,
        irrep_dims=None,
        name="unidentified",
        closure_completed=completed,
    )
    dims = irrep_dimensions(info) if info.order <= MAX_IRREP_ORDER else None
    return GroupInfo(
        elements=info.elements,
        table=table,
        classes=info.classes,
        element_orders=orders,
        irrep_dims=dims,
        name=identify_group(info),
        closure_completed=completed,
    )


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _square_partitions(total: int, count: int, parts: list[int], start: int = 0):
    """Nondecreasing sequences of ``count`` entries of ``parts`` whose squares sum to ``total``."""
    if count == 0:
        if total == 0:
            yield ()
        return
    for k in range(start, len(parts)):
        d = parts[k]
        if d * d * count > total:
            break
        for rest in _square_partitions(total - d * d, count - 1, parts, k):
            yield (d,) + rest


def irrep_dimensions(g: GroupInfo) -> tuple[int, ...]:
    """Irrep dimensions from ``sum d^2 = |G|``, ``#irreps = #classes``, ``d | |G|``."""
    order = g.order
    if order > MAX_IRREP_ORDER:
        raise GroupError(f"irrep search supports |G| <= {MAX_IRREP_ORDER}, got {order}")
    k = len(g.classes)
    found = list(_square_partitions(order, k, _divisors(order)))
    if len(found) != 1:
        raise IrrepAmbiguityError(order, k, found)
    return found[0]


def _orders(*pairs: tuple[int, int]) -> tuple[int, ...]:
    out = []
    for order, count in pairs:
        out.extend([order] * count)
    return tuple(out)


# (order, abelian, sorted element orders) -> name, for every group of order <= 8
_CATALOG = {
    (1, True, _orders((1, 1))): "C1",
    (2, True, _orders((1, 1), (2, 1))): "C2",
    (3, True, _orders((1, 1), (3, 2))): "C3",
    (4, True, _orders((1, 1), (2, 1), (4, 2))): "C4",
    (4, True, _orders((1, 1), (2, 3))): "C2 × C2",
    (5, True, _orders((1, 1), (5, 4))): "C5",
    (6, True, _orders((1, 1), (2, 1), (3, 2), (6, 2))): "C6",
    (6, False, _orders((1, 1), (2, 3), (3, 2))): "S3 (≅ C3v)",
    (7, True, _orders((1, 1), (7, 6))): "C7",
    (8, True, _orders((1, 1), (2, 1), (4, 2), (8, 4))): "C8",
    (8, True, _orders((1, 1), (2, 3), (4, 4))): "C4 × C2",
    (8, True, _orders((1, 1), (2, 7))): "C2 × C2 × C2",
    (8, False, _orders((1, 1), (2, 5), (4, 2))): "D4 (≅ C4v)",
    (8, False, _orders((1, 1), (2, 1), (4, 6))): "Q8",
}


def identify_group(g: GroupInfo) -> str:
    """Catalog name for groups of order <= 8, else ``"unidentified"``."""
    if g.order > MAX_CATALOG_ORDER:
        return "unidentified"
    key = (g.order, g.is_abelian, tuple(sorted(g.element_orders)))
    return _CATALOG.get(key, "unidentified")


def element_order_counts(g: GroupInfo) -> dict[int, int]:
    return dict(sorted(Counter(g.element_orders).items()))
