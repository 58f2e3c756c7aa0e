"""Finite posets: ideals, suprema, way-below, continuity and Scott opens.

Subsets of a poset are handled internally as integer bitmasks over element
positions; the public functions take and return sets of element identifiers.
Way-below and Scott openness are decided by quantifying over the full ideal
enumeration, never through the finite shortcuts (those live in the tests).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable


class PosetError(ValueError):
    pass


class AntisymmetryViolation(PosetError):
    pass


class DuplicateElement(PosetError):
    pass


class UnknownElementInPair(PosetError):
    pass


class NotCompleteLattice(ValueError):
    pass


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def subset_key(mask: int) -> tuple[int, list[int]]:
    """Canonical sort key: size first, then the sorted position list."""
    return (mask.bit_count(), bits(mask))


@dataclass(frozen=True, eq=False)
class FinitePoset:
    """A finite partial order.

    ``up[i]`` is the bitmask of positions ``j`` with ``elements[i] <= elements[j]``.
    Instances are built through :func:`validate_poset` (or :meth:`from_up`),
    which guarantee the relation is a partial order.
    """

    elements: tuple
    up: tuple[int, ...]
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.elements)})

    @classmethod
    def from_up(cls, elements: Iterable[Hashable], up: Iterable[int]) -> "FinitePoset":
        return cls(tuple(elements), tuple(up))

    def __eq__(self, other):
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.elements == other.elements and self.up == other.up

    def __hash__(self):
        return hash((self.elements, self.up))

    def __len__(self):
        return len(self.elements)

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def down(self) -> tuple[int, ...]:
        d = [0] * self.n
        for i, m in enumerate(self.up):
            for j in bits(m):
                d[j] |= 1 << i
        return tuple(d)

    def index(self, x) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise KeyError(f"unknown element {x!r}") from None

    def mask(self, xs: Iterable) -> int:
        m = 0
        for x in xs:
            m |= 1 << self.index(x)
        return m

    def members(self, mask: int) -> frozenset:
        return frozenset(self.elements[i] for i in bits(mask))

    def sorted_members(self, mask: int) -> list:
        return [self.elements[i] for i in bits(mask)]

    def leq(self, x, y) -> bool:
        return bool(self.up[self.index(x)] >> self.index(y) & 1)

    def leq_i(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def pairs(self) -> list[tuple]:
        """All related pairs (x, y) with x <= y, in position order."""
        return [(self.elements[i], self.elements[j]) for i in range(self.n) for j in bits(self.up[i])]

    def covers(self) -> list[tuple]:
        out = []
        for i in range(self.n):
            strict = self.up[i] & ~(1 << i)
            for j in bits(strict):
                between = strict & self.down[j] & ~(1 << j)
                if not between:
                    out.append((self.elements[i], self.elements[j]))
        return out

    # mask-level helpers used by the heavier modules

    def upper_bounds_m(self, s: int) -> int:
        ub = self.full
        for i in bits(s):
            ub &= self.up[i]
        return ub

    def lower_bounds_m(self, s: int) -> int:
        lb = self.full
        for i in bits(s):
            lb &= self.down[i]
        return lb

    def sup_i(self, s: int) -> int | None:
        ub = self.upper_bounds_m(s)
        for i in bits(ub):
            if ub & ~self.up[i] == 0:
                return i
        return None

    def inf_i(self, s: int) -> int | None:
        lb = self.lower_bounds_m(s)
        for i in bits(lb):
            if lb & ~self.down[i] == 0:
                return i
        return None

    def is_upper_m(self, s: int) -> bool:
        return all(self.up[i] & ~s == 0 for i in bits(s))

    def is_lower_m(self, s: int) -> bool:
        return all(self.down[i] & ~s == 0 for i in bits(s))

    def is_directed_m(self, s: int) -> bool:
        if not s:
            return False
        members = bits(s)
        for a in members:
            for b in members:
                if not (self.up[a] & self.up[b] & s):
                    return False
        return True

    @cached_property
    def ideal_masks(self) -> tuple[int, ...]:
        found = [
            s for s in range(1, 1 << self.n)
            if self.is_lower_m(s) and self.is_directed_m(s)
        ]
        return tuple(sorted(found, key=subset_key))

    @cached_property
    def ideal_sups(self) -> tuple[int | None, ...]:
        return tuple(self.sup_i(s) for s in self.ideal_masks)

    @cached_property
    def way_below_m(self) -> tuple[int, ...]:
        """``way_below_m[j]`` is the mask of positions ``i`` with ``i << j``."""
        if any(s is None for s in self.ideal_sups):
            raise PosetError("poset is not a dcpo: some ideal has no supremum")
        out = []
        for j in range(self.n):
            wb = self.full
            for ideal, top in zip(self.ideal_masks, self.ideal_sups):
                if self.leq_i(j, top):
                    wb &= ideal
            out.append(wb)
        return tuple(out)


def validate_poset(raw_elements: Iterable, raw_pairs: Iterable[tuple]) -> FinitePoset:
    """Build a poset from elements and (Hasse-style) pairs ``(a, b)`` meaning a <= b.

    The relation is closed reflexively and transitively before the
    antisymmetry check.
    """
    elements = list(raw_elements)
    seen = set()
    for e in elements:
        if e in seen:
            raise DuplicateElement(f"duplicate element {e!r}")
        seen.add(e)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    up = [1 << i for i in range(n)]
    for pair in raw_pairs:
        a, b = pair
        for x in (a, b):
            if x not in index:
                raise UnknownElementInPair(f"pair ({a!r}, {b!r}) names unknown element {x!r}")
        up[index[a]] |= 1 << index[b]
    # Warshall on bitmask rows
    for k in range(n):
        bit = 1 << k
        for i in range(n):
            if up[i] & bit:
                up[i] |= up[k]
    for i in range(n):
        for j in bits(up[i]):
            if j != i and up[j] >> i & 1:
                raise AntisymmetryViolation(
                    f"{elements[i]!r} <= {elements[j]!r} and {elements[j]!r} <= {elements[i]!r}"
                )
    return FinitePoset(tuple(elements), tuple(up))


def ideals(P: FinitePoset) -> list[frozenset]:
    """Nonempty directed lower sets, ordered by size then by member positions."""
    return [P.members(s) for s in P.ideal_masks]


def sup(P: FinitePoset, S: Iterable):
    """Least upper bound of ``S`` or ``None`` when it does not exist."""
    i = P.sup_i(P.mask(S))
    return None if i is None else P.elements[i]


def inf(P: FinitePoset, S: Iterable):
    i = P.inf_i(P.mask(S))
    return None if i is None else P.elements[i]


def is_complete_lattice(P: FinitePoset) -> bool:
    # For a finite poset, binary sups/infs plus a bottom and top give every
    # subset a sup and an inf; we still check every subset directly.
    if P.n == 0:
        return False
    for s in range(1 << P.n):
        if P.sup_i(s) is None or P.inf_i(s) is None:
            return False
    return True


def way_below(P: FinitePoset, x, y) -> bool:
    return bool(P.way_below_m[P.index(y)] >> P.index(x) & 1)


def waydown(P: FinitePoset, x) -> frozenset:
    return P.members(P.way_below_m[P.index(x)])


def wayup(P: FinitePoset, x) -> frozenset:
    return P.members(_wayup_m(P, P.index(x)))


def _wayup_m(P: FinitePoset, i: int) -> int:
    return sum(1 << j for j in range(P.n) if P.way_below_m[j] >> i & 1)


def is_continuous_lattice(P: FinitePoset) -> bool:
    if not is_complete_lattice(P):
        raise NotCompleteLattice("poset is not a complete lattice")
    return all(P.sup_i(P.way_below_m[i]) == i for i in range(P.n))


def scott_open_masks(P: FinitePoset) -> list[int]:
    out = []
    for v in range(1 << P.n):
        if not P.is_upper_m(v):
            continue
        if all(ideal & v for ideal, top in zip(P.ideal_masks, P.ideal_sups) if v >> top & 1):
            out.append(v)
    return sorted(out, key=subset_key)


def scott_opens(P: FinitePoset) -> list[frozenset]:
    return [P.members(v) for v in scott_open_masks(P)]


def lower_bounds(P: FinitePoset, A: Iterable) -> frozenset:
    return P.members(P.lower_bounds_m(P.mask(A)))


@dataclass
class InterpolationReport:
    holds: bool
    interpolation: dict = field(default_factory=dict)  # (x, y) -> z
    interpolation_failures: list = field(default_factory=list)
    base_failures: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "interpolation": [
                {"x": x, "y": y, "z": z} for (x, y), z in self.interpolation.items()
            ],
            "interpolation_failures": [list(p) for p in self.interpolation_failures],
            "base_failures": [sorted(map(str, v)) for v in self.base_failures],
        }


def check_interpolation_and_base(P: FinitePoset) -> InterpolationReport:
    """Interpolation for way-below, and the sets wayup(x) forming a base of Scott opens."""
    if not is_complete_lattice(P):
        raise NotCompleteLattice("poset is not a complete lattice")
    wb = P.way_below_m
    report = InterpolationReport(holds=True)
    for y in range(P.n):
        for x in bits(wb[y]):
            # z with x << z << y; the first one in position order is recorded
            z = next((z for z in bits(wb[y]) if wb[z] >> x & 1), None)
            if z is None:
                report.interpolation_failures.append((P.elements[x], P.elements[y]))
            else:
                report.interpolation[(P.elements[x], P.elements[y])] = P.elements[z]
    basics = [_wayup_m(P, i) for i in range(P.n)]
    for v in scott_open_masks(P):
        covered = 0
        for b in basics:
            if b & ~v == 0:
                covered |= b
        if covered != v:
            report.base_failures.append(P.members(v))
    report.holds = not report.interpolation_failures and not report.base_failures
    return report
