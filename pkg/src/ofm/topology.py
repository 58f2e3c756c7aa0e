"""Finite topological spaces stored extensionally.

Every open is kept as a bitmask over point positions, and the open list is
held in canonical order (size, then member positions). Points can be any
hashable label: user files use strings, while the filter-space tower uses
the filters themselves.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Sequence

from ofm.order import FinitePoset, bits, scott_open_masks, subset_key


class FeasibilityExceeded(RuntimeError):
    """A carrier grew past a configured size bound."""

    def __init__(self, what: str, size: int, bound: int):
        super().__init__(f"{what} has more than {bound} elements (reached {size})")
        self.what = what
        self.size = size
        self.bound = bound


@dataclass(frozen=True)
class Violation:
    kind: str
    witness: tuple = ()

    def __str__(self):
        if not self.witness:
            return self.kind
        return f"{self.kind}{self.witness}"


class TopologyError(ValueError):
    """Raised with the complete list of violated conditions."""

    def __init__(self, violations: list[Violation]):
        super().__init__("; ".join(str(v) for v in violations))
        self.violations = violations

    @property
    def kinds(self) -> list[str]:
        return [v.kind for v in self.violations]


class NotT0(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteSpace:
    points: tuple
    opens: tuple[int, ...]
    _index: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(self.points)})

    def __eq__(self, other):
        if not isinstance(other, FiniteSpace):
            return NotImplemented
        return self.points == other.points and self.opens == other.opens

    def __hash__(self):
        return hash((self.points, self.opens))

    def __len__(self):
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @cached_property
    def open_set(self) -> frozenset[int]:
        return frozenset(self.opens)

    @cached_property
    def open_index(self) -> dict[int, int]:
        return {o: k for k, o in enumerate(self.opens)}

    def is_open(self, mask: int) -> bool:
        return mask in self.open_set

    def index(self, p) -> int:
        try:
            return self._index[p]
        except KeyError:
            raise KeyError(f"unknown point {p!r}") from None

    def mask(self, ps: Iterable) -> int:
        m = 0
        for p in ps:
            m |= 1 << self.index(p)
        return m

    def members(self, mask: int) -> frozenset:
        return frozenset(self.points[i] for i in bits(mask))

    def sorted_members(self, mask: int) -> list:
        return [self.points[i] for i in bits(mask)]

    @cached_property
    def neighbourhoods(self) -> tuple[int, ...]:
        """``neighbourhoods[i]``: intersection of all opens containing point i."""
        out = []
        for i in range(self.n):
            m = self.full
            for o in self.opens:
                if o >> i & 1:
                    m &= o
            out.append(m)
        return tuple(out)


def _canonical(opens: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(opens), key=subset_key))


def _check_points(points: Sequence) -> list[Violation]:
    seen, dup = set(), []
    for p in points:
        if p in seen:
            dup.append(Violation("DuplicatePoint", (p,)))
        seen.add(p)
    return dup


def validate_topology(raw_points: Iterable[Hashable], raw_opens: Iterable[Iterable]) -> FiniteSpace:
    points = tuple(raw_points)
    violations = _check_points(points)
    index = {p: i for i, p in enumerate(points)}
    masks = []
    for o in raw_opens:
        m = 0
        for p in o:
            if p not in index:
                violations.append(Violation("UnknownPointInOpen", (p,)))
                continue
            m |= 1 << index[p]
        masks.append(m)
    full = (1 << len(points)) - 1
    opens = set(masks)
    if 0 not in opens:
        violations.append(Violation("MissingEmptyOpen"))
    if full not in opens:
        violations.append(Violation("MissingFullOpen"))
    ordered = _canonical(opens)
    members = lambda m: tuple(points[i] for i in bits(m))
    union_bad = inter_bad = None
    for a_pos, a in enumerate(ordered):
        for b in ordered[a_pos + 1:]:
            if union_bad is None and a | b not in opens:
                union_bad = (members(a), members(b))
            if inter_bad is None and a & b not in opens:
                inter_bad = (members(a), members(b))
    if union_bad is not None:
        violations.append(Violation("NotClosedUnderUnion", union_bad))
    if inter_bad is not None:
        violations.append(Violation("NotClosedUnderIntersection", inter_bad))
    if violations:
        raise TopologyError(violations)
    return FiniteSpace(points, ordered)


def union_closure(base: Iterable[int], limit: int | None = None, what: str = "topology") -> set[int]:
    """All unions of subfamilies of ``base`` (the empty union included)."""
    result = {0}
    for b in sorted(set(base)):
        new = {s | b for s in result}
        result |= new
        if limit is not None and len(result) > limit:
            raise FeasibilityExceeded(what, len(result), limit)
    return result


def from_base(
    raw_points: Iterable[Hashable],
    base: Iterable,
    *,
    limit: int | None = None,
    masks: bool = False,
) -> FiniteSpace:
    """Topology generated by a base.

    ``base`` holds point collections, or bitmasks when ``masks`` is true.
    The base must cover the points and every pairwise intersection of base
    sets must be a union of base sets.
    """
    points = tuple(raw_points)
    violations = _check_points(points)
    if violations:
        raise TopologyError(violations)
    index = {p: i for i, p in enumerate(points)}
    if masks:
        bmasks = sorted(set(base), key=subset_key)
    else:
        bmasks = []
        for b in base:
            m = 0
            for p in b:
                if p not in index:
                    raise TopologyError([Violation("UnknownPointInOpen", (p,))])
                m |= 1 << index[p]
            bmasks.append(m)
        bmasks = sorted(set(bmasks), key=subset_key)
    full = (1 << len(points)) - 1
    cover = 0
    for b in bmasks:
        cover |= b
    if cover != full:
        raise TopologyError([Violation("BaseDoesNotCover", tuple(points[i] for i in bits(full & ~cover)))])
    for pos, a in enumerate(bmasks):
        for b in bmasks[pos:]:
            inter = a & b
            u = 0
            for c in bmasks:
                if c & ~inter == 0:
                    u |= c
            if u != inter:
                raise TopologyError([Violation(
                    "IntersectionNotUnionOfBase",
                    (tuple(points[i] for i in bits(a)), tuple(points[i] for i in bits(b))),
                )])
    opens = union_closure(bmasks, limit)
    return FiniteSpace(points, _canonical(opens))


def is_T0(X: FiniteSpace) -> bool:
    return len(set(X.neighbourhoods)) == X.n


def specialization_order(X: FiniteSpace) -> FinitePoset:
    """x <= y iff every open containing x contains y, so opens are upper sets."""
    if not is_T0(X):
        raise NotT0("specialization preorder is not antisymmetric")
    return FinitePoset(X.points, X.neighbourhoods)


@dataclass(frozen=True)
class ContinuousMap:
    """A point assignment between two spaces, as positions into ``codomain.points``.

    Continuity is not enforced by construction; see :func:`is_continuous_map`.
    """

    domain: FiniteSpace
    codomain: FiniteSpace
    assignment: tuple[int, ...]

    @classmethod
    def from_dict(cls, X: FiniteSpace, Y: FiniteSpace, mapping: dict) -> "ContinuousMap":
        missing = [p for p in X.points if p not in mapping]
        if missing:
            raise ValueError(f"map is not total: no image for {missing!r}")
        return cls(X, Y, tuple(Y.index(mapping[p]) for p in X.points))

    def __call__(self, p):
        return self.codomain.points[self.assignment[self.domain.index(p)]]

    def preimage(self, mask: int) -> int:
        m = 0
        for i, j in enumerate(self.assignment):
            if mask >> j & 1:
                m |= 1 << i
        return m

    def as_dict(self) -> dict:
        return {p: self.codomain.points[j] for p, j in zip(self.domain.points, self.assignment)}


def is_continuous_map(f: ContinuousMap) -> bool:
    X = f.domain
    return all(X.is_open(f.preimage(B)) for B in f.codomain.opens)


def identity_map(X: FiniteSpace) -> ContinuousMap:
    return ContinuousMap(X, X, tuple(range(X.n)))


def compose(g: ContinuousMap, f: ContinuousMap) -> ContinuousMap:
    """g after f."""
    if f.codomain != g.domain:
        raise ValueError("maps are not composable")
    return ContinuousMap(f.domain, g.codomain, tuple(g.assignment[j] for j in f.assignment))


def all_maps(X: FiniteSpace, Y: FiniteSpace, continuous_only: bool = True) -> list[ContinuousMap]:
    from itertools import product

    out = []
    for assignment in product(range(Y.n), repeat=X.n):
        f = ContinuousMap(X, Y, assignment)
        if not continuous_only or is_continuous_map(f):
            out.append(f)
    return out


def scott_space(P: FinitePoset) -> FiniteSpace:
    return FiniteSpace(P.elements, tuple(scott_open_masks(P)))
