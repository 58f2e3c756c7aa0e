"""Open filters, the filter space and the monad structure (unit, multiplication).

An open filter is a ``frozenset`` of open bitmasks of the underlying space.
Filters must contain the full open; the improper filter (all opens) is
admitted. Filters on a finite space are exactly the principal ones ``[A]``
with ``A`` open, which is how :func:`open_filters` generates them; every
generated set is still run through :func:`is_open_filter`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from ofm.order import bits, subset_key
from ofm.report import Check, Report, verdict
from ofm.topology import (
    ContinuousMap,
    FeasibilityExceeded,
    FiniteSpace,
    is_continuous_map,
    is_T0,
    union_closure,
)

OpenFilter = frozenset


class NotAnOpen(ValueError):
    pass


class NotAFilter(ValueError):
    pass


class NotDirected(ValueError):
    pass


class EmptyFamily(ValueError):
    pass


def _require_opens(X: FiniteSpace, candidate: Iterable[int]) -> frozenset[int]:
    c = frozenset(candidate)
    for m in c:
        if not X.is_open(m):
            raise NotAnOpen(f"{sorted(map(str, X.members(m)))} is not open")
    return c


def is_open_filter(X: FiniteSpace, candidate: Iterable[int], *, admit_empty: bool = False) -> bool:
    """Filter condition: A & B is a member exactly when A and B both are."""
    c = _require_opens(X, candidate)
    if not c:
        return admit_empty
    if X.full not in c:
        return False
    opens = X.opens
    for pos, a in enumerate(opens):
        a_in = a in c
        for b in opens[pos:]:
            if ((a & b) in c) != (a_in and b in c):
                return False
    return True


def principal_filter(X: FiniteSpace, A: int) -> OpenFilter:
    """``[A]``: the opens containing the point set ``A`` (a bitmask, not necessarily open)."""
    return frozenset(o for o in X.opens if A & ~o == 0)


def filter_key(X: FiniteSpace, v: OpenFilter) -> tuple:
    idx = X.open_index
    return (len(v), sorted(idx[o] for o in v))


def open_filters(X: FiniteSpace, *, limit: int | None = None) -> list[OpenFilter]:
    if limit is not None and len(X.opens) > limit:
        raise FeasibilityExceeded("filter set", len(X.opens), limit)
    out = []
    for A in X.opens:
        v = principal_filter(X, A)
        if not is_open_filter(X, v):
            raise AssertionError(f"principal filter of an open failed the filter condition: {v}")
        out.append(v)
    return sorted(out, key=lambda v: filter_key(X, v))


def eta(X: FiniteSpace, x) -> OpenFilter:
    return principal_filter(X, 1 << X.index(x))


def describe_filter(X: FiniteSpace, v: OpenFilter) -> list[list]:
    """Members of ``v`` as canonically ordered lists of point labels."""
    return [X.sorted_members(o) for o in sorted(v, key=subset_key)]


@dataclass(eq=False)
class FilterSpace:
    """The set of open filters of ``base_space`` with the topology generated by
    the sets ``phi(A)``. ``topology`` is ``None`` when only the carrier was built."""

    base_space: FiniteSpace
    filters: tuple[OpenFilter, ...]
    phi_masks: dict[int, int]
    topology: FiniteSpace | None

    @cached_property
    def position(self) -> dict[OpenFilter, int]:
        return {v: k for k, v in enumerate(self.filters)}

    def __len__(self):
        return len(self.filters)

    def index(self, v: OpenFilter) -> int:
        try:
            return self.position[v]
        except KeyError:
            raise NotAFilter("not an open filter of the base space") from None

    @cached_property
    def inclusion_up(self) -> tuple[int, ...]:
        """``inclusion_up[k]``: mask of filters containing filter k."""
        out = []
        for v in self.filters:
            m = 0
            for k, w in enumerate(self.filters):
                if v <= w:
                    m |= 1 << k
            out.append(m)
        return tuple(out)

    def members_mask(self, family: Iterable[OpenFilter]) -> int:
        m = 0
        for v in family:
            m |= 1 << self.index(v)
        return m

    def family(self, mask: int) -> list[OpenFilter]:
        return [self.filters[k] for k in bits(mask)]

    def describe(self, k: int) -> dict:
        return {"index": k, "members": describe_filter(self.base_space, self.filters[k])}


def phi(fs: FilterSpace, A: int) -> frozenset[OpenFilter]:
    """Filters containing the open ``A``."""
    if not fs.base_space.is_open(A):
        raise NotAnOpen(f"{sorted(map(str, fs.base_space.members(A)))} is not open")
    return frozenset(fs.family(fs.phi_masks[A]))


def filter_space(
    X: FiniteSpace,
    *,
    with_topology: bool = True,
    limit: int | None = None,
    topology_limit: int | None = None,
    verify: bool = True,
) -> FilterSpace:
    """Build the filter space of ``X``.

    ``limit`` bounds the number of filters, ``topology_limit`` the number of
    opens of the generated topology (which is the size of the next level).
    """
    filters = tuple(open_filters(X, limit=limit))
    phi_masks = {}
    for A in X.opens:
        m = 0
        for k, v in enumerate(filters):
            if A in v:
                m |= 1 << k
        phi_masks[A] = m
    if verify:
        # the base is intersection-closed by the filter condition: phi(A) & phi(B) == phi(A & B)
        for pos, a in enumerate(X.opens):
            for b in X.opens[pos:]:
                if phi_masks[a] & phi_masks[b] != phi_masks[a & b]:
                    raise AssertionError("phi(A) & phi(B) != phi(A & B)")
        if phi_masks[X.full] != (1 << len(filters)) - 1:
            raise AssertionError("phi(X) is not the whole filter set")
    topology = None
    if with_topology:
        opens = union_closure(phi_masks.values(), topology_limit, what="topology of the filter space")
        topology = FiniteSpace(filters, tuple(sorted(opens, key=subset_key)))
    fs = FilterSpace(X, filters, phi_masks, topology)
    if verify and topology is not None:
        if not is_T0(topology):
            raise AssertionError("filter space topology is not T0")
        ups = fs.inclusion_up
        for W in topology.opens:
            if any(ups[k] & ~W for k in bits(W)):
                raise AssertionError("filter space open is not an upper set under inclusion")
    return fs


def phi_assignment(f: ContinuousMap, FX: FilterSpace, FY: FilterSpace) -> tuple[int, ...]:
    """Positions of ``Phi(f)(u)`` in ``FY.filters`` for each ``u`` in ``FX.filters``.

    ``Phi(f)(u) = {B open in Y : f^-1(B) in u}``. Raises :class:`NotAFilter`
    when an image is not a filter, which only happens for discontinuous ``f``.
    """
    pre = [(B, f.preimage(B)) for B in f.codomain.opens]
    out = []
    for u in FX.filters:
        image = frozenset(B for B, p in pre if p in u)
        out.append(FY.index(image))
    return tuple(out)


def phi_image(f: ContinuousMap, u: OpenFilter) -> frozenset[int]:
    """The raw set ``Phi(f)(u)``, without checking that it is a filter."""
    return frozenset(B for B in f.codomain.opens if f.preimage(B) in u)


def phi_map(f: ContinuousMap, FX: FilterSpace | None = None, FY: FilterSpace | None = None) -> ContinuousMap:
    """``Phi(f)`` as a map between the two filter spaces."""
    FX = FX or filter_space(f.domain)
    FY = FY or filter_space(f.codomain)
    return ContinuousMap(FX.topology, FY.topology, phi_assignment(f, FX, FY))


def mu(fs: FilterSpace, alpha: Iterable[int]) -> OpenFilter:
    """``A`` belongs to ``mu(alpha)`` exactly when ``phi(A)`` belongs to ``alpha``.

    ``alpha`` is a filter on ``fs.topology``, given as a set of open bitmasks
    over ``fs.filters``.
    """
    alpha = frozenset(alpha)
    return frozenset(A for A in fs.base_space.opens if fs.phi_masks[A] in alpha)


def mu_assignment(fs: FilterSpace, ffs: FilterSpace) -> tuple[int, ...]:
    """``mu`` as positions: ``ffs`` is the filter space of ``fs.topology``."""
    return tuple(fs.index(mu(fs, alpha)) for alpha in ffs.filters)


def eta_assignment(fs: FilterSpace) -> tuple[int, ...]:
    X = fs.base_space
    return tuple(fs.index(principal_filter(X, 1 << i)) for i in range(X.n))


def a_tilde(fs: FilterSpace, family: Iterable[OpenFilter]) -> frozenset[int]:
    """Opens of the filter space meeting a nonempty directed family of filters."""
    fam = list(dict.fromkeys(family))
    if not fam:
        raise EmptyFamily("family of filters is empty")
    for v, w in combinations(fam, 2):
        if not any(v <= u and w <= u for u in fam):
            raise NotDirected(
                f"no member of the family contains both "
                f"{describe_filter(fs.base_space, v)} and {describe_filter(fs.base_space, w)}"
            )
    fmask = fs.members_mask(fam)
    return frozenset(W for W in fs.topology.opens if W & fmask)


def a_v(X: FiniteSpace, v: OpenFilter) -> list[OpenFilter]:
    """The principal filters of the members of ``v``, in canonical open order."""
    fam = [principal_filter(X, A) for A in sorted(v, key=subset_key)]
    return list(dict.fromkeys(fam))


def is_directed_family(family: Sequence[OpenFilter]) -> bool:
    if not family:
        return False
    return all(any(v <= u and w <= u for u in family) for v, w in combinations(family, 2))


class FilterTower:
    """``X``, ``Phi(X)``, ``Phi^2(X)`` and the carrier of ``Phi^3(X)``, built on demand
    under the configured size bounds."""

    def __init__(self, X: FiniteSpace, max_phi2: int, max_phi3: int | None = None):
        self.X = X
        self.max_phi2 = max_phi2
        self.max_phi3 = max_phi3

    @cached_property
    def F1(self) -> FilterSpace:
        # |Phi^2(X)| equals the number of opens of Phi(X)
        return filter_space(self.X, topology_limit=self.max_phi2)

    @cached_property
    def F2(self) -> FilterSpace:
        if self.max_phi3 is None:
            return filter_space(self.F1.topology, with_topology=False)
        return filter_space(self.F1.topology, topology_limit=self.max_phi3)

    @cached_property
    def F3(self) -> FilterSpace:
        return filter_space(self.F2.topology, with_topology=False, verify=False)

    @cached_property
    def eta_X(self) -> tuple[int, ...]:
        return eta_assignment(self.F1)

    @cached_property
    def mu_X(self) -> tuple[int, ...]:
        return mu_assignment(self.F1, self.F2)


def _first_failure(pairs) -> dict | None:
    for witness, ok in pairs:
        if not ok:
            return witness
    return None


def check_monad_laws(
    X: FiniteSpace,
    test_maps: Sequence[ContinuousMap] = (),
    *,
    max_phi2: int,
    max_phi3: int,
    towers: dict | None = None,
) -> Report:
    """Continuity of unit and multiplication, naturality for each supplied map,
    both unit laws and associativity over the whole of ``Phi^3(X)``.

    Raises :class:`FeasibilityExceeded` before any law is evaluated when a
    carrier is over its bound. ``towers`` caches towers of map codomains.
    """
    if not is_T0(X):
        raise ValueError("monad laws are checked on T0 spaces only")
    towers = {} if towers is None else towers
    T = towers.get(X)
    if T is None or T.max_phi3 is None:
        T = towers[X] = FilterTower(X, max_phi2, max_phi3)
    F1, F2, F3 = T.F1, T.F2, T.F3
    report = Report(key="law", meta={"sizes": {
        "points": X.n, "phi": len(F1), "phi2": len(F2), "phi3": len(F3)}})

    eta_X, mu_X = T.eta_X, T.mu_X
    eta_map = ContinuousMap(X, F1.topology, eta_X)
    mu_map = ContinuousMap(F2.topology, F1.topology, mu_X)
    report.add(verdict("eta continuous", _first_open_with_bad_preimage(eta_map)))
    report.add(verdict("mu continuous", _first_open_with_bad_preimage(mu_map)))
    injective = len(set(eta_X)) == X.n
    report.add(verdict("eta injective", None if injective else {"eta": list(eta_X)}))

    # unit laws on Phi(X)
    eta_FX = eta_assignment(F2)              # Phi(X) -> Phi^2(X)
    Phi_eta = phi_assignment(eta_map, F1, F2)  # Phi(X) -> Phi^2(X)
    report.add(verdict("unit law mu . eta_Phi = id", _first_failure(
        ({"filter": F1.describe(k), "result": F1.describe(mu_X[eta_FX[k]])}, mu_X[eta_FX[k]] == k)
        for k in range(len(F1)))))
    report.add(verdict("unit law mu . Phi(eta) = id", _first_failure(
        ({"filter": F1.describe(k), "result": F1.describe(mu_X[Phi_eta[k]])}, mu_X[Phi_eta[k]] == k)
        for k in range(len(F1)))))

    # associativity on Phi^3(X)
    mu_FX = mu_assignment(F2, F3)             # Phi^3 -> Phi^2
    Phi_mu = phi_assignment(mu_map, F3, F2)   # Phi^3 -> Phi^2
    report.add(verdict("associativity mu . Phi(mu) = mu . mu_Phi", _first_failure(
        ({"phi3_index": k, "left": mu_X[Phi_mu[k]], "right": mu_X[mu_FX[k]]},
         mu_X[Phi_mu[k]] == mu_X[mu_FX[k]])
        for k in range(len(F3))), phi3=len(F3)))

    for n_map, f in enumerate(test_maps):
        name = f"map {n_map}"
        if f.domain != X:
            report.add(Check(f"naturality {name}", "skipped", reason="map domain is not the checked space"))
            continue
        if not is_continuous_map(f):
            report.add(Check(f"naturality {name}", "skipped",
                             reason=f"map is not continuous: {_show_map(f)}"))
            continue
        Y = f.codomain
        TY = towers.get(Y) or FilterTower(Y, max_phi2, None)
        towers.setdefault(Y, TY)
        G1, G2 = TY.F1, TY.F2
        Phi_f = phi_assignment(f, F1, G1)
        Phi_f_map = ContinuousMap(F1.topology, G1.topology, Phi_f)
        report.add(verdict(f"Phi({name}) continuous", _first_open_with_bad_preimage(Phi_f_map)))
        eta_Y = TY.eta_X
        report.add(verdict(f"eta natural for {name}", _first_failure(
            ({"point": X.points[i]}, Phi_f[eta_X[i]] == eta_Y[f.assignment[i]]) for i in range(X.n))))
        Phi2_f = phi_assignment(Phi_f_map, F2, G2)
        mu_Y = mu_assignment(G1, G2)
        report.add(verdict(f"mu natural for {name}", _first_failure(
            ({"phi2_index": k}, Phi_f[mu_X[k]] == mu_Y[Phi2_f[k]]) for k in range(len(F2)))))
    return report


def _show_map(f: ContinuousMap) -> dict:
    return {str(k): str(v) for k, v in f.as_dict().items()}


def _first_open_with_bad_preimage(f: ContinuousMap) -> dict | None:
    for B in f.codomain.opens:
        if not f.domain.is_open(f.preimage(B)):
            return {"open_bits": bits(B), "preimage_bits": bits(f.preimage(B))}
    return None
