"""Algebras for the open filter monad and the continuous-lattice correspondence.

Lattice to algebra: on the Scott space of a finite complete lattice, the map
``r(v) = sup v_down(v)`` is a structure map. Algebra to lattice: the
specialization order of any algebra is a continuous lattice and ``r`` is
recovered by the same formula. :func:`check_theorem_suite` checks every
intermediate claim of both directions exhaustively.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from ofm import config
from ofm.filters import (
    FilterSpace,
    FilterTower,
    OpenFilter,
    a_tilde,
    a_v,
    describe_filter,
    mu,
    principal_filter,
)
from ofm.order import (
    FinitePoset,
    NotCompleteLattice,
    bits,
    is_complete_lattice,
    is_continuous_lattice,
    scott_open_masks,
)
from ofm.report import FAIL, PASS, SKIPPED, Check, Report, verdict
from ofm.topology import FeasibilityExceeded, FiniteSpace, NotT0, is_T0, scott_space, specialization_order


class LawViolation(AssertionError):
    """An algebra built from a lattice failed a law; indicates a bug."""


CLAIMS = (
    "preimage_within_phi",
    "phi_within_preimage_of_wayup",
    "open_within_image_of_phi",
    "r_monotone",
    "meet_is_r_of_principal",
    "r_preserves_directed_sups",
    "r_is_sup_of_lower_bounds",
    "continuous_lattice",
)


@dataclass(eq=False)
class PhiAlgebra:
    """A space with a structure map given as ``r[k]``: point position for filter ``k``."""

    space: FiniteSpace
    filter_space: FilterSpace
    r: tuple[int, ...]

    def __call__(self, v: OpenFilter):
        return self.space.points[self.r[self.filter_space.index(v)]]

    def entries(self) -> list[dict]:
        fs = self.filter_space
        return [
            {"filter": describe_filter(self.space, v), "point": self.space.points[self.r[k]]}
            for k, v in enumerate(fs.filters)
        ]

    def __eq__(self, other):
        if not isinstance(other, PhiAlgebra):
            return NotImplemented
        return self.space == other.space and self.r == other.r

    __hash__ = None


def _v_down_m(P: FinitePoset, v: Iterable[int]) -> int:
    m = 0
    for A in v:
        m |= P.lower_bounds_m(A)
    return m


def v_down(P: FinitePoset, v: OpenFilter) -> frozenset:
    """Union of the lower-bound sets of the members of ``v``; always an ideal."""
    m = _v_down_m(P, v)
    if not (P.is_lower_m(m) and P.is_directed_m(m)):
        raise AssertionError(f"v_down is not an ideal: {sorted(map(str, P.members(m)))}")
    return P.members(m)


def _tower(X: FiniteSpace, tower: FilterTower | None) -> FilterTower:
    if tower is None:
        tower = FilterTower(X, config.max_phi2(), None)
    return tower


def r_from_lattice(P: FinitePoset, *, tower: FilterTower | None = None) -> PhiAlgebra:
    if not is_complete_lattice(P):
        raise NotCompleteLattice("poset is not a complete lattice")
    if not is_continuous_lattice(P):
        raise LawViolation("finite complete lattice reported as not continuous")
    X = scott_space(P)
    T = tower or FilterTower(X, config.max_phi2(), None)
    fs = T.F1
    r = []
    for v in fs.filters:
        m = _v_down_m(P, v)
        if not (P.is_lower_m(m) and P.is_directed_m(m)):
            raise LawViolation("v_down is not an ideal")
        r.append(P.sup_i(m))
    alg = PhiAlgebra(X, fs, tuple(r))
    report = check_algebra(X, alg.r, tower=T)
    if not report.all_passed:
        raise LawViolation(report.to_json())
    return alg


def _preimage_in_filters(fs: FilterSpace, r: Sequence[int], B: int) -> int:
    m = 0
    for k, x in enumerate(r):
        if B >> x & 1:
            m |= 1 << k
    return m


def _discontinuity(X: FiniteSpace, fs: FilterSpace, r: Sequence[int]) -> dict | None:
    opens = fs.topology.open_set
    for B in X.opens:
        if _preimage_in_filters(fs, r, B) not in opens:
            return {"open": X.sorted_members(B)}
    return None


def _unit_failure(X: FiniteSpace, eta: Sequence[int], r: Sequence[int]) -> dict | None:
    for i in range(X.n):
        if r[eta[i]] != i:
            return {"x": X.points[i], "r_eta_x": X.points[r[eta[i]]]}
    return None


def _multiplication_failure(T: FilterTower, r: Sequence[int]) -> dict | None:
    X, F1, F2 = T.X, T.F1, T.F2
    pre = [(B, _preimage_in_filters(F1, r, B)) for B in X.opens]
    mu_X = T.mu_X
    for k, alpha in enumerate(F2.filters):
        image = frozenset(B for B, p in pre if p in alpha)
        left = r[F1.index(image)]
        right = r[mu_X[k]]
        if left != right:
            return {
                "phi2_index": k,
                "r_Phi_r": X.points[left],
                "r_mu": X.points[right],
            }
    return None


def check_algebra(X: FiniteSpace, r: Sequence[int], *, tower: FilterTower | None = None) -> Report:
    """Continuity of ``r``, the unit law, and the multiplication law over all of ``Phi^2(X)``.

    ``r`` gives a point position for each filter of ``X`` in canonical order.
    """
    T = _tower(X, tower)
    F1 = T.F1
    if len(r) != len(F1):
        raise ValueError(f"r has {len(r)} entries, X has {len(F1)} filters")
    len(T.F2)  # materialise Phi^2 early so the bound is checked first
    report = Report(key="law", meta={"sizes": {"points": X.n, "phi": len(F1), "phi2": len(T.F2)}})
    disc = _discontinuity(X, F1, r)
    report.add(verdict("r continuous", disc))
    report.add(verdict("unit law r . eta = id", _unit_failure(X, T.eta_X, r)))
    if disc is not None:
        report.add(Check("multiplication law r . Phi(r) = r . mu", SKIPPED,
                         reason="r is not continuous, so Phi(r) is undefined"))
    else:
        report.add(verdict("multiplication law r . Phi(r) = r . mu", _multiplication_failure(T, r),
                           phi2=len(T.F2)))
    return report


def is_algebra(T: FilterTower, r: Sequence[int]) -> bool:
    return (
        _unit_failure(T.X, T.eta_X, r) is None
        and _discontinuity(T.X, T.F1, r) is None
        and _multiplication_failure(T, r) is None
    )


def _spec_order(alg: PhiAlgebra) -> FinitePoset:
    return specialization_order(alg.space)


def lattice_from_algebra(alg: PhiAlgebra) -> tuple[FinitePoset, Report]:
    """Specialization order of the algebra's space, with the claims that it is a
    complete and continuous lattice and that ``r(v) = sup v_down(v)``."""
    P = _spec_order(alg)
    report = Report(meta={"elements": list(map(str, P.elements))})
    complete = is_complete_lattice(P)
    report.add(verdict("complete lattice", None if complete else {"order": _pairs(P)}))
    if complete:
        cont = is_continuous_lattice(P)
        report.add(verdict("continuous lattice", None if cont else {"order": _pairs(P)}))
        report.add(_check_r_is_sup(alg, P))
    else:
        report.add(Check("continuous lattice", FAIL, witness={"reason": "not a complete lattice"}))
        report.add(Check("r equals sup of v_down", FAIL, witness={"reason": "not a complete lattice"}))
    return P, report


def _pairs(P: FinitePoset) -> list:
    return [[str(a), str(b)] for a, b in P.pairs()]


def _check_r_is_sup(alg: PhiAlgebra, P: FinitePoset, name="r equals sup of v_down") -> Check:
    X, fs = alg.space, alg.filter_space
    for k, v in enumerate(fs.filters):
        m = _v_down_m(P, v)
        if not (P.is_lower_m(m) and P.is_directed_m(m)):
            return Check(name, FAIL, witness={"filter": fs.describe(k), "reason": "v_down is not an ideal"})
        s = P.sup_i(m)
        if s != alg.r[k]:
            return Check(name, FAIL, witness={
                "filter": fs.describe(k),
                "r": X.points[alg.r[k]],
                "sup_v_down": None if s is None else X.points[s],
            })
    return Check(name, PASS)


def _is_scott_space_of(alg: PhiAlgebra, P: FinitePoset | None) -> str | None:
    """Reason the Scott-space preconditions fail, or None when they hold."""
    if P is None:
        return "space is not T0"
    if not is_complete_lattice(P):
        return "specialization order is not a complete lattice"
    if tuple(scott_open_masks(P)) != alg.space.opens:
        return "topology is not the Scott topology of the specialization order"
    return None


def _directed_families(fs: FilterSpace, limit: int) -> tuple[str, list[int]]:
    """Masks of the nonempty directed subfamilies (or of the chains beyond ``limit``)."""
    n = len(fs)
    ups = fs.inclusion_up
    if n <= limit:
        out = []
        for F in range(1, 1 << n):
            members = bits(F)
            if all(ups[a] & ups[b] & F for a, b in itertools.combinations(members, 2)):
                out.append(F)
        return "all directed subfamilies", out
    # canonical order lists smaller filters first, so chains grow by position
    out = []

    def grow(chain_mask: int, top: int):
        out.append(chain_mask)
        for k in range(top + 1, n):
            if ups[top] >> k & 1:
                grow(chain_mask | 1 << k, k)

    for k in range(n):
        grow(1 << k, k)
    return "chains", sorted(out)


def check_theorem_suite(
    alg: PhiAlgebra,
    *,
    tower: FilterTower | None = None,
    family_limit: int = config.DIRECTED_FAMILY_LIMIT,
) -> Report:
    """One entry per claim in :data:`CLAIMS`. Claims whose preconditions fail are
    reported as skipped, never as passed."""
    X, fs, r = alg.space, alg.filter_space, alg.r
    T = tower or FilterTower(X, config.max_phi2(), None)
    report = Report(meta={"points": [str(p) for p in X.points], "filters": len(fs)})
    P = specialization_order(X) if is_T0(X) else None
    n_f = len(fs)
    full_f = (1 << n_f) - 1

    def preimage(B):
        return _preimage_in_filters(fs, r, B)

    scott_reason = _is_scott_space_of(alg, P)
    # 1: preimage of every Scott open lies inside phi(A)
    if scott_reason:
        report.add(Check(CLAIMS[0], SKIPPED, reason=scott_reason))
        report.add(Check(CLAIMS[1], SKIPPED, reason=scott_reason))
    else:
        fail = None
        for A in X.opens:
            if preimage(A) & ~fs.phi_masks[A]:
                k = bits(preimage(A) & ~fs.phi_masks[A])[0]
                fail = {"open": X.sorted_members(A), "filter": fs.describe(k)}
                break
        report.add(verdict(CLAIMS[0], fail, opens=len(X.opens)))
        # 2: x way-below inf A gives phi(A) inside the preimage of wayup(x)
        wb = P.way_below_m
        fail, pairs = None, 0
        for A in X.opens:
            m = P.inf_i(A)
            for x in bits(wb[m]):
                pairs += 1
                wayup_x = sum(1 << y for y in range(P.n) if wb[y] >> x & 1)
                if fs.phi_masks[A] & ~preimage(wayup_x):
                    fail = {"open": X.sorted_members(A), "x": X.points[x]}
                    break
            if fail:
                break
        report.add(verdict(CLAIMS[1], fail, pairs=pairs))

    # 3: every open A lies inside r(phi(A))
    fail = None
    for A in X.opens:
        image = 0
        for k in bits(fs.phi_masks[A]):
            image |= 1 << r[k]
        if A & ~image:
            fail = {"open": X.sorted_members(A), "image": X.sorted_members(image)}
            break
    report.add(verdict(CLAIMS[2], fail))

    # 4: r is monotone from inclusion to the specialization order
    if P is None:
        report.add(Check(CLAIMS[3], SKIPPED, reason="space is not T0"))
    else:
        fail = None
        ups = fs.inclusion_up
        for k in range(n_f):
            for j in bits(ups[k]):
                if not P.leq_i(r[k], r[j]):
                    fail = {"v": fs.describe(k), "w": fs.describe(j)}
                    break
            if fail:
                break
        report.add(verdict(CLAIMS[3], fail))

    # 5: r([A]) is the greatest lower bound of A, for every point subset A
    if P is None:
        report.add(Check(CLAIMS[4], SKIPPED, reason="space is not T0"))
    else:
        fail = None
        for A in range(1 << X.n):
            k = fs.index(principal_filter(X, A))
            m = r[k]
            lb = P.lower_bounds_m(A)
            if not (lb >> m & 1) or any(not P.leq_i(y, m) for y in bits(lb)):
                fail = {"subset": X.sorted_members(A), "r_principal": X.points[m]}
                break
        if fail is None and not is_complete_lattice(P):
            fail = {"reason": "specialization order is not a complete lattice"}
        report.add(verdict(CLAIMS[4], fail, subsets=1 << X.n))

    # 6: r preserves directed sups, checked directly and through a_tilde
    if P is None:
        report.add(Check(CLAIMS[5], SKIPPED, reason="space is not T0"))
    elif _discontinuity(X, fs, r) is not None:
        report.add(Check(CLAIMS[5], SKIPPED, reason="r is not continuous"))
    else:
        regime, families = _directed_families(fs, family_limit)
        F2 = T.F2
        pre = [(B, preimage(B)) for B in X.opens]
        fail = None
        for F in families:
            fam = fs.family(F)
            union = frozenset().union(*fam)
            if union not in fs.position:
                fail = {"family": bits(F), "reason": "union is not a filter"}
                break
            ku = fs.index(union)
            if not _is_least_upper(fs, F, ku):
                fail = {"family": bits(F), "reason": "union is not the least upper bound"}
                break
            s = P.sup_i(_image_mask(r, bits(F)))
            if s != r[ku]:
                fail = {"family": bits(F), "r_union": X.points[r[ku]],
                        "sup_r": None if s is None else X.points[s]}
                break
            at = a_tilde(fs, fam)
            if at not in F2.position:
                fail = {"family": bits(F), "reason": "a_tilde is not a filter of the filter space"}
                break
            if mu(fs, at) != union:
                fail = {"family": bits(F), "reason": "mu(a_tilde) differs from the union"}
                break
            phi_r = frozenset(B for B, p in pre if p in at)
            if r[fs.index(phi_r)] != r[ku]:
                fail = {"family": bits(F), "reason": "r(Phi(r)(a_tilde)) differs from r(union)"}
                break
        report.add(verdict(CLAIMS[5], fail, regime=regime, families=len(families)))

    # 7: r(v) = sup v_down(v), with the inner steps of the argument
    if P is None:
        report.add(Check(CLAIMS[6], SKIPPED, reason="space is not T0"))
    else:
        check = _check_r_is_sup(alg, P, CLAIMS[6])
        if check.ok:
            fail = None
            for k, v in enumerate(fs.filters):
                vd = _v_down_m(P, v)
                fam = a_v(X, v)
                if frozenset().union(*fam) != v:
                    fail = {"filter": fs.describe(k), "reason": "union of a_v(v) differs from v"}
                    break
                img = _image_mask(r, (fs.index(w) for w in fam))
                if P.sup_i(img) != r[k]:
                    fail = {"filter": fs.describe(k), "reason": "r(v) differs from sup of r over a_v(v)"}
                    break
                for A in v:
                    m = P.inf_i(A)
                    if m is None or m != r[fs.index(principal_filter(X, A))] or not vd >> m & 1:
                        fail = {"filter": fs.describe(k), "open": X.sorted_members(A),
                                "reason": "inf A is not r([A]) inside v_down(v)"}
                        break
                if fail:
                    break
            check = verdict(CLAIMS[6], fail)
        report.add(check)

    # 8: the specialization order is a continuous lattice
    if P is None:
        report.add(Check(CLAIMS[7], SKIPPED, reason="space is not T0"))
    elif not is_complete_lattice(P):
        report.add(Check(CLAIMS[7], FAIL, witness={"reason": "not a complete lattice"}))
    else:
        fail = None
        if not is_continuous_lattice(P):
            fail = {"reason": "some x is not the sup of waydown(x)"}
        else:
            for i in range(X.n):
                k = fs.index(principal_filter(X, 1 << i))
                if P.sup_i(_v_down_m(P, fs.filters[k])) != i:
                    fail = {"x": X.points[i], "reason": "x is not sup v_down([x])"}
                    break
        report.add(verdict(CLAIMS[7], fail))
    return report


def _image_mask(r: Sequence[int], ks: Iterable[int]) -> int:
    m = 0
    for k in ks:
        m |= 1 << r[k]
    return m


def _common_upper(fs: FilterSpace, F: int) -> int:
    m = (1 << len(fs)) - 1
    for k in bits(F):
        m &= fs.inclusion_up[k]
    return m


def _is_least_upper(fs: FilterSpace, F: int, ku: int) -> bool:
    common = _common_upper(fs, F)
    return bool(common >> ku & 1) and fs.inclusion_up[ku] & common == common


def check_sup_of_principal_lower_bounds(P: FinitePoset) -> bool:
    """Whether ``x = sup v_down([x])`` for every x on the Scott space of ``P``.

    For a complete lattice this is equivalent to continuity; disagreement
    with :func:`is_continuous_lattice` raises.
    """
    if not is_complete_lattice(P):
        raise NotCompleteLattice("poset is not a complete lattice")
    X = scott_space(P)
    holds = all(P.sup_i(_v_down_m(P, principal_filter(X, 1 << i))) == i for i in range(P.n))
    if holds != is_continuous_lattice(P):
        raise AssertionError("sup of principal lower bounds disagrees with continuity")
    return holds


def _search_chunk(X: FiniteSpace, first_values: Sequence[int], max_phi2: int) -> list[tuple[int, ...]]:
    T = FilterTower(X, max_phi2, None)
    eta = T.eta_X
    fixed = {eta[i]: i for i in range(X.n)}
    free = [k for k in range(len(T.F1)) if k not in fixed]
    found = []
    rest = free[1:]
    for first in first_values:
        for values in itertools.product(range(X.n), repeat=len(rest)):
            r = [0] * len(T.F1)
            for k, i in fixed.items():
                r[k] = i
            if free:
                r[free[0]] = first
            for k, i in zip(rest, values):
                r[k] = i
            if is_algebra(T, r):
                found.append(tuple(r))
    return found


def candidate_count(X: FiniteSpace, T: FilterTower | None = None) -> int:
    T = _tower(X, T)
    return X.n ** len(T.F1)


def structure_search(
    X: FiniteSpace,
    *,
    jobs: int = 1,
    max_candidates: int | None = None,
    tower: FilterTower | None = None,
) -> list[PhiAlgebra]:
    """Every structure map on ``X``, by enumerating total maps from its filters.

    Maps violating the unit law are never generated, since it fixes ``r`` on
    the principal point filters. Results come back in lexicographic order of
    the assignment whatever ``jobs`` is.
    """
    if not is_T0(X):
        raise NotT0("structure search needs a T0 space")
    T = _tower(X, tower)
    bound = config.max_candidates() if max_candidates is None else max_candidates
    total = candidate_count(X, T)
    if total > bound:
        raise FeasibilityExceeded("candidate structure maps", total, bound)
    n_free = len(T.F1) - X.n
    if X.n == 0:
        return []
    if n_free == 0 or jobs <= 1:
        found = _search_chunk(X, range(X.n) if n_free else [0], T.max_phi2)
    else:
        chunks = [[i] for i in range(X.n)]
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_search_chunk, [X] * len(chunks), chunks, [T.max_phi2] * len(chunks)))
        found = [r for part in parts for r in part]
    return [PhiAlgebra(X, T.F1, r) for r in sorted(found)]


def roundtrip_check(P: FinitePoset, *, tower: FilterTower | None = None) -> bool:
    alg = r_from_lattice(P, tower=tower)
    Q, report = lattice_from_algebra(alg)
    suite = check_theorem_suite(alg, tower=tower)
    return Q.elements == P.elements and Q.up == P.up and report.all_passed and suite.all_passed


def single_corruptions(alg: PhiAlgebra):
    """Each map differing from ``alg.r`` in exactly one entry."""
    for k, x in enumerate(alg.r):
        for y in range(alg.space.n):
            if y != x:
                r = list(alg.r)
                r[k] = y
                yield k, tuple(r)


def mutation_survivors(alg: PhiAlgebra, *, tower: FilterTower | None = None) -> tuple[int, list[tuple[int, ...]]]:
    """Count single-entry corruptions and return those that still pass every algebra check."""
    T = tower or FilterTower(alg.space, config.max_phi2(), None)
    total, survivors = 0, []
    for _, r in single_corruptions(alg):
        total += 1
        if check_algebra(alg.space, r, tower=T).all_passed:
            survivors.append(r)
    return total, survivors


def algebra_from_entries(X: FiniteSpace, entries: Iterable[tuple[OpenFilter, object]], *,
                         tower: FilterTower | None = None) -> PhiAlgebra:
    """Build a (not yet verified) algebra from explicit (filter, point) pairs."""
    T = _tower(X, tower)
    fs = T.F1
    r: list[int | None] = [None] * len(fs)
    for v, p in entries:
        k = fs.index(v)
        if r[k] is not None:
            raise ValueError(f"filter {describe_filter(X, v)} is listed twice")
        r[k] = X.index(p)
    missing = [describe_filter(X, fs.filters[k]) for k, x in enumerate(r) if x is None]
    if missing:
        raise ValueError(f"map is not total; no image for filters {missing}")
    return PhiAlgebra(X, fs, tuple(r))
