"""The full exhaustive verification run over the desk-scale catalogs.

Each ``criterion_*`` function returns one :class:`~ofm.report.Check`;
:func:`run_suite` collects them into a report whose JSON form is
byte-stable across runs and across ``jobs`` settings.
"""

from __future__ import annotations

from ofm import config
from ofm.algebra import (
    CLAIMS,
    check_algebra,
    check_theorem_suite,
    lattice_from_algebra,
    mutation_survivors,
    r_from_lattice,
    roundtrip_check,
    structure_search,
)
from ofm.catalog import catalog_posets, catalog_spaces, homeomorphic
from ofm.filters import FilterTower, a_tilde, a_v, check_monad_laws, mu
from ofm.order import FinitePoset, bits, is_complete_lattice, scott_open_masks, subset_key
from ofm.report import FAIL, PASS, Check, Report
from ofm.topology import FeasibilityExceeded, FiniteSpace, all_maps, scott_space, specialization_order

SIERPINSKI = FiniteSpace(("0", "1"), (0b00, 0b10, 0b11))
POINT = FiniteSpace(("p",), (0, 1))
DISCRETE2 = FiniteSpace(("a", "b"), (0b00, 0b01, 0b10, 0b11))


def _result(name: str, failures: list, **stats) -> Check:
    if failures:
        return Check(name, FAIL, witness={"failures": failures[:10], "count": len(failures)}, stats=stats)
    return Check(name, PASS, stats=stats)


def _space_id(X: FiniteSpace) -> dict:
    return {"points": list(X.points), "opens": [X.sorted_members(o) for o in X.opens]}


def _poset_id(P: FinitePoset) -> dict:
    return {"elements": list(P.elements), "covers": [list(c) for c in P.covers()]}


def lattice_catalog(max_size: int = config.MAX_POSET_SIZE) -> list[FinitePoset]:
    return catalog_posets(max_size, complete_lattice=True)


def criterion_monad_laws(max_small: int = 2, max_large: int = 3) -> Check:
    """Monad laws on every T0 space up to ``max_large`` points, naturality over
    all continuous maps between those spaces."""
    small = catalog_spaces(max_small, t0=True)
    large = [X for X in catalog_spaces(max_large, t0=True) if X.n > max_small]
    named = [SIERPINSKI, POINT]
    spaces = named + small + large
    codomains = small + large
    failures, skipped, laws, maps = [], [], 0, 0
    towers: dict = {}
    phi2, phi3 = config.max_phi2(), config.max_phi3()
    for X in spaces:
        test_maps = [f for Y in codomains for f in all_maps(X, Y)]
        try:
            report = check_monad_laws(X, test_maps, max_phi2=phi2, max_phi3=phi3, towers=towers)
        except FeasibilityExceeded as e:
            if X.n <= max_small:
                failures.append({"space": _space_id(X), "error": str(e)})
            else:
                skipped.append({"space": _space_id(X), "reason": str(e)})
            continue
        laws += len(report.checks)
        maps += len(test_maps)
        for c in report.checks:
            if not c.ok:
                failures.append({"space": _space_id(X), "law": c.name, "witness": c.witness})
    return _result("monad laws", failures, spaces=len(spaces), maps=maps, laws_checked=laws,
                   skipped_over_ceiling=len(skipped))


def criterion_direction_one(lattices: list[FinitePoset] | None = None) -> Check:
    lattices = lattice_catalog() if lattices is None else lattices
    failures = []
    for P in lattices:
        X = scott_space(P)
        T = FilterTower(X, config.max_phi2(), None)
        try:
            alg = r_from_lattice(P, tower=T)
        except AssertionError as e:
            failures.append({"lattice": _poset_id(P), "error": str(e)})
            continue
        laws = check_algebra(X, alg.r, tower=T)
        suite = check_theorem_suite(alg, tower=T)
        for c in laws.checks + [suite[CLAIMS[0]], suite[CLAIMS[1]]]:
            if not c.ok:
                failures.append({"lattice": _poset_id(P), "check": c.name, "status": c.status,
                                 "witness": c.witness})
    return _result("lattice to algebra", failures, lattices=len(lattices))


def criterion_direction_two(lattices: list[FinitePoset] | None = None) -> Check:
    lattices = lattice_catalog() if lattices is None else lattices
    failures = []
    for P in lattices:
        X = scott_space(P)
        T = FilterTower(X, config.max_phi2(), None)
        alg = r_from_lattice(P, tower=T)
        suite = check_theorem_suite(alg, tower=T)
        for c in suite.checks:
            if not c.ok:
                failures.append({"lattice": _poset_id(P), "claim": c.name, "status": c.status,
                                 "witness": c.witness, "reason": c.reason})
        Q, rep = lattice_from_algebra(alg)
        if not rep.all_passed or Q.up != P.up or Q.elements != P.elements:
            failures.append({"lattice": _poset_id(P), "claim": "order recovered"})
        if not roundtrip_check(P, tower=T):
            failures.append({"lattice": _poset_id(P), "claim": "roundtrip"})
    return _result("algebra to lattice", failures, lattices=len(lattices),
                   claims_per_algebra=len(CLAIMS))


def criterion_correspondence(max_points: int = 3, jobs: int = 1) -> Check:
    failures, rows = [], []
    for X in catalog_spaces(max_points, t0=True):
        try:
            algs = structure_search(X, jobs=jobs)
        except FeasibilityExceeded as e:
            rows.append({"space": _space_id(X), "skipped": str(e)})
            continue
        P = specialization_order(X)
        lattice = is_complete_lattice(P)
        scott = tuple(scott_open_masks(P)) == X.opens
        expected = 1 if lattice and scott else 0
        rows.append({"points": X.n, "opens": len(X.opens), "algebras": len(algs)})
        if len(algs) != expected:
            failures.append({"space": _space_id(X), "found": len(algs), "expected": expected})
        for alg in algs:
            if not homeomorphic(scott_space(P), X) or check_theorem_suite(alg).failures:
                failures.append({"space": _space_id(X), "reason": "found algebra fails the suite"})
    named = {"sierpinski": (SIERPINSKI, 1), "discrete2": (DISCRETE2, 0), "point": (POINT, 1)}
    for name, (X, want) in named.items():
        got = len(structure_search(X, jobs=jobs))
        if got != want:
            failures.append({"space": name, "found": got, "expected": want})
    return _result("structure search correspondence", failures, spaces=len(rows), table=rows)


def _upper_set_masks(P: FinitePoset) -> list[int]:
    # independent of ideals: closure under going up, read straight off the relation
    out = []
    for s in range(1 << P.n):
        if all(not (s >> i & 1) or all(s >> j & 1 for j in range(P.n) if P.leq_i(i, j))
               for i in range(P.n)):
            out.append(s)
    return sorted(out, key=subset_key)


def criterion_way_below(max_size: int = config.MAX_POSET_SIZE) -> Check:
    posets = catalog_posets(max_size)
    failures, pairs = [], 0
    for P in posets:
        for j in range(P.n):
            for i in range(P.n):
                pairs += 1
                if bool(P.way_below_m[j] >> i & 1) != P.leq_i(i, j):
                    failures.append({"poset": _poset_id(P), "x": P.elements[i], "y": P.elements[j]})
        if scott_open_masks(P) != _upper_set_masks(P):
            failures.append({"poset": _poset_id(P), "reason": "Scott opens differ from upper sets"})
    return _result("way-below and Scott opens", failures, posets=len(posets), pairs=pairs)


def valid_algebras() -> list:
    """Algebras on catalog spaces with at least two points, deduplicated by space and map."""
    found = []
    for P in lattice_catalog():
        if P.n >= 2:
            found.append(r_from_lattice(P))
    for X in catalog_spaces(3, t0=True):
        if X.n >= 2:
            found.extend(structure_search(X))
    return found


def criterion_mutation() -> Check:
    failures, total, algebras = [], 0, 0
    for alg in valid_algebras():
        algebras += 1
        n, survivors = mutation_survivors(alg)
        total += n
        for r in survivors:
            failures.append({"space": _space_id(alg.space), "original": list(alg.r), "mutant": list(r)})
    return _result("mutation sensitivity", failures, algebras=algebras, mutants=total)


def composite_spaces() -> list[FiniteSpace]:
    spaces = list(catalog_spaces(config.MAX_SPACE_SIZE, t0=True))
    spaces += [scott_space(P) for P in lattice_catalog()]
    return spaces


def criterion_composites(limit: int = config.DIRECTED_FAMILY_LIMIT) -> Check:
    from ofm.algebra import _directed_families

    failures = []
    families = filters_checked = 0
    regimes = {}
    for X in composite_spaces():
        T = FilterTower(X, config.max_phi2(), None)
        fs = T.F1
        regime, fams = _directed_families(fs, limit)
        regimes[regime] = regimes.get(regime, 0) + 1
        for F in fams:
            families += 1
            fam = fs.family(F)
            union = frozenset().union(*fam)
            at = a_tilde(fs, fam)
            if at not in T.F2.position or mu(fs, at) != union:
                failures.append({"space": _space_id(X), "family": bits(F)})
        for k, v in enumerate(fs.filters):
            filters_checked += 1
            if frozenset().union(*a_v(X, v)) != v:
                failures.append({"space": _space_id(X), "filter": k})
    return _result("directed-family composites", failures, spaces=len(composite_spaces()),
                   families=families, filters=filters_checked,
                   regimes=dict(sorted(regimes.items())))


CRITERIA = (
    ("monad_laws", criterion_monad_laws),
    ("lattice_to_algebra", criterion_direction_one),
    ("algebra_to_lattice", criterion_direction_two),
    ("correspondence", criterion_correspondence),
    ("way_below_oracle", criterion_way_below),
    ("mutation", criterion_mutation),
    ("composites", criterion_composites),
)


def run_suite(jobs: int = 1) -> Report:
    report = Report(key="criterion")
    for name, fn in CRITERIA:
        check = fn(jobs=jobs) if name == "correspondence" else fn()
        check.name = name
        report.add(check)
    return report
