"""Small posets and spaces, one representative per isomorphism class.

Two generators per kind, so catalog counts can be cross-checked:

* posets: adjoining a new maximal element above a lower set (primary), versus
  filtering every strict relation compatible with the position order;
* spaces: filtering every family of subsets for the topology axioms
  (primary), versus the up-set topologies of all preorders.
"""

from __future__ import annotations

from itertools import combinations, permutations, product

from ofm.order import FinitePoset, bits, is_complete_lattice, subset_key
from ofm.topology import FiniteSpace, is_T0


def _permute_mask(mask: int, perm: tuple[int, ...]) -> int:
    out = 0
    for i in bits(mask):
        out |= 1 << perm[i]
    return out


def poset_canonical_form(up: tuple[int, ...]) -> tuple[int, ...]:
    """Lexicographically least relabelled up-mask tuple over all permutations."""
    n = len(up)
    best = None
    for perm in permutations(range(n)):
        new = [0] * n
        for i in range(n):
            new[perm[i]] = _permute_mask(up[i], perm)
        cand = tuple(new)
        if best is None or cand < best:
            best = cand
    return best


def space_canonical_form(n: int, opens) -> tuple[int, ...]:
    """Least sorted tuple of relabelled opens over all point permutations."""
    best = None
    for perm in permutations(range(n)):
        cand = tuple(sorted(_permute_mask(o, perm) for o in opens))
        if best is None or cand < best:
            best = cand
    return best


def _labels(n: int) -> tuple[str, ...]:
    return tuple(str(i) for i in range(n))


def _lower_sets(up: tuple[int, ...]) -> list[int]:
    n = len(up)
    down = [0] * n
    for i in range(n):
        for j in bits(up[i]):
            down[j] |= 1 << i
    return [s for s in range(1 << n) if all(down[i] & ~s == 0 for i in bits(s))]


def _posets_by_extension(max_size: int) -> dict[int, set[tuple[int, ...]]]:
    levels = {0: {()}}
    for n in range(1, max_size + 1):
        forms = set()
        new = n - 1
        for up in levels[n - 1]:
            for below in _lower_sets(up):
                ext = [m | (1 << new) if below >> i & 1 else m for i, m in enumerate(up)]
                ext.append(1 << new)
                forms.add(poset_canonical_form(tuple(ext)))
        levels[n] = forms
    return levels


def _posets_brute_force(n: int, labelled: bool = False) -> set[tuple[int, ...]]:
    """Up to isomorphism it is enough to try relations compatible with the
    position order, since every poset has a linear extension."""
    if labelled:
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    else:
        pairs = list(combinations(range(n), 2))
    forms = set()
    for choice in product((0, 1), repeat=len(pairs)):
        up = [1 << i for i in range(n)]
        for (i, j), c in zip(pairs, choice):
            if c:
                up[i] |= 1 << j
        if not all(up[j] & ~up[i] == 0 for i in range(n) for j in bits(up[i])):
            continue
        if labelled:
            if any(up[j] >> i & 1 for i in range(n) for j in bits(up[i]) if j != i):
                continue
            forms.add(tuple(up))
        else:
            forms.add(poset_canonical_form(tuple(up)))
    return forms


def _poset_orbit(up: tuple[int, ...]) -> set[tuple[int, ...]]:
    n = len(up)
    orbit = set()
    for perm in permutations(range(n)):
        new = [0] * n
        for i in range(n):
            new[perm[i]] = _permute_mask(up[i], perm)
        orbit.add(tuple(new))
    return orbit


def catalog_posets(max_size: int, *, complete_lattice: bool = False,
                   up_to_iso: bool = True) -> list[FinitePoset]:
    """Posets of size 1..max_size, ordered by size then canonical form.

    With ``up_to_iso`` false every labelling of each class is listed.
    """
    levels = _posets_by_extension(max_size)
    out = []
    for n in range(1, max_size + 1):
        forms = levels[n]
        if not up_to_iso:
            forms = set().union(*(_poset_orbit(f) for f in forms))
        for form in sorted(forms):
            P = FinitePoset(_labels(n), form)
            if complete_lattice and not is_complete_lattice(P):
                continue
            out.append(P)
    return out


def poset_counts_brute_force(max_size: int, *, complete_lattice: bool = False,
                             up_to_iso: bool = True) -> dict[int, int]:
    counts = {}
    for n in range(1, max_size + 1):
        forms = _posets_brute_force(n, labelled=not up_to_iso)
        if complete_lattice:
            forms = {f for f in forms if is_complete_lattice(FinitePoset(_labels(n), f))}
        counts[n] = len(forms)
    return counts


def _topologies(n: int):
    full = (1 << n) - 1
    middle = [m for m in range(1, full)]
    for choice in product((0, 1), repeat=len(middle)):
        opens = {0, full} | {m for m, c in zip(middle, choice) if c}
        if all(a | b in opens and a & b in opens for a in opens for b in opens):
            yield opens


def catalog_spaces(max_size: int, *, t0: bool = False, up_to_iso: bool = True) -> list[FiniteSpace]:
    """Spaces of size 1..max_size up to homeomorphism (or all labellings)."""
    out = []
    for n in range(1, max_size + 1):
        forms = set()
        for opens in _topologies(n):
            X = FiniteSpace(_labels(n), tuple(sorted(opens, key=subset_key)))
            if t0 and not is_T0(X):
                continue
            forms.add(space_canonical_form(n, opens) if up_to_iso else tuple(sorted(opens)))
        for form in sorted(forms):
            out.append(FiniteSpace(_labels(n), tuple(sorted(form, key=subset_key))))
    return out


def space_counts_brute_force(max_size: int, *, t0: bool = False, up_to_iso: bool = True) -> dict[int, int]:
    """Count via preorders: finite topologies are exactly the up-set topologies of preorders."""
    counts = {}
    for n in range(1, max_size + 1):
        pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
        forms = set()
        for choice in product((0, 1), repeat=len(pairs)):
            up = [1 << i for i in range(n)]
            for (i, j), c in zip(pairs, choice):
                if c:
                    up[i] |= 1 << j
            if not all(up[j] & ~up[i] == 0 for i in range(n) for j in bits(up[i])):
                continue
            if t0 and any(up[j] >> i & 1 for i in range(n) for j in bits(up[i]) if j != i):
                continue
            opens = [s for s in range(1 << n) if all(up[i] & ~s == 0 for i in bits(s))]
            forms.add(space_canonical_form(n, opens) if up_to_iso else tuple(sorted(opens)))
        counts[n] = len(forms)
    return counts


def count_by_size(items) -> dict[int, int]:
    counts: dict[int, int] = {}
    for x in items:
        counts[len(x)] = counts.get(len(x), 0) + 1
    return counts


def homeomorphic(X: FiniteSpace, Y: FiniteSpace) -> bool:
    return X.n == Y.n and space_canonical_form(X.n, X.opens) == space_canonical_form(Y.n, Y.opens)
