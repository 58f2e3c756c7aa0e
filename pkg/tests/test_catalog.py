import pytest

from ofm.catalog import (
    catalog_posets,
    catalog_spaces,
    count_by_size,
    homeomorphic,
    poset_canonical_form,
    poset_counts_brute_force,
    space_counts_brute_force,
)
from ofm.order import validate_poset
from ofm.topology import is_T0

# Known sequence values: posets, lattices, topologies and T0 topologies on n points.
POSETS = {1: 1, 2: 2, 3: 5, 4: 16, 5: 63}
LATTICES = {1: 1, 2: 1, 3: 1, 4: 2, 5: 5}
TOPOLOGIES = {1: 1, 2: 3, 3: 9, 4: 33}
T0 = {1: 1, 2: 2, 3: 5, 4: 16}
LABELLED_POSETS = {1: 1, 2: 3, 3: 19, 4: 219}
LABELLED_TOPOLOGIES = {1: 1, 2: 4, 3: 29, 4: 355}


def test_poset_counts():
    assert count_by_size(catalog_posets(5)) == POSETS
    assert poset_counts_brute_force(5) == POSETS


def test_lattice_counts():
    assert count_by_size(catalog_posets(5, complete_lattice=True)) == LATTICES
    assert poset_counts_brute_force(5, complete_lattice=True) == LATTICES


def test_labelled_poset_counts():
    assert count_by_size(catalog_posets(4, up_to_iso=False)) == LABELLED_POSETS
    assert poset_counts_brute_force(4, up_to_iso=False) == LABELLED_POSETS


def test_space_counts():
    assert count_by_size(catalog_spaces(4)) == TOPOLOGIES
    assert count_by_size(catalog_spaces(4, t0=True)) == T0
    assert space_counts_brute_force(4) == TOPOLOGIES
    assert space_counts_brute_force(4, t0=True) == T0


def test_labelled_space_counts():
    assert count_by_size(catalog_spaces(3, up_to_iso=False)) == {1: 1, 2: 4, 3: 29}
    assert space_counts_brute_force(4, up_to_iso=False) == LABELLED_TOPOLOGIES
    # labelled T0 topologies are exactly labelled partial orders
    assert space_counts_brute_force(4, t0=True, up_to_iso=False) == LABELLED_POSETS


def test_catalog_is_deterministic():
    assert [P.up for P in catalog_posets(4)] == [P.up for P in catalog_posets(4)]
    assert [X.opens for X in catalog_spaces(3)] == [X.opens for X in catalog_spaces(3)]


def test_catalog_has_no_isomorphic_duplicates():
    spaces = catalog_spaces(3)
    for i, X in enumerate(spaces):
        for Y in spaces[i + 1:]:
            assert not homeomorphic(X, Y)
    forms = [poset_canonical_form(P.up) for P in catalog_posets(4)]
    assert len(forms) == len(set(forms))


def test_canonical_form_ignores_labels():
    a = validate_poset(["x", "y", "z"], [("x", "y")])
    b = validate_poset(["x", "y", "z"], [("z", "x")])
    assert poset_canonical_form(a.up) == poset_canonical_form(b.up)


@pytest.mark.parametrize("X", catalog_spaces(3, t0=True))
def test_t0_flag_filters(X):
    assert is_T0(X)
