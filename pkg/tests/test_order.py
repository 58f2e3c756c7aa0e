import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from ofm.catalog import catalog_posets
from ofm.order import (
    AntisymmetryViolation,
    DuplicateElement,
    FinitePoset,
    NotCompleteLattice,
    UnknownElementInPair,
    check_interpolation_and_base,
    ideals,
    inf,
    is_complete_lattice,
    is_continuous_lattice,
    lower_bounds,
    scott_opens,
    sup,
    validate_poset,
    way_below,
    waydown,
    wayup,
)

SMALL = catalog_posets(4)
LATTICES = catalog_posets(5, complete_lattice=True)


@st.composite
def posets(draw, max_size=5):
    """Random posets: a random relation compatible with a random linear order."""
    n = draw(st.integers(1, max_size))
    order = draw(st.permutations(range(n)))
    pairs = [(order[i], order[j]) for i in range(n) for j in range(i + 1, n)
             if draw(st.booleans())]
    return validate_poset([f"e{i}" for i in range(n)], [(f"e{a}", f"e{b}") for a, b in pairs])


def test_validate_closes_transitively():
    P = validate_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    assert P.leq("a", "c")
    assert not P.leq("c", "a")
    assert P.covers() == [("a", "b"), ("b", "c")]


def test_validate_rejects_bad_input():
    with pytest.raises(AntisymmetryViolation):
        validate_poset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(AntisymmetryViolation):
        validate_poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("c", "a")])
    with pytest.raises(DuplicateElement):
        validate_poset(["a", "a"], [])
    with pytest.raises(UnknownElementInPair):
        validate_poset(["a"], [("a", "z")])


def test_ideals_of_chain(ch2):
    assert ideals(ch2) == [frozenset({"bot"}), frozenset({"bot", "top"})]


def test_ideals_of_antichain(antichain):
    # the whole antichain is a lower set but not directed
    assert ideals(antichain) == [frozenset({"a"}), frozenset({"b"})]


def test_sup_inf_examples(diamond, antichain):
    assert sup(diamond, ["a", "b"]) == "top"
    assert inf(diamond, ["a", "b"]) == "bot"
    assert sup(diamond, []) == "bot"
    assert inf(diamond, []) == "top"
    assert sup(antichain, ["a", "b"]) is None
    assert sup(antichain, []) is None


def test_complete_lattice_examples(ch2, diamond, antichain, singleton):
    assert is_complete_lattice(ch2)
    assert is_complete_lattice(diamond)
    assert is_complete_lattice(singleton)
    assert not is_complete_lattice(antichain)
    assert not is_complete_lattice(FinitePoset((), ()))


def test_way_below_examples(diamond):
    assert way_below(diamond, "bot", "top")
    assert way_below(diamond, "a", "a")
    assert not way_below(diamond, "a", "b")
    assert waydown(diamond, "a") == {"bot", "a"}
    assert wayup(diamond, "a") == {"a", "top"}


def test_continuous_lattice_requires_complete(antichain, diamond):
    assert is_continuous_lattice(diamond)
    with pytest.raises(NotCompleteLattice):
        is_continuous_lattice(antichain)
    with pytest.raises(NotCompleteLattice):
        check_interpolation_and_base(antichain)


def test_lower_bounds_example(diamond):
    assert lower_bounds(diamond, ["a", "b"]) == {"bot"}
    assert lower_bounds(diamond, []) == set(diamond.elements)


@pytest.mark.parametrize("P", SMALL, ids=lambda P: str(P.up))
def test_ideals_match_brute_force(P):
    assert set(ideals(P)) == oracles.ideals(P)


@pytest.mark.parametrize("P", SMALL, ids=lambda P: str(P.up))
def test_scott_opens_are_upper_sets(P):
    assert set(scott_opens(P)) == oracles.upper_sets(P)


@pytest.mark.parametrize("P", SMALL, ids=lambda P: str(P.up))
def test_way_below_is_order_on_finite_posets(P):
    for x in P.elements:
        for y in P.elements:
            assert way_below(P, x, y) == P.leq(x, y)


@pytest.mark.parametrize("P", LATTICES, ids=lambda P: str(P.up))
def test_interpolation_and_base_hold(P):
    rep = check_interpolation_and_base(P)
    assert rep.holds
    for (x, y), z in rep.interpolation.items():
        assert way_below(P, x, z) and way_below(P, z, y)
    assert rep.to_dict()["holds"] is True


@given(posets())
def test_sup_is_least_upper_bound(P):
    for S in oracles.powerset(P.elements):
        s = sup(P, S)
        ubs = [u for u in P.elements if all(P.leq(x, u) for x in S)]
        least = [u for u in ubs if all(P.leq(u, v) for v in ubs)]
        assert (s is None) == (not least)
        if s is not None:
            assert least == [s]


@given(posets())
def test_ideals_are_directed_lower_sets_with_principal_ones(P):
    found = ideals(P)
    for x in P.elements:
        assert frozenset(y for y in P.elements if P.leq(y, x)) in found
    for I in found:
        assert I and oracles.is_lower(P, I) and oracles.is_directed(P, I)


@given(posets(), st.data())
def test_lower_bounds_antitone_and_lower(P, data):
    A = frozenset(data.draw(st.sets(st.sampled_from(P.elements))))
    B = A | frozenset(data.draw(st.sets(st.sampled_from(P.elements))))
    assert lower_bounds(P, B) <= lower_bounds(P, A)
    assert oracles.is_lower(P, lower_bounds(P, A))


@given(posets())
def test_complete_lattice_agrees_with_brute_force(P):
    def least_upper(S):
        ubs = frozenset(u for u in P.elements if all(P.leq(x, u) for x in S))
        return oracles.minimum(P, ubs)

    def greatest_lower(S):
        lbs = frozenset(u for u in P.elements if all(P.leq(u, x) for x in S))
        return oracles.maximum(P, lbs)

    every = all(least_upper(S) is not None and greatest_lower(S) is not None
                for S in oracles.powerset(P.elements))
    assert is_complete_lattice(P) == every


@settings(max_examples=50)
@given(posets())
def test_equality_and_hash_follow_structure(P):
    Q = FinitePoset(tuple(P.elements), tuple(P.up))
    assert P == Q and hash(P) == hash(Q)
