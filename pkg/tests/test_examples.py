"""Small worked examples, each computed independently by hand."""

from ofm.filters import FilterTower, a_tilde, a_v, filter_space, is_open_filter, mu, principal_filter
from ofm.io import filters_dot, hasse_dot
from ofm.topology import scott_space, specialization_order


def test_two_singletons_do_not_form_a_filter(disc2):
    fam = {disc2.full, disc2.mask(["a"]), disc2.mask(["b"])}
    assert not is_open_filter(disc2, fam)


def test_principal_filter_of_incomparable_pair(diamond):
    X = scott_space(diamond)
    assert len(X.opens) == 6
    got = {X.members(o) for o in principal_filter(X, X.mask(["a", "b"]))}
    assert got == {frozenset({"a", "b", "top"}), frozenset(X.points)}


def test_filter_space_of_sierpinski_is_a_chain(sier):
    fs = filter_space(sier)
    Q = specialization_order(fs.topology)
    f0, f1, fe = fs.filters
    assert Q.leq(f0, f1) and Q.leq(f1, fe) and not Q.leq(fe, f0)


def test_mu_of_improper_filter_is_improper(sier):
    T = FilterTower(sier, 10_000, None)
    improper2 = max(T.F2.filters, key=len)
    assert mu(T.F1, improper2) == frozenset(sier.opens)


def test_a_tilde_examples(sier):
    T = FilterTower(sier, 10_000, None)
    fs = T.F1
    f0, f1, fe = fs.filters
    whole, upper, top = fs.topology.full, fs.members_mask([f1, fe]), fs.members_mask([fe])
    assert a_tilde(fs, [f1]) == {whole, upper}
    assert a_tilde(fs, [f0, f1]) == {whole, upper}
    assert a_tilde(fs, [f0, f1, fe]) == {whole, upper, top}
    assert mu(fs, a_tilde(fs, [f0, f1, fe])) == fe


def test_a_v_of_improper_filter(sier):
    fe = frozenset(sier.opens)
    assert len(a_v(sier, fe)) == 3
    assert frozenset().union(*a_v(sier, fe)) == fe


def test_dot_graph_sizes(diamond, sier):
    dot = hasse_dot(diamond)
    assert dot.count("[label=") == 4 and dot.count("->") == 4
    dot = filters_dot(sier, filter_space(sier, with_topology=False))
    assert dot.count("[label=") == 3 and dot.count("->") == 2
