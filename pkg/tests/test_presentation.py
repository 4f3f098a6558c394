import pytest
from hypothesis import given, strategies as st
from sympy.combinatorics.fp_groups import FpGroup, coset_enumeration_r
from sympy.combinatorics.free_groups import free_group

from wagoner.presentation import (Presentation, cyclic_reduce, free_reduce, group_order, invert,
                                  reidemeister_schreier, tietze_reduce, todd_coxeter)


def pres(text):
    return Presentation.from_text(text)


def test_cyclic_group():
    assert group_order(pres("generators: a\na a a a a\n")) == 5


def test_s3():
    p = pres("generators: a b\na a\nb b\na b a b a b\n")
    assert group_order(p) == 6


def test_infinite_dihedral_overflows():
    t = todd_coxeter(pres("generators: a b\na a\nb b\n"), cap=1000)
    assert t.status == "overflow" and t.index is None


def test_cap_must_be_positive():
    with pytest.raises(ValueError):
        todd_coxeter(pres("generators: a\na\n"), cap=0)


def test_text_round_trip():
    p = pres("generators: x y\nx x^-1 y y\ny^-1 x y x\n")
    assert p.relators == [(2, 2), (-2, 1, 2, 1)]
    assert Presentation.from_text(p.to_text()).relators == p.relators
    with pytest.raises(ValueError):
        pres("generators: x\nz\n")
    with pytest.raises(ValueError):
        pres("x x\n")


def test_word_helpers():
    assert free_reduce((1, 2, -2, -1, 3)) == (3,)
    assert cyclic_reduce((-1, 2, 3, 1)) == (2, 3)
    assert invert((1, -2)) == (2, -1)


def test_abelian_invariants():
    assert pres("generators: a b\na a\nb b b\n").abelian_invariants() == [6]
    assert pres("generators: a b\n").abelian_invariants() == [0, 0]
    assert pres("generators: a b\na b a^-1 b^-1\n").abelian_invariants() == [0, 0]


def test_subgroup_index():
    p = pres("generators: a b\na a\nb b\na b a b a b\n")
    t = todd_coxeter(p, subgroup=[p.word("a")])
    assert t.index == 3
    for r in p.relators:
        assert (t.permutation(r) == range(3)).all()


def test_reidemeister_schreier_of_index_two():
    # S_3 has the cyclic group of order 3 as its index-2 subgroup
    p = pres("generators: a b\na a\nb b\na b a b a b\n")
    t = todd_coxeter(p, subgroup=[p.word("a", "b")])
    assert t.index == 2
    sub = reidemeister_schreier(p, t)
    assert group_order(tietze_reduce(sub).presentation) == 3


def test_tietze_keeps_order():
    p = pres("generators: a b c\nc^-1 a b\na a a a\nb b\na b a^-1 b\n")
    red = tietze_reduce(p)
    assert red.presentation.ngens < p.ngens
    assert group_order(red.presentation) == group_order(p) == 8


def test_determinism():
    p = pres("generators: a b\na a a\nb b b\na b a b\n")
    assert todd_coxeter(p).digest() == todd_coxeter(p).digest()


# ----------------------------------------------------------------------
# sympy as an external coset enumerator

small_rel = st.lists(st.sampled_from([1, 2, -1, -2]), min_size=1, max_size=8)


def _sympy_order(p):
    F, a, b = free_group("a b")
    gens = [a, b]
    rels = []
    for r in p.relators:
        w = F.identity
        for x in r:
            w = w * (gens[abs(x) - 1] if x > 0 else gens[abs(x) - 1] ** -1)
        rels.append(w)
    try:
        table = coset_enumeration_r(FpGroup(F, rels), [], max_cosets=5000)
    except ValueError:
        return None
    table.compress()
    return len(table.table)


@given(st.integers(2, 5), st.integers(2, 5), st.lists(small_rel, max_size=2))
def test_orders_agree_with_sympy(m, n, extra):
    rels = [(1,) * m, (2,) * n, (1, 2) * 2] + [tuple(r) for r in extra]
    p = Presentation(["a", "b"], rels)
    t = todd_coxeter(p, cap=5000)
    other = _sympy_order(p)
    if t.complete and other is not None:
        assert t.index == other


@given(st.lists(small_rel, min_size=2, max_size=4))
def test_table_satisfies_relators(rels):
    p = Presentation(["a", "b"], [(1, 1, 1), (2, 2)] + [tuple(r) for r in rels])
    t = todd_coxeter(p, cap=5000)
    if t.complete:
        for r in p.relators:
            assert (t.permutation(r) == range(t.index)).all()
        assert todd_coxeter(p, cap=5000).table == t.table
