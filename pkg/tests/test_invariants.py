import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from topact.catalog import all_monoids, cyclic, left_zeros, two_idempotents
from topact.congruences import (enumerate_filters, filter_generated,
                                full_filter, open_congruences, total)
from topact.invariants import (BadCategory, MonogenicHomFlags, NoZeroElement,
                               categories_equivalent,
                               classify_monogenic, dense_units, is_atomic,
                               joint_covering, make_category, monogenic_homs,
                               monogenic_homs_bruteforce, monogenic_orbit,
                               monoids_isomorphic, morita_fingerprint, principal_site,
                               relabeled_category, strict_joint_covering,
                               zero_fixed_point_check)
from topact.topology import discrete_topology


def terminal_category():
    return make_category(["*"], [("id", 0, 0)], lambda f, g: 0, [0], [0], [0])


def poset_category(relations, n):
    """Category of a poset given by a reflexive transitive relation list."""
    arrows = [(f"{a}<={b}", a, b) for a in range(n) for b in range(n)
              if relations[a][b]]
    index = {(a, b): i for i, (_, a, b) in enumerate(arrows)}

    def compose(f, g):
        return index[(arrows[f][1], arrows[g][2])]

    identities = [index[(a, a)] for a in range(n)]
    every = list(range(len(arrows)))
    return make_category([str(i) for i in range(n)], arrows, compose,
                         identities, every, every)


def test_terminal_site(m_lz):
    flt = filter_generated(m_lz, [total(m_lz)])
    site = principal_site(m_lz, flt)
    assert len(site.objects) == 1 and site.arrow_count == 1


def test_c4_full_site(c4):
    site = principal_site(c4, full_filter(c4))
    assert len(site.objects) == 3
    delta = site.objects.index("0|1|2|3")
    endos = [f for f in range(site.arrow_count)
             if site.arrow_src[f] == delta and site.arrow_tgt[f] == delta]
    assert len(endos) == 4


def test_left_zero_site_structure(m_lz, tau_a):
    site = principal_site(m_lz, open_congruences(m_lz, tau_a))
    assert len(site.objects) == 2 and site.arrow_count == 5


def test_identity_and_composition_laws_hold_on_all_small_sites():
    for monoid in all_monoids(3):
        for flt in enumerate_filters(monoid):
            principal_site(monoid, flt)  # validate_category runs inside


def test_fingerprint_terminal():
    fp = morita_fingerprint(terminal_category())
    assert fp.object_count == 1
    assert fp.matrix == (((1, 1, 1),),)
    assert fp.has_terminal


def test_fingerprint_relabeling_invariance(c4, m_lz, tau_a):
    sites = [principal_site(c4, full_filter(c4)),
             principal_site(m_lz, open_congruences(m_lz, tau_a))]
    for site in sites:
        fp = morita_fingerprint(site)
        for seed in range(12):
            shuffled = relabeled_category(site, random.Random(seed))
            assert morita_fingerprint(shuffled) == fp


@settings(max_examples=30)
@given(st.integers(0, 10_000))
def test_fingerprint_relabeling_invariance_random(seed):
    monoid = left_zeros()
    site = principal_site(monoid, full_filter(monoid))
    shuffled = relabeled_category(site, random.Random(seed))
    assert morita_fingerprint(shuffled) == morita_fingerprint(site)


def test_equivalence_to_itself(c4):
    site = principal_site(c4, full_filter(c4))
    assert categories_equivalent(site, site).kind == "yes"


def test_terminal_vs_two_object_discrete():
    two = make_category(["a", "b"], [("ida", 0, 0), ("idb", 1, 1)],
                        lambda f, g: f, [0, 1], [0, 1], [0, 1])
    verdict = categories_equivalent(terminal_category(), two)
    assert verdict.kind == "no"


def test_split_site_equivalent_to_discrete_two_idempotents(m_lz, tau_a, b2):
    site1 = principal_site(m_lz, open_congruences(m_lz, tau_a))
    site2 = principal_site(b2, full_filter(b2))
    verdict = categories_equivalent(site1, site2)
    assert verdict.kind == "yes"


def test_skeleton_collapse_detects_equivalence():
    # a category with two isomorphic objects is equivalent to the terminal one
    arrows = [("ida", 0, 0), ("idb", 1, 1), ("f", 0, 1), ("g", 1, 0)]
    table = {
        (0, 0): 0, (0, 2): 2, (1, 1): 1, (1, 3): 3,
        (2, 1): 2, (2, 3): 0, (3, 0): 3, (3, 2): 1,
    }
    cat = make_category(["a", "b"], arrows, lambda f, g: table[(f, g)],
                        [0, 1], [0, 1, 2, 3], [0, 1, 2, 3])
    assert categories_equivalent(cat, terminal_category()).kind == "yes"


def test_joint_covering_terminal():
    assert joint_covering(terminal_category())
    assert strict_joint_covering(terminal_category())


def test_joint_covering_of_sites():
    for monoid in all_monoids(3):
        for flt in enumerate_filters(monoid):
            site = principal_site(monoid, flt)
            assert joint_covering(site)
            assert strict_joint_covering(site)


def test_joint_covering_of_order_four_sites():
    for monoid in all_monoids(4):
        for flt in enumerate_filters(monoid):
            site = principal_site(monoid, flt)
            assert joint_covering(site)
            assert strict_joint_covering(site)


def test_joint_covering_fails_for_forked_poset():
    # three objects, two maximal incomparable, no common lower bound for them
    rel = [[True, True, False], [False, True, False], [False, False, True]]
    cat = poset_category(rel, 3)
    assert not joint_covering(cat)


def test_is_atomic_group(c4):
    verdict, witness = is_atomic(c4, full_filter(c4))
    assert verdict and witness is None


def test_is_atomic_truncated_addition(n2):
    verdict, _ = is_atomic(n2, filter_generated(n2, [total(n2)]))
    assert verdict
    verdict, witness = is_atomic(n2, full_filter(n2))
    assert not verdict
    r, m = witness
    # the witness is a genuine counterexample: m never becomes invertible mod r
    one = r.class_of[n2.identity]
    assert all(r.class_of[n2.table[m][k]] != one for k in range(3))
    # the diagonal in particular fails at m = 1
    assert not is_atomic(n2, full_filter(n2))[0]


def test_is_atomic_left_zero(m_lz, tau_a):
    verdict, witness = is_atomic(m_lz, open_congruences(m_lz, tau_a))
    assert not verdict
    r, m = witness
    assert r.label() == "1|x,y" and m == 1


def test_dense_units(c4, n2, m_lz, tau_a):
    assert dense_units(c4, discrete_topology(4))
    assert not dense_units(n2, discrete_topology(3))
    assert not dense_units(m_lz, tau_a)


def test_zero_fixed_point(n2, c2, one):
    for flt in enumerate_filters(n2):
        assert zero_fixed_point_check(n2, flt)
    assert zero_fixed_point_check(one, full_filter(one))
    with pytest.raises(NoZeroElement):
        zero_fixed_point_check(c2, full_filter(c2))


def test_classify_monogenic():
    assert classify_monogenic([0], 0) == (0, 1)
    assert classify_monogenic([1, 2, 2], 0) == (2, 1)
    assert classify_monogenic([1, 2, 0], 0) == (0, 3)
    assert classify_monogenic(monogenic_orbit(2, 3), 0) == (2, 3)


def test_monogenic_hom_flags_examples():
    assert monogenic_homs((2, 2), (1, 2)) == MonogenicHomFlags(True, False)
    assert monogenic_homs((1, 2), (2, 2)) == MonogenicHomFlags(False, True)
    assert monogenic_homs((0, 1), (0, 1)) == MonogenicHomFlags(True, True)
    assert monogenic_homs((1, 1), (0, 2)) == MonogenicHomFlags(False, False)


def test_monogenic_arithmetic_matches_bruteforce_small():
    for a in range(4):
        for b in range(1, 4):
            for a2 in range(4):
                for b2 in range(1, 4):
                    flags = monogenic_homs((a, b), (a2, b2))
                    assert flags == monogenic_homs_bruteforce((a, b), (a2, b2))
                    assert flags.epi_exists == (a2 <= a and b % b2 == 0)
                    assert flags.mono_exists == (a <= a2 and b == b2)


def test_monogenic_joint_cover_shape():
    import math
    for a in range(4):
        for b in range(1, 4):
            for a2 in range(4):
                for b2 in range(1, 4):
                    f1, f2 = monogenic_orbit(a, b), monogenic_orbit(a2, b2)
                    size2 = len(f2)
                    product = [f1[p] * size2 + f2[q]
                               for p in range(len(f1)) for q in range(size2)]
                    shape = classify_monogenic(product, 0)
                    assert shape == (max(a, a2), math.lcm(b, b2))


def test_monoids_isomorphic(b2, c2):
    assert monoids_isomorphic(b2, two_idempotents())
    assert monoids_isomorphic(b2, c2) is None
    relabeled = cyclic(4)
    assert monoids_isomorphic(cyclic(4), relabeled) == (0, 1, 2, 3)


def test_bad_category_rejected():
    with pytest.raises(BadCategory):
        make_category(["*"], [("id", 0, 0), ("e", 0, 0)],
                      lambda f, g: 0, [0], [], [])
