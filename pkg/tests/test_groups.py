import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import twistdecomp as td
from twistdecomp.errors import (
    ClosureTooLarge,
    InputError,
    NoIdentity,
    NotAPermutation,
    NotAssociative,
    NotLatinSquare,
    NotNormal,
)
from twistdecomp.groups import (
    all_subgroups,
    full_subgroup,
    generating_set,
    trivial_subgroup,
)

from oracles import brute_isomorphic

# order-5 loop: Latin square with identity and two-sided inverses, not associative
NONASSOC_LOOP = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


class TestFromMultiplicationTable:
    def test_trivial(self):
        G = td.from_multiplication_table([[0]])
        assert G.order == 1
        assert G.identity == 0

    def test_z2(self):
        G = td.from_multiplication_table([[0, 1], [1, 0]])
        assert G.order == 2
        assert G.multiply(1, 1) == 0

    def test_identity_relabelled_to_zero(self):
        # identity sits at index 1 here; construction must move it to 0
        G = td.from_multiplication_table([[1, 0], [0, 1]])
        assert G.identity == 0
        assert G.multiply(0, 1) == 1

    def test_d8_round_trip_isomorphic(self, d8):
        G = td.from_multiplication_table(np.array(d8.mul))
        assert brute_isomorphic(G, d8)

    def test_not_latin(self):
        with pytest.raises(NotLatinSquare):
            td.from_multiplication_table([[0, 0], [1, 1]])

    def test_no_identity(self):
        with pytest.raises(NoIdentity):
            td.from_multiplication_table([[1, 0, 2], [0, 2, 1], [2, 1, 0]])

    def test_not_associative(self):
        with pytest.raises(NotAssociative):
            td.from_multiplication_table(NONASSOC_LOOP)

    def test_rejects_bad_entries(self):
        with pytest.raises(InputError):
            td.from_multiplication_table([[0, 2], [2, 0]])


class TestFromPermutationGenerators:
    def test_cyclic3(self):
        G = td.from_permutation_generators(3, [(1, 2, 0)])
        assert G.order == 3
        assert brute_isomorphic(G, td.cyclic(3))

    def test_d8_from_permutations(self):
        # a = (0 1 2 3), b = (0 3)(1 2)
        a = (1, 2, 3, 0)
        b = (3, 2, 1, 0)
        G = td.from_permutation_generators(4, [a, b])
        assert G.order == 8
        # defining relations a^4 = b^2 = 1, b a b = a^3 hold in the closure
        ia = next(i for i in range(G.order) if G.element_order(i) == 4)
        assert any(
            G.element_order(i) == 2
            and G.multiply(G.multiply(i, ia), i) == G.power(ia, 3)
            for i in range(G.order)
        )
        assert brute_isomorphic(G, td.dihedral(4))

    def test_trivial_closure(self):
        G = td.from_permutation_generators(1, [])
        assert G.order == 1

    def test_not_a_permutation(self):
        with pytest.raises(NotAPermutation):
            td.from_permutation_generators(3, [(0, 0, 1)])

    def test_closure_cap(self):
        with pytest.raises(ClosureTooLarge):
            td.from_permutation_generators(5, [(1, 2, 3, 4, 0), (1, 0, 2, 3, 4)], max_order=30)

    @settings(max_examples=25, deadline=None)
    @given(st.lists(st.permutations(range(4)), min_size=0, max_size=2))
    def test_order_divides_factorial_and_contains_generators(self, gens):
        G = td.from_permutation_generators(4, gens)
        assert 24 % G.order == 0
        assert G.order <= 24


class TestDihedral:
    def test_ab_times_a_is_b(self, d8):
        # (a b) a = b under the k + n*l encoding
        assert d8.multiply(5, 1) == 4

    def test_n1_is_z2(self):
        G = td.dihedral(1)
        assert G.order == 2
        assert brute_isomorphic(G, td.cyclic(2))

    def test_center_of_d8(self, d8):
        z = td.center(d8)
        assert z.elements == (0, 2)  # {1, a^2}

    def test_rejects_n0(self):
        with pytest.raises(InputError):
            td.dihedral(0)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_defining_relations(self, n):
        G = td.dihedral(n)
        a, b = 1 % n, n  # index(a) = 1 (or identity when n = 1), index(b) = n
        assert G.power(a, n) == 0
        assert G.multiply(b, b) == 0
        assert G.multiply(G.multiply(b, a), b) == G.inverse(a)


class TestSubgroups:
    def test_closure_of_a(self, d8):
        A = td.subgroup_closure(d8, [1])
        assert A.elements == (0, 1, 2, 3)

    def test_closure_empty(self, d8):
        assert td.subgroup_closure(d8, []).elements == (0,)

    def test_closure_of_a2(self, d8):
        assert td.subgroup_closure(d8, [2]).elements == (0, 2)

    def test_normality(self, d8):
        assert td.is_normal(d8, td.subgroup_closure(d8, [1]))
        assert not td.is_normal(d8, td.subgroup_closure(d8, [4]))  # <b>
        assert td.is_normal(d8, trivial_subgroup(d8))

    def test_normal_subgroup_listing(self, d8):
        orders = [h.order for h in td.normal_subgroups(d8)]
        assert orders == [1, 2, 4, 4, 4, 8]

    def test_all_subgroups_d8(self, d8):
        # D8 has 10 subgroups
        assert len(all_subgroups(d8)) == 10

    def test_generating_set(self, d8):
        gens = generating_set(d8)
        assert td.subgroup_closure(d8, gens).order == 8
        assert len(gens) <= 3

    def test_as_group_preserves_identity(self, d8):
        A = td.subgroup_closure(d8, [1])
        sub, to_parent = A.as_group()
        assert sub.identity == 0
        assert to_parent[0] == 0
        assert brute_isomorphic(sub, td.cyclic(4))


class TestQuotientWithSection:
    def test_d8_mod_a(self, d8, a_cyclic):
        qs = td.quotient_with_section(d8, a_cyclic)
        assert qs.quotient.order == 2
        assert qs.section == (0, 4)  # cosets A and Ab, smallest members
        assert all(qs.projection[qs.section[q]] == q for q in range(2))

    def test_d8_mod_center(self, d8, a_center):
        qs = td.quotient_with_section(d8, a_center)
        Q = qs.quotient
        assert Q.order == 4
        assert all(Q.multiply(q, q) == 0 for q in range(4))  # exponent 2: Z/2 x Z/2
        assert qs.section == (0, 1, 4, 5)

    def test_quotient_by_whole_group(self, d8):
        qs = td.quotient_with_section(d8, full_subgroup(d8))
        assert qs.quotient.order == 1

    def test_not_normal_rejected(self, d8):
        with pytest.raises(NotNormal):
            td.quotient_with_section(d8, td.subgroup_closure(d8, [4]))

    def test_order_product(self, d8):
        for A in td.normal_subgroups(d8):
            qs = td.quotient_with_section(d8, A)
            assert qs.quotient.order * A.order == d8.order


class TestChi:
    def test_normalized(self, d8, a_cyclic):
        qs = td.quotient_with_section(d8, a_cyclic)
        for q in range(qs.quotient.order):
            assert td.chi(qs, 0, q) == 0
            assert td.chi(qs, q, 0) == 0

    def test_d8_mod_a_bb(self, d8, a_cyclic):
        qs = td.quotient_with_section(d8, a_cyclic)
        # sigma([b]) = b; chi([b],[b]) = sigma(1)^-1 b b = 1
        assert td.chi(qs, 1, 1) == 0

    def test_d8_mod_center_aa(self, d8, a_center):
        qs = td.quotient_with_section(d8, a_center)
        qa = qs.projection[1]
        # sigma([a]) sigma([a]) = a^2 and sigma([a^2 coset]) = 1
        assert td.chi(qs, qa, qa) == 2

    @pytest.mark.parametrize("n", [2, 3, 4, 6])
    def test_chi_lands_in_subgroup(self, n):
        G = td.dihedral(n)
        for A in td.normal_subgroups(G):
            qs = td.quotient_with_section(G, A)
            for q1 in range(qs.quotient.order):
                for q2 in range(qs.quotient.order):
                    assert td.chi(qs, q1, q2) in A.elements


class TestDirectProduct:
    def test_orders(self):
        G = td.direct_product(td.cyclic(2), td.cyclic(3))
        assert G.order == 6
        assert brute_isomorphic(G, td.cyclic(6))

    def test_not_isomorphic_when_different(self):
        assert not brute_isomorphic(
            td.direct_product(td.cyclic(2), td.cyclic(2)), td.cyclic(4)
        )


class TestConjugacyClasses:
    def test_d8_classes(self, d8):
        classes = td.conjugacy_classes(d8)
        assert classes == [(0,), (1, 3), (2,), (4, 6), (5, 7)]

    def test_class_sizes_divide_order(self):
        for n in (3, 4, 5, 6):
            G = td.dihedral(n)
            for cls in td.conjugacy_classes(G):
                assert G.order % len(cls) == 0
