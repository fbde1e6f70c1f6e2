import numpy as np
import pytest

import twistdecomp as td
from twistdecomp.decomposition import action_table, orbit_data
from twistdecomp.errors import ANotTrivial, InputError, NotEquivariant
from twistdecomp.groups import quotient_with_section
from twistdecomp.kgroups import (
    all_subgroups,
    check_equivariant,
    coset_gset,
    empty_gset,
    gset_as_quotient_action,
    gset_orbits,
    isotropy_subgroup,
    left_translation_gset,
    phi_matrix,
    point_gset,
    pullback_to_group,
    random_cover,
    random_gset,
    relabel_gset,
)


def swap_gset(d8):
    """Two points swapped by b, fixed by a."""
    act = np.zeros((8, 2), dtype=int)
    for g in range(8):
        act[g] = [0, 1] if g < 4 else [1, 0]
    return td.make_gset(d8, act)


def block_diag(blocks):
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        out[r : r + b.shape[0], c : c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


class TestGSetBasics:
    def test_point(self, d8):
        x = point_gset(d8)
        assert x.size == 1
        assert gset_orbits(x) == [(0,)]

    def test_invalid_action_rejected(self, d8):
        # a and a^2 both swap, but a*a = a^2 forces a^2 to act trivially
        act = np.tile([0, 1], (8, 1))
        act[1] = [1, 0]
        act[2] = [1, 0]
        with pytest.raises(InputError):
            td.make_gset(d8, act)

    def test_coset_gset_sizes(self, d8):
        for h in all_subgroups(d8):
            x = coset_gset(d8, h)
            assert x.size == d8.order // h.order
            assert len(gset_orbits(x)) == 1

    def test_isotropy_of_swap(self, d8):
        x = swap_gset(d8)
        assert isotropy_subgroup(x, 0).elements == (0, 1, 2, 3)

    def test_relabel_preserves_orbit_structure(self, d8):
        x = swap_gset(d8)
        y = relabel_gset(x, [1, 0])
        assert sorted(len(o) for o in gset_orbits(y)) == [2]


class TestK0:
    def test_point_d8_alpha_rank2(self, d8, alpha4):
        assert td.k0_of_gset(d8, alpha4, point_gset(d8)).rank == 2

    def test_free_orbit_trivial_alpha_rank1(self, d8):
        k = td.k0_of_gset(d8, td.trivial_cocycle(d8), left_translation_gset(d8))
        assert k.rank == 1

    def test_swap_gset_rank4(self, d8, alpha4):
        assert td.k0_of_gset(d8, alpha4, swap_gset(d8)).rank == 4

    def test_rank_additive_over_disjoint_union(self, d8, alpha4):
        x = swap_gset(d8)
        y = point_gset(d8)
        both = td.disjoint_union(x, y)
        assert (
            td.k0_of_gset(d8, alpha4, both).rank
            == td.k0_of_gset(d8, alpha4, x).rank + td.k0_of_gset(d8, alpha4, y).rank
        )

    def test_rank_relabel_invariant(self, d8, alpha4):
        rng = np.random.default_rng(5)
        x = td.disjoint_union(swap_gset(d8), point_gset(d8))
        base = td.k0_of_gset(d8, alpha4, x).rank
        for _ in range(5):
            y = relabel_gset(x, rng.permutation(x.size))
            assert td.k0_of_gset(d8, alpha4, y).rank == base

    def test_empty_gset_rank0(self, d8, alpha4):
        assert td.k0_of_gset(d8, alpha4, empty_gset(d8)).rank == 0


class TestVerifyGSet:
    def test_point_reduces_to_point_check(self, d8, alpha4, a_cyclic):
        rep = td.verify_gset_decomposition(d8, a_cyclic, alpha4, point_gset(d8))
        assert rep.lhs_rank == 2
        assert rep.ok

    def test_swap_case(self, d8, alpha4, a_center):
        rep = td.verify_gset_decomposition(d8, a_center, alpha4, swap_gset(d8))
        assert rep.ok

    def test_union_additivity(self, d8, alpha4, a_cyclic):
        x = swap_gset(d8)
        y = point_gset(d8)
        rx = td.verify_gset_decomposition(d8, a_cyclic, alpha4, x)
        ry = td.verify_gset_decomposition(d8, a_cyclic, alpha4, y)
        rboth = td.verify_gset_decomposition(d8, a_cyclic, alpha4, td.disjoint_union(x, y))
        assert rboth.lhs_rank == rx.lhs_rank + ry.lhs_rank
        assert [a + b for a, b in zip(rx.rhs_ranks, ry.rhs_ranks)] == rboth.rhs_ranks

    def test_a_not_trivial_rejected(self, d8, alpha4, a_cyclic):
        # the free orbit is moved by a
        with pytest.raises(ANotTrivial):
            td.verify_gset_decomposition(d8, a_cyclic, alpha4, left_translation_gset(d8))

    def test_empty_gset(self, d8, alpha4, a_center):
        rep = td.verify_gset_decomposition(d8, a_center, alpha4, empty_gset(d8))
        assert rep.lhs_rank == 0 and sum(rep.rhs_ranks) == 0

    @pytest.mark.parametrize("n,gens", [(2, [1]), (4, [1]), (4, [2]), (6, [1]), (8, [1])])
    def test_random_qsets(self, n, gens):
        G = td.dihedral(n)
        alpha = td.dihedral_alpha(n)
        A = td.subgroup_closure(G, gens)
        qs = quotient_with_section(G, A)
        rng = np.random.default_rng(17)
        for _ in range(4):
            xq = random_gset(qs.quotient, 6, rng)
            x = pullback_to_group(xq, G, qs.projection)
            assert td.verify_gset_decomposition(G, A, alpha, x).ok

    @pytest.mark.parametrize("n", [4, 6])
    def test_every_normal_subgroup(self, n):
        # includes the case where an induced cocycle is a nontrivial class
        G = td.dihedral(n)
        cocycles = [td.trivial_cocycle(G)]
        if n % 2 == 0:
            cocycles.append(td.dihedral_alpha(n))
        from twistdecomp.groups import normal_subgroups

        rng = np.random.default_rng(n)
        for alpha in cocycles:
            for A in normal_subgroups(G):
                qs = quotient_with_section(G, A)
                xq = random_gset(qs.quotient, 5, rng)
                x = pullback_to_group(xq, G, qs.projection)
                assert td.verify_gset_decomposition(G, A, alpha, x).ok


class TestPullback:
    def test_identity_map(self, d8, alpha4):
        x = swap_gset(d8)
        M = td.pullback_matrix(d8, alpha4, [0, 1], x, x)
        assert np.array_equal(M, np.eye(4, dtype=int))

    def test_collapse_free_orbit_gives_dimension_row(self, d8):
        triv = td.trivial_cocycle(d8)
        M = td.pullback_matrix(
            d8, triv, [0] * 8, left_translation_gset(d8), point_gset(d8)
        )
        table = td.irreducibles(d8, triv, seed=0)
        assert M.shape == (1, 5)
        assert list(M[0]) == list(table.dims)

    def test_not_equivariant_rejected(self, d8, alpha4):
        x = swap_gset(d8)
        two_fixed = td.disjoint_union(point_gset(d8), point_gset(d8))
        with pytest.raises(NotEquivariant):
            check_equivariant([0, 1], x, two_fixed)

    def test_functoriality_on_random_chains(self, d8, alpha4, a_center):
        qs = quotient_with_section(d8, a_center)
        Q = qs.quotient
        rng = np.random.default_rng(23)
        subs = all_subgroups(Q)
        for _ in range(5):
            zq = random_gset(Q, 4, rng, subs)
            yq, f2 = random_cover(zq, rng, subs)
            xq, f1 = random_cover(yq, rng, subs)
            x = pullback_to_group(xq, d8, qs.projection)
            y = pullback_to_group(yq, d8, qs.projection)
            z = pullback_to_group(zq, d8, qs.projection)
            m1 = td.pullback_matrix(d8, alpha4, f1, x, y)
            m2 = td.pullback_matrix(d8, alpha4, f2, y, z)
            composite = [f2[f1[p]] for p in range(x.size)]
            mc = td.pullback_matrix(d8, alpha4, composite, x, z)
            assert np.array_equal(mc, m1 @ m2)


class TestPhiMatrix:
    def test_point_is_permutation(self, d8, alpha4, a_cyclic, a_center):
        for A in (a_cyclic, a_center):
            P = phi_matrix(d8, A, alpha4, point_gset(d8))
            assert P.shape == (2, 2)
            assert np.array_equal(P @ P.T, np.eye(2, dtype=int))

    def test_unimodular_on_gsets(self, d8, alpha4, a_center):
        P = phi_matrix(d8, a_center, alpha4, swap_gset(d8))
        assert P.shape[0] == P.shape[1]
        assert abs(round(np.linalg.det(P))) == 1

    @pytest.mark.parametrize("gens", [[1], [2]])
    def test_naturality_square_collapse(self, d8, alpha4, gens):
        A = td.subgroup_closure(d8, gens)
        x = swap_gset(d8)
        y = point_gset(d8)
        f = [0, 0]
        action = action_table(d8, A, alpha4, seed=0)
        data = orbit_data(action, alpha4)
        phi_x = phi_matrix(d8, A, alpha4, x, seed=0, action=action, data=data)
        phi_y = phi_matrix(d8, A, alpha4, y, seed=0, action=action, data=data)
        direct = td.pullback_matrix(d8, alpha4, f, x, y, seed=0)
        blocks = []
        for datum in data:
            xq = gset_as_quotient_action(x, datum)
            yq = gset_as_quotient_action(y, datum)
            blocks.append(td.pullback_matrix(datum.q_group, datum.beta, f, xq, yq, seed=0))
        decomposed = block_diag(blocks)
        assert np.array_equal(phi_x @ direct, decomposed @ phi_y)
