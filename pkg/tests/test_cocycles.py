import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import twistdecomp as td
from twistdecomp.cocycles import (
    is_coboundary_brute,
    make_cocycle,
    numeric_from_exact,
    snap_to_lattice,
    validate_cocycle_table,
)
from twistdecomp.errors import InvalidCocycle, OddN, SearchSpaceTooLarge
from twistdecomp.groups import trivial_subgroup


class TestUnitScalar:
    def test_multiplication_rescales(self):
        a = td.UnitScalar(1, 2)   # -1
        b = td.UnitScalar(1, 4)   # i
        c = a * b
        assert (c.exponent, c.order) == (3, 4)

    def test_inverse(self):
        u = td.UnitScalar(3, 8)
        v = u * u.inverse()
        assert v.exponent == 0

    def test_value(self):
        assert td.UnitScalar(2, 4).value() == pytest.approx(-1)


class TestValidateCocycle:
    def test_trivial_valid(self, d8):
        assert td.validate_cocycle(td.trivial_cocycle(d8)).ok

    def test_dihedral_alpha_valid(self, alpha4):
        assert td.validate_cocycle(alpha4).ok

    def test_single_perturbation_invalid(self, d8, alpha4):
        expo = np.array(alpha4.exponents)
        expo[5, 3] = (expo[5, 3] + 1) % 4
        report = validate_cocycle_table(d8, 4, expo)
        assert not report.ok

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 7), st.integers(0, 7))
    def test_any_single_perturbation_invalid(self, g, h):
        d8 = td.dihedral(4)
        alpha4 = td.dihedral_alpha(4)
        expo = np.array(alpha4.exponents)
        expo[g, h] = (expo[g, h] + 1) % 4
        assert not validate_cocycle_table(d8, 4, expo).ok

    def test_make_cocycle_requires_clean_report(self, d8, alpha4):
        expo = np.array(alpha4.exponents)
        expo[0, 0] = 1
        with pytest.raises(InvalidCocycle):
            make_cocycle(d8, 4, expo)


class TestDihedralAlpha:
    def test_values_n4(self, d8, alpha4):
        # alpha(a^3 b, a^2 b) = i^2 = -1
        assert alpha4.exponents[4 + 3, 4 + 2] == 2
        assert alpha4.scalar(4 + 3, 4 + 2).value() == pytest.approx(-1)
        # alpha(a^2, a b) = 1
        assert alpha4.exponents[2, 5] == 0

    @pytest.mark.parametrize("n", [2, 4, 6, 8, 10])
    def test_normalized(self, n):
        alpha = td.dihedral_alpha(n)
        assert (alpha.exponents[:, 0] == 0).all()
        assert (alpha.exponents[0, :] == 0).all()

    @pytest.mark.parametrize("n", [1, 3, 5])
    def test_odd_rejected(self, n):
        with pytest.raises(OddN):
            td.dihedral_alpha(n)


class TestRestrict:
    def test_to_rotations_trivial(self, alpha4, a_cyclic):
        restricted, to_parent = td.restrict(alpha4, a_cyclic)
        assert restricted.is_trivial()
        assert to_parent == (0, 1, 2, 3)

    def test_to_center_trivial(self, alpha4, a_center):
        restricted, _ = td.restrict(alpha4, a_center)
        assert restricted.is_trivial()

    def test_to_trivial_subgroup(self, d8, alpha4):
        restricted, _ = td.restrict(alpha4, trivial_subgroup(d8))
        assert restricted.group.order == 1
        assert restricted.is_trivial()

    def test_restriction_to_reflections_nontrivial(self, d8, alpha4):
        # <a^2, b> is a Klein subgroup where alpha restricts nontrivially
        H = td.subgroup_closure(d8, [2, 4])
        restricted, _ = td.restrict(alpha4, H)
        assert not restricted.is_trivial()
        assert td.validate_cocycle(restricted).ok


class TestCentralExtension:
    def test_trivial_k1(self):
        G = td.cyclic(2)
        ext = td.central_extension(G, td.trivial_cocycle(G))
        assert ext.group.order == 2

    def test_d8_alpha_order_32_center_contains_mu4(self, d8, alpha4):
        ext = td.central_extension(d8, alpha4)
        assert ext.group.order == 32
        z = td.center(ext.group)
        for k in range(4):
            assert ext.encode(0, k) in z.elements

    def test_trivial_k2_is_direct_product(self, d8):
        alpha = td.trivial_cocycle(d8, order=2)
        ext = td.central_extension(d8, alpha)
        product = td.direct_product(d8, td.cyclic(2))
        # identical tables under the shared (g, k) encoding
        assert ext.group.same_table(product)

    def test_projection_is_homomorphism_with_central_kernel(self, d8, alpha4):
        ext = td.central_extension(d8, alpha4)
        E, proj = ext.group, ext.projection
        for x in range(E.order):
            for y in range(E.order):
                assert proj[E.multiply(x, y)] == d8.multiply(proj[x], proj[y])
        kernel = [x for x in range(E.order) if proj[x] == 0]
        assert len(kernel) == ext.order_k
        for k in kernel:
            assert all(E.multiply(k, x) == E.multiply(x, k) for x in range(E.order))


class TestTauScalar:
    def test_normalized(self, d8, alpha4, a_cyclic):
        qs = td.quotient_with_section(d8, a_cyclic)
        for q in range(qs.quotient.order):
            assert td.tau_scalar(alpha4, qs, 0, q).exponent == 0
            assert td.tau_scalar(alpha4, qs, q, 0).exponent == 0

    def test_d8_mod_a_bb(self, d8, alpha4, a_cyclic):
        qs = td.quotient_with_section(d8, a_cyclic)
        assert td.tau_scalar(alpha4, qs, 1, 1).value() == pytest.approx(1)

    def test_trivial_alpha_gives_one(self, d8, a_center):
        qs = td.quotient_with_section(d8, a_center)
        alpha = td.trivial_cocycle(d8)
        for q1 in range(4):
            for q2 in range(4):
                assert td.tau_scalar(alpha, qs, q1, q2).exponent == 0

    def test_both_formulas_exercised_exhaustively(self, d8, alpha4):
        # the two defining expressions are asserted equal inside tau_scalar
        for A in td.normal_subgroups(d8):
            qs = td.quotient_with_section(d8, A)
            for q1 in range(qs.quotient.order):
                for q2 in range(qs.quotient.order):
                    td.tau_scalar(alpha4, qs, q1, q2)


class TestCoboundaryBrute:
    def test_trivial_found(self):
        beta = numeric_from_exact(td.trivial_cocycle(td.cyclic(3)))
        result = is_coboundary_brute(beta, 4)
        assert result is not None
        assert all(u.exponent == 0 for u in result)

    def test_z2_minus_one(self):
        Q = td.cyclic(2)
        beta = td.make_numeric_cocycle(Q, [[1, 1], [1, -1]])
        result = is_coboundary_brute(beta, 4)
        assert [u.exponent for u in result] == [0, 1]  # c(q) = i, first in lex order

    def test_d8_alpha_not_a_coboundary(self, alpha4):
        beta = numeric_from_exact(alpha4)
        for k in range(1, 9):
            assert is_coboundary_brute(beta, k) is None

    def test_search_space_cap(self, alpha4):
        beta = numeric_from_exact(alpha4)
        with pytest.raises(SearchSpaceTooLarge):
            is_coboundary_brute(beta, 24)

    def test_verifies_delta(self):
        # random coboundary on Z/4 is recovered
        Q = td.cyclic(4)
        rng = np.random.default_rng(3)
        expo = rng.integers(0, 8, size=4)
        expo[0] = 0
        c = np.exp(2j * np.pi * expo / 8)
        table = np.array([
            [c[q1] * c[q2] / c[Q.multiply(q1, q2)] for q2 in range(4)]
            for q1 in range(4)
        ])
        beta = td.make_numeric_cocycle(Q, table)
        result = is_coboundary_brute(beta, 8)
        assert result is not None
        got = np.array([u.value() for u in result])
        delta = np.array([
            [got[q1] * got[q2] / got[Q.multiply(q1, q2)] for q2 in range(4)]
            for q1 in range(4)
        ])
        assert np.allclose(delta, table, atol=1e-8)


class TestSnapToLattice:
    def test_snaps_exact_values(self, alpha4):
        beta = numeric_from_exact(alpha4)
        snapped = snap_to_lattice(beta, 4)
        assert snapped is not None
        assert np.array_equal(snapped.exponents, alpha4.exponents)

    def test_rejects_far_values(self):
        Q = td.cyclic(2)
        z = np.exp(0.3j)
        beta = td.NumericCocycle(Q, np.array([[1, 1], [1, z]]))
        assert snap_to_lattice(beta, 4) is None


class TestNumericValidation:
    def test_validates_induced_style_table(self):
        Q = td.cyclic(2)
        beta = td.make_numeric_cocycle(Q, [[1, 1], [1, -1]])
        assert td.validate_numeric_cocycle(beta).ok

    def test_rejects_broken_normalization(self):
        Q = td.cyclic(2)
        with pytest.raises(InvalidCocycle):
            td.make_numeric_cocycle(Q, [[1, -1], [1, 1]])

    def test_rejects_broken_identity(self):
        Q = td.cyclic(4)
        table = np.ones((4, 4), dtype=complex)
        table[1, 1] = -1.0  # beta(g,g) != beta(g,g^3)-compatible values break a triple
        with pytest.raises(InvalidCocycle):
            td.make_numeric_cocycle(Q, table)

    def test_restrict_numeric(self, d8, alpha4):
        beta = numeric_from_exact(alpha4)
        sub, _ = td.restrict_numeric(beta, td.subgroup_closure(d8, [1]))
        assert np.allclose(sub.table, 1.0)
