#!/usr/bin/env python
# -*- coding: utf-8 -*-

import unittest
from fractions import Fraction

from src.core.errors import CurvHomoError, DegenerateMetricError, DimensionError, NotNormalizedError
from src.core.exact_algebra import SeededSampler, identity
from src.geometry.family_mf import (
    PointCoords,
    alpha,
    alpha_via_slots_expected,
    cubic_family,
    curvature_closed,
    random_family,
)
from src.geometry.invariants import (
    INCONCLUSIVE_CONSTANT,
    NOT_LOCALLY_HOMOGENEOUS,
    QuotientSpace,
    Subspace,
    alpha_profile,
    alpha_via_quotient,
    full_space,
    g_U_in_reference,
    homogeneity_obstruction,
    induced_structures,
    kernel_subspace_AV,
    orthogonal_complement,
    representative_problems,
)
from src.geometry.model_space import ModelBasis, build_model, shear


class TestSubspaces(unittest.TestCase):
    """部分空間と商空間のテスト"""

    def test_same_span(self):
        """基底が違っても同じ部分空間"""
        A = Subspace(3, [(1, 0, 0), (0, 1, 0)])
        B = Subspace(3, [(1, 1, 0), (1, -1, 0)])
        self.assertTrue(A.same_span(B))
        self.assertFalse(A.contains((0, 0, 1)))

    def test_dependent_basis(self):
        """一次従属な基底は DimensionError"""
        with self.assertRaises(DimensionError):
            Subspace(2, [(1, 1), (2, 2)])

    def test_quotient_sigma(self):
        """σ は核の成分を捨てた代表元の座標"""
        Q = QuotientSpace(full_space(2), Subspace(2, [(0, 1)]), [(1, 1)])
        self.assertEqual(Q.sigma((3, 5)), (3,))
        self.assertEqual(Q.lift((2,)), (2, 2))

    def test_orthogonal_complement_degenerate(self):
        """退化した計量では DegenerateMetricError"""
        with self.assertRaises(DegenerateMetricError):
            orthogonal_complement(((1, 0), (0, 0)), Subspace(2, [(1, 0)]))


class TestInducedStructures(unittest.TestCase):
    """A_V, A_{T,V} と誘導構造のテスト"""

    def setUp(self):
        self.ms = build_model(2)
        self.B = self.ms.standard_basis()

    def test_kernels(self):
        """A_V = span{V_i}, A_{T,V} = span{T_i, V_i}"""
        s = self.ms.s
        structures = induced_structures(self.ms, self.B)
        V = Subspace(6, [self.B.v(i) for i in range(s)])
        TV = Subspace(6, [self.B.t(i) for i in range(s)] + [self.B.v(i) for i in range(s)])
        self.assertTrue(structures.A_V.same_span(V))
        self.assertTrue(structures.A_TV.same_span(TV))
        self.assertEqual(structures.g_T, ((-1, 0), (0, -1)))
        self.assertEqual(structures.R_UT[0, 1, 1, 2], 1)

    def test_not_normalized(self):
        """正規化基底でなければ NotNormalizedError"""
        vectors = list(self.B.vectors)
        vectors[4] = tuple(2 * x for x in vectors[4])
        with self.assertRaises(NotNormalizedError):
            induced_structures(self.ms, ModelBasis(2, vectors))

    def test_g_U_reference(self):
        """標準基底とシアー後の基底で g_U は単位行列"""
        self.assertEqual(g_U_in_reference(self.ms, self.B), identity(2))
        self.assertEqual(g_U_in_reference(self.ms, shear(self.B, (3, -3))), identity(2))

    def test_representatives(self):
        """代表元を核でずらしても誘導構造は変わらない"""
        self.assertEqual(representative_problems(self.ms, self.B, SeededSampler(6)), [])


class TestAlphaInvariant(unittest.TestCase):
    """不変量 α と局所等質性の判定のテスト"""

    def test_quotient_formula(self):
        """正規化フレームで計算した値は (s-1)(α + 4(s-2)|u|²)"""
        sampler = SeededSampler(13)
        for s in (2, 3):
            spec = random_family(s, sampler, 3)
            P = PointCoords.random(s, sampler)
            self.assertEqual(alpha_via_quotient(spec, P), alpha_via_slots_expected(spec, P))

    def test_s2_equals_alpha(self):
        """s=2 では α そのもの"""
        spec = cubic_family(2)
        P = PointCoords((1, 2), (3, 4), (0, 0))
        self.assertEqual(alpha_via_quotient(spec, P), alpha(spec, P))

    def test_cubic_obstruction(self):
        """f_i = u_i³ は 296 と 72 で局所等質でない"""
        spec = cubic_family(2)
        verdict = homogeneity_obstruction(spec, [PointCoords((1, 2), (0, 0), (0, 0)), PointCoords.zero(2)])
        self.assertEqual(verdict.verdict, NOT_LOCALLY_HOMOGENEOUS)
        self.assertIn("=296", str(verdict))
        self.assertIn("=72", str(verdict))

    def test_constant_alpha(self):
        """α が一定なら INCONCLUSIVE-CONSTANT"""
        spec = cubic_family(2)
        P = PointCoords((1, 2), (0, 0), (0, 0))
        Q = PointCoords((1, 2), (5, 5), (1, 1))
        self.assertEqual(homogeneity_obstruction(spec, [P, Q]).verdict, INCONCLUSIVE_CONSTANT)

    def test_needs_two_points(self):
        """異なる点が 2 つ無ければ CurvHomoError"""
        P = PointCoords.zero(2)
        with self.assertRaises(CurvHomoError):
            homogeneity_obstruction(cubic_family(2), [P, P])

    def test_kernel_at_point(self):
        """多様体の点でも A_V は ∂v_i の張る空間"""
        spec = cubic_family(2)
        A_V = kernel_subspace_AV(curvature_closed(spec, PointCoords((1, 2), (3, 4), (0, 0))))
        self.assertTrue(A_V.same_span(Subspace(6, [(0, 0, 0, 0, 1, 0), (0, 0, 0, 0, 0, 1)])))

    def test_alpha_profile(self):
        """α, 商空間経由の値, α^1 が並ぶ"""
        rows = alpha_profile(cubic_family(2), [PointCoords.zero(2)], kmax=1)
        self.assertEqual(rows[0].alpha, 72)
        self.assertEqual(rows[0].alpha_quotient, Fraction(72))
        self.assertEqual(rows[0].alpha_k, (Fraction(72),))


if __name__ == "__main__":
    unittest.main()
