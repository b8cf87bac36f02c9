#!/usr/bin/env python
# -*- coding: utf-8 -*-

import unittest
from fractions import Fraction

from src.core.errors import DegenerateMetricError, NonSymmetricError
from src.core.exact_algebra import (
    SeededSampler,
    as_fraction,
    cayley_orthogonal,
    congruence_diagonalize,
    coordinate_names,
    coordinate_ring,
    determinant,
    diagonal,
    format_rational,
    is_orthogonal,
    mat_mul,
    matrix,
    matrix_inverse,
    matrix_rank,
    nullspace,
    poly_constant,
    poly_eval,
    poly_from_terms,
    poly_partial,
    symmetric_signature,
    transpose,
    univariate_poly,
)


class TestRationals(unittest.TestCase):
    """有理数の変換と整形のテスト"""

    def test_as_fraction(self):
        """int・文字列・Fraction が既約分数になる"""
        self.assertEqual(as_fraction(3), Fraction(3))
        self.assertEqual(as_fraction("-2/4"), Fraction(-1, 2))
        self.assertEqual(as_fraction(Fraction(6, 8)), Fraction(3, 4))

    def test_format_rational(self):
        """p/q 形式で、整数は分母を省略する"""
        self.assertEqual(format_rational(Fraction(-6, 4)), "-3/2")
        self.assertEqual(format_rational(Fraction(8, 4)), "2")
        self.assertEqual(format_rational(0), "0")


class TestLinearAlgebra(unittest.TestCase):
    """厳密な線形代数のテスト"""

    def test_rank_exact(self):
        """分数を含む行列の階数"""
        M = [[Fraction(1, 2), 1, 0], [1, 2, 0], [0, 0, Fraction(1, 3)]]
        self.assertEqual(matrix_rank(M), 2)
        self.assertEqual(matrix_rank([[0, 0], [0, 0]]), 0)
        self.assertEqual(matrix_rank([[1, 2, 3]]), 1)

    def test_rank_large_entries(self):
        """大きな整数でも許容誤差なしに階数を求める"""
        big = 10 ** 30
        M = [[big, 1], [big + 1, 1]]
        self.assertEqual(matrix_rank(M), 2)
        self.assertEqual(matrix_rank([[big, 1], [2 * big, 2]]), 1)

    def test_inverse_and_determinant(self):
        """逆行列と行列式"""
        M = matrix([[2, 1], [1, 1]])
        self.assertEqual(mat_mul(M, matrix_inverse(M)), matrix([[1, 0], [0, 1]]))
        self.assertEqual(determinant(M), 1)
        self.assertEqual(determinant([[0, 1], [1, 0]]), -1)

    def test_singular_inverse(self):
        """特異行列の逆行列は DegenerateMetricError"""
        with self.assertRaises(DegenerateMetricError):
            matrix_inverse([[1, 2], [2, 4]])

    def test_nullspace(self):
        """零空間の基底は M x = 0 を満たす"""
        M = [[1, 1, 0], [0, 0, 1]]
        basis = nullspace(M)
        self.assertEqual(len(basis), 1)
        self.assertEqual(mat_mul(matrix(M), transpose([basis[0]])), matrix([[0], [0]]))
        self.assertEqual(len(nullspace([], n_cols=3)), 3)

    def test_congruence_diagonalize(self):
        """Pᵀ M P が対角になる（対角成分が全て 0 でも）"""
        M = matrix([[0, 1], [1, 0]])
        P, d = congruence_diagonalize(M)
        self.assertEqual(mat_mul(mat_mul(transpose(P), M), P), diagonal(d))
        self.assertEqual(symmetric_signature(M), (1, 1, 0))

    def test_signature_rejects_nonsymmetric(self):
        """非対称行列は NonSymmetricError"""
        with self.assertRaises(NonSymmetricError):
            symmetric_signature([[1, 2], [0, 1]])

    def test_cayley(self):
        """ケーリー変換の値と直交性"""
        Q = cayley_orthogonal([[0, 1], [-1, 0]])
        self.assertEqual(Q, matrix([[0, -1], [1, 0]]))
        self.assertTrue(is_orthogonal(Q))


class TestPolynomials(unittest.TestCase):
    """座標多項式環のテスト"""

    def setUp(self):
        self.ring = coordinate_ring(2)

    def test_names(self):
        """生成元の順は u, t, v"""
        self.assertEqual(coordinate_names(2), ("u1", "u2", "t1", "t2", "v1", "v2"))
        self.assertEqual(self.ring.ngens, 6)

    def test_partial_and_eval(self):
        """形式偏微分と厳密評価"""
        p = univariate_poly(self.ring, 0, {3: 1, 1: Fraction(1, 2)})
        dp = poly_partial(p, "u1")
        self.assertEqual(poly_eval(dp, (2, 0, 0, 0, 0, 0)), Fraction(25, 2))
        self.assertEqual(poly_partial(p, "t1"), self.ring.zero)
        self.assertEqual(poly_partial(p, "x"), self.ring.zero)

    def test_constant(self):
        """定数多項式の判定"""
        self.assertEqual(poly_constant(self.ring(3)), 3)
        self.assertEqual(poly_constant(self.ring.zero), 0)
        self.assertIsNone(poly_constant(self.ring.gens[0]))


class TestSeededSampler(unittest.TestCase):
    """シード固定サンプラーのテスト"""

    def test_deterministic(self):
        """同じシードなら同じ列"""
        a = SeededSampler(7, 10)
        b = SeededSampler(7, 10)
        self.assertEqual([a.rational() for _ in range(20)], [b.rational() for _ in range(20)])

    def test_fork_is_stable(self):
        """fork は親の消費状態によらない"""
        a = SeededSampler(3)
        b = SeededSampler(3)
        b.rational()
        self.assertEqual(a.fork("x").vector(5), b.fork("x").vector(5))
        self.assertNotEqual(a.fork("x").vector(5), a.fork("y").vector(5))

    def test_bounds(self):
        """分子・分母が上界に収まる"""
        sampler = SeededSampler(1, 4)
        for _ in range(50):
            x = sampler.rational()
            self.assertLessEqual(abs(x.numerator), 4)
            self.assertLessEqual(x.denominator, 4)

    def test_orthogonal(self):
        """orthogonal は厳密な直交行列"""
        sampler = SeededSampler(5)
        for n in (2, 3, 4):
            self.assertTrue(is_orthogonal(sampler.orthogonal(n)))

    def test_nonzero_rational(self):
        """nonzero_rational は 0 を返さず上界に収まる"""
        sampler = SeededSampler(11, 3)
        for _ in range(200):
            x = sampler.nonzero_rational()
            self.assertNotEqual(x, 0)
            self.assertLessEqual(abs(x.numerator), 3)
            self.assertLessEqual(x.denominator, 3)


class TestSeededInvariants(unittest.TestCase):
    """乱数で引いた入力に対する代数的な不変性のテスト"""

    def test_rank_of_transpose(self):
        """rank(M) = rank(Mᵀ)（低階数の積も含む）"""
        sampler = SeededSampler(21)
        for trial in range(30):
            rows, cols = sampler.integer(1, 5), sampler.integer(1, 5)
            if trial % 2:
                inner = sampler.integer(1, 2)
                M = mat_mul(sampler.matrix(rows, inner), sampler.matrix(inner, cols))
            else:
                M = sampler.matrix(rows, cols)
            self.assertEqual(matrix_rank(M), matrix_rank(transpose(M)), M)

    def test_signature_under_congruence(self):
        """可逆な P で PᵀMP にしても慣性指数は変わらない"""
        sampler = SeededSampler(22)
        checked = 0
        for _ in range(40):
            n = sampler.integer(2, 5)
            A = sampler.matrix(n)
            M = mat_mul(transpose(A), diagonal([sampler.choice((-1, 0, 1)) for _ in range(n)]))
            M = mat_mul(M, A)
            P = sampler.matrix(n)
            if determinant(P) == 0:
                continue
            congruent = mat_mul(mat_mul(transpose(P), M), P)
            self.assertEqual(symmetric_signature(congruent), symmetric_signature(M))
            checked += 1
        self.assertGreater(checked, 20)

    def test_mixed_partials_commute(self):
        """∂a∂b p = ∂b∂a p"""
        sampler = SeededSampler(23, 4)
        ring = coordinate_ring(2)
        names = coordinate_names(2)
        for _ in range(20):
            terms = {
                tuple(sampler.integer(0, 3) for _ in range(ring.ngens)): sampler.rational()
                for _ in range(6)
            }
            p = poly_from_terms(ring, terms)
            a, b = sampler.choice(names), sampler.choice(names)
            self.assertEqual(poly_partial(poly_partial(p, a), b), poly_partial(poly_partial(p, b), a))


if __name__ == "__main__":
    unittest.main()
