#!/usr/bin/env python
# -*- coding: utf-8 -*-

import unittest
from fractions import Fraction
from unittest.mock import patch

from src.core.exact_algebra import SeededSampler
from src.geometry import family_mf, invariants, jacobi_analysis, model_space
from src.geometry.family_mf import ClosedForms, PointCoords, cubic_family, random_family
from src.geometry.model_space import ModelBasis, build_model, random_normalized_basis, u_index, v_index
from src.report import suites
from src.report.suites import (
    SuiteContext,
    basis_independence_report,
    crosscheck_at,
    crosscheck_fields,
    invariants_report,
    run_suites,
    scan_report,
)
from src.report.verification import emit_report
from src.utils.config_utils import RunConfig, parse_config

QUICK = RunConfig(samples=10, plane_samples=5, families=1, degree=3)


class TestRunSuites(unittest.TestCase):
    """検証スイート全体のテスト"""

    def test_default_all_pass(self):
        """既定の族 f_i = u_i³ は全ての検査に通る"""
        report = run_suites(QUICK)
        self.assertTrue(report.all_passed, [str(item) for item in report.failures])
        self.assertGreater(report.summary()["total"], 30)
        verdict = report.find("invariants", "verdict")
        self.assertIn("NOT-LOCALLY-HOMOGENEOUS", verdict.detail)

    def test_suite_order(self):
        """指定の順序によらず SUITE_IDS の順に実行する"""
        report = run_suites(QUICK, suites=["jacobi", "model"])
        order = []
        for item in report.items:
            if item.suite not in order:
                order.append(item.suite)
        self.assertEqual(order, ["model", "jacobi"])

    def test_deterministic(self):
        """同じ設定なら出力はバイト単位で一致する"""
        runs = [emit_report(run_suites(QUICK, suites=["model", "jacobi", "higher_jacobi"])) for _ in range(2)]
        self.assertEqual(runs[0], runs[1])

    def test_other_seed(self):
        """シードを変えても判定は変わらない"""
        a = run_suites(QUICK, suites=["model", "jacobi"])
        b = run_suites(QUICK.with_seed(77), suites=["model", "jacobi"])
        self.assertTrue(a.all_passed)
        self.assertTrue(b.all_passed)

    def test_quartic_symmetric(self):
        """f_i = -u_i⁴/6 は局所対称の NOTE を出す"""
        cfg = parse_config("s = 2\nf1 = -1/6*u^4\nf2 = -1/6*u^4\nsuites = invariants\n")
        report = run_suites(cfg)
        self.assertTrue(report.all_passed, [str(item) for item in report.failures])
        self.assertIsNotNone(report.find("invariants", "symmetric_space"))

    def test_exception_becomes_fail(self):
        """スイート内の例外は <suite>.error の FAIL 行になり、後続も実行される"""

        def broken(ctx, report):
            raise RuntimeError("boom")

        with patch.dict(suites.SUITES, {"model": broken}):
            report = run_suites(QUICK, suites=["model", "jacobi"])
        error = report.find("model", "error")
        self.assertFalse(error.passed)
        self.assertEqual(error.detail, "RuntimeError: boom")
        self.assertIsNotNone(report.find("jacobi", "spacelike_osserman"))


class TestSuiteContext(unittest.TestCase):
    """共有コンテキストのテスト"""

    def test_points(self):
        """設定の点を先頭に、足りない分はシードから引く"""
        cfg = parse_config("point.1 = u:1,2 t:3,4 v:0,0\n")
        ctx = SuiteContext.from_config(cfg)
        self.assertEqual(len(ctx.points), 5)
        self.assertEqual(ctx.points[0], cfg.points[0])
        self.assertEqual(ctx.points_upto(8)[:5], ctx.points)


class TestReports(unittest.TestCase):
    """invariants と scan のレポートのテスト"""

    def test_invariants_report(self):
        """点ごとの NOTE と判定の NOTE"""
        report = invariants_report(RunConfig(kmax=1))
        self.assertEqual([item.name for item in report.items][-1], "verdict")
        self.assertEqual(len(report.notes), 6)
        self.assertEqual(report.summary()["total"], 0)

    def test_scan_report(self):
        """空間的ベクトルの走査は (2,1,0)"""
        report = scan_report(QUICK, "spacelike", 1)
        self.assertIn("(2,1,0)", report.find("scan", "spacelike_k1").detail)


class TestCrosscheck(unittest.TestCase):
    """閉じた式とエンジンの検算のテスト"""

    def test_point_crosscheck(self):
        """s=2, 3 の乱択した族と点で全て一致する"""
        sampler = SeededSampler(8)
        for s in (2, 3):
            spec = random_family(s, sampler, 5)
            report = crosscheck_at(spec, PointCoords.random(s, sampler))
            self.assertTrue(report.all_passed, [str(item) for item in report.failures])
            self.assertEqual(len(report.checks), 3)

    def test_field_crosscheck(self):
        """多項式の恒等式として一致する。s=3 では省略形との差を NOTE で報告"""
        report = crosscheck_fields(cubic_family(2))
        self.assertTrue(report.all_passed)
        self.assertEqual(report.notes, [])
        report = crosscheck_fields(cubic_family(3))
        self.assertTrue(report.all_passed)
        self.assertIsNotNone(report.find("crosscheck", "fields.nabla_cross_terms"))

    def test_random_families_up_to_s4(self):
        """s = 2, 3, 4 のそれぞれで乱択した 5 つの族が多項式として一致する"""
        sampler = SeededSampler(9)
        for s in (2, 3, 4):
            for _ in range(5):
                spec = random_family(s, sampler, 4)
                report = crosscheck_fields(spec)
                self.assertTrue(report.all_passed, (s, spec.coefficients, [str(item) for item in report.failures]))
                self.assertEqual(len(report.checks), 4)

    def test_suite_uses_default_families(self):
        """既定の設定では crosscheck スイートが s=4 で 5 つの族を検算する"""
        cfg = parse_config("s = 4\nsuites = crosscheck\n")
        self.assertEqual(cfg.families, 5)
        report = run_suites(cfg)
        self.assertTrue(report.all_passed, [str(item) for item in report.failures])
        self.assertIsNotNone(report.find("crosscheck", "family5.fields.nabla_curvature"))
        self.assertIsNone(report.find("crosscheck", "family6.fields.nabla_curvature"))

    def test_fault_injection(self):
        """誤った閉じた式は FAIL になり、最初の不一致の添字が示される"""

        class Faulty(ClosedForms):
            def christoffel_at(self, spec, P):
                entries = super().christoffel_at(spec, P)
                key = (v_index(2, 0), u_index(2, 0), u_index(2, 0))
                entries[key] = entries.get(key, Fraction(0)) + 1
                return entries

        spec = cubic_family(2)
        report = crosscheck_at(spec, PointCoords((1, 2), (3, 4), (0, 0)), closed=Faulty())
        failure = report.find("crosscheck", "point.christoffel")
        self.assertFalse(failure.passed)
        self.assertIn("1 mismatches; first at (v1,u1,u1) closed=-5 engine=-6", failure.detail)
        self.assertTrue(report.find("crosscheck", "point.curvature").passed)

    def test_geometry_does_not_depend_on_report(self):
        """幾何の層は src.report を参照しない"""
        for module in (family_mf, invariants, jacobi_analysis, model_space):
            origins = {getattr(value, "__module__", None) or getattr(value, "__name__", "") for value in vars(module).values()}
            self.assertFalse([o for o in origins if isinstance(o, str) and o.startswith("src.report")], module.__name__)


class TestBasisIndependence(unittest.TestCase):
    """正規化基底の取り替えに対する g_U の不変性のテスト"""

    def test_random_pairs(self):
        """乱択した正規化基底の対で g_U が一致する"""
        sampler = SeededSampler(12)
        for s in (2, 3):
            ms = build_model(s)
            for _ in range(5):
                report = basis_independence_report(ms, random_normalized_basis(ms, sampler), random_normalized_basis(ms, sampler))
                self.assertTrue(report.all_passed, report.items)

    def test_rejects_invalid_basis(self):
        """正規化されていない B2 は FAIL として報告される"""
        ms = build_model(2)
        B = ms.standard_basis()
        vectors = list(B.vectors)
        vectors[4] = tuple(2 * x for x in vectors[4])
        report = basis_independence_report(ms, B, ModelBasis(2, vectors))
        self.assertFalse(report.all_passed)
        self.assertTrue(report.items[0].detail.startswith("B2 rejected: "))


if __name__ == "__main__":
    unittest.main()
