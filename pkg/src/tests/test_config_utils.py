#!/usr/bin/env python
# -*- coding: utf-8 -*-

import os
import unittest
from fractions import Fraction
from pathlib import Path
from unittest.mock import patch

from src.core.errors import ConfigError
from src.geometry.family_mf import PointCoords
from src.utils.config_utils import (
    SUITE_IDS,
    RunConfig,
    emit_config,
    format_poly,
    parse_config,
    parse_poly,
    safe_parse_config,
)
from src.utils.file_utils import read_text_file

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


class TestPolynomialGrammar(unittest.TestCase):
    """f_i の多項式文法のテスト"""

    def test_monomials(self):
        """u^3 と -1/6*u^4"""
        self.assertEqual(parse_poly("u^3"), ((3, Fraction(1)),))
        self.assertEqual(parse_poly("-1/6*u^4"), ((4, Fraction(-1, 6)),))

    def test_sum(self):
        """項の和と同類項の整理"""
        self.assertEqual(
            parse_poly("-1/6*u^4 + 2*u - 3 + u"),
            ((0, Fraction(-3)), (1, Fraction(3)), (4, Fraction(-1, 6))),
        )
        self.assertEqual(parse_poly("2u^2"), ((2, Fraction(2)),))
        self.assertEqual(parse_poly("u - u"), ())

    def test_errors(self):
        """不正な式は列つきの ConfigError"""
        with self.assertRaises(ConfigError) as ctx:
            parse_poly("u^", line=3, column_offset=5)
        self.assertEqual(ctx.exception.line, 3)
        self.assertEqual(ctx.exception.column, 8)
        with self.assertRaises(ConfigError):
            parse_poly("1/0*u")
        with self.assertRaises(ConfigError):
            parse_poly("u x")

    def test_format(self):
        """降順の文字列にして読み戻せる"""
        poly = ((0, Fraction(-3)), (1, Fraction(2)), (4, Fraction(-1, 6)))
        self.assertEqual(format_poly(poly), "-1/6*u^4 + 2*u - 3")
        self.assertEqual(parse_poly(format_poly(poly)), poly)
        self.assertEqual(format_poly(()), "0")


class TestParseConfig(unittest.TestCase):
    """設定ファイルのパースのテスト"""

    def test_defaults(self):
        """空でない最小の設定は既定値で補われる"""
        cfg = parse_config("s = 3\n")
        self.assertEqual(cfg.s, 3)
        self.assertEqual(cfg.seed, 1)
        self.assertEqual(cfg.samples, 100)
        self.assertEqual(cfg.plane_samples, 50)
        self.assertEqual(cfg.bound, 10)
        self.assertEqual(cfg.kmax, 2)
        self.assertEqual(cfg.families, 5)
        self.assertEqual(cfg.polys, (((3, Fraction(1)),),) * 3)
        self.assertEqual(cfg.suites, SUITE_IDS)

    def test_full(self):
        """全てのキー、コメント、点"""
        text = (
            "# 例\n"
            "s = 2\n"
            "f1 = -1/6*u^4   # 四次\n"
            "f2 = u^3\n"
            "seed = 42\n"
            "samples = 10\n"
            "point.1 = u:1,2 t:3,4 v:0,-1/2\n"
            "suites = jacobi, model\n"
        )
        cfg = parse_config(text)
        self.assertEqual(cfg.polys[0], ((4, Fraction(-1, 6)),))
        self.assertEqual(cfg.seed, 42)
        self.assertEqual(cfg.points, (PointCoords((1, 2), (3, 4), (0, Fraction(-1, 2))),))
        self.assertEqual(cfg.suites, ("model", "jacobi"))

    def test_s_too_small(self):
        """s = 1 は "s must be ≥ 2" """
        with self.assertRaises(ConfigError) as ctx:
            parse_config("s = 1\n")
        self.assertIn("s must be ≥ 2", str(ctx.exception))
        self.assertEqual(ctx.exception.line, 1)

    def test_unknown_key(self):
        """未知のキーは行・列つきで報告"""
        with self.assertRaises(ConfigError) as ctx:
            parse_config("s = 2\n  colour = red\n")
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 3))
        self.assertIn("unknown key", str(ctx.exception))

    def test_wrong_arity(self):
        """s を超える f_i や長さ違いの点は wrong arity"""
        with self.assertRaises(ConfigError) as ctx:
            parse_config("s = 2\nf3 = u\n")
        self.assertIn("wrong arity", str(ctx.exception))
        with self.assertRaises(ConfigError) as ctx:
            parse_config("s = 2\npoint.1 = u:1 t:1,2 v:0,0\n")
        self.assertIn("wrong arity", str(ctx.exception))

    def test_kmax_upper_bound(self):
        """kmax は CURVHOMO_KMAX_GUARD で決まる上限を超えられない"""
        with patch.dict(os.environ, {"CURVHOMO_KMAX_GUARD": ""}):
            self.assertEqual(parse_config("kmax = 3\n").kmax, 3)
            with self.assertRaises(ConfigError) as ctx:
                parse_config("s = 2\nkmax = 4\n")
        self.assertIn("kmax must be ≤ 3", str(ctx.exception))
        self.assertEqual((ctx.exception.line, ctx.exception.column), (2, 8))
        with patch.dict(os.environ, {"CURVHOMO_KMAX_GUARD": "5"}):
            self.assertEqual(parse_config("kmax = 4\n").kmax, 4)

    def test_malformed_rational(self):
        """点の有理数の書式エラー"""
        with self.assertRaises(ConfigError) as ctx:
            parse_config("point.1 = u:1,x t:0,0 v:0,0\n")
        self.assertIn("malformed rational", str(ctx.exception))

    def test_duplicate_and_unknown_suite(self):
        """重複キーと未知のスイート"""
        with self.assertRaises(ConfigError):
            parse_config("seed = 1\nseed = 2\n")
        with self.assertRaises(ConfigError):
            parse_config("suites = model, plots\n")

    def test_safe_parse(self):
        """safe_parse_config は (値, エラー) の組を返す"""
        cfg, error = safe_parse_config("s = 2\n")
        self.assertIsNotNone(cfg)
        self.assertIsNone(error)
        cfg, error = safe_parse_config("s = 0\n")
        self.assertIsNone(cfg)
        self.assertIn("1行目", error)
        self.assertEqual(safe_parse_config("  \n"), (None, "空の設定ファイル"))


class TestShippedConfigs(unittest.TestCase):
    """configs/ の設定ファイルのテスト"""

    def test_all_parse(self):
        """同梱の設定は全て読める"""
        for path in sorted(CONFIG_DIR.glob("*.cfg")):
            text, error = read_text_file(path)
            self.assertIsNone(error)
            cfg, error = safe_parse_config(text)
            self.assertIsNone(error, path.name)

    def test_mixed_runs_every_suite(self):
        """s3_mixed.cfg は全てのスイートを実行する"""
        text, _ = read_text_file(CONFIG_DIR / "s3_mixed.cfg")
        cfg = parse_config(text)
        self.assertEqual(cfg.s, 3)
        self.assertEqual(cfg.suites, SUITE_IDS)


class TestRoundTrip(unittest.TestCase):
    """emit_config と parse_config の往復のテスト"""

    def test_round_trip(self):
        """書き出して読み戻すと同じ設定"""
        cfg = RunConfig(
            s=3,
            polys=(((4, Fraction(-1, 6)),), ((0, Fraction(2)), (3, Fraction(1))), ()),
            seed=7,
            samples=20,
            points=(PointCoords((1, 0, -2), (Fraction(1, 3), 0, 0), (0, 0, 5)),),
            suites=("crosscheck", "invariants"),
        )
        self.assertEqual(parse_config(emit_config(cfg)), cfg)

    def test_with_seed(self):
        """with_seed はシードだけを替える"""
        cfg = RunConfig().with_seed(99)
        self.assertEqual(cfg.seed, 99)
        self.assertEqual(cfg.s, 2)


if __name__ == "__main__":
    unittest.main()
