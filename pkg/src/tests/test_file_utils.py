#!/usr/bin/env python
# -*- coding: utf-8 -*-

import tempfile
import unittest
from pathlib import Path

from src.utils.file_utils import ensure_dir_exists, read_text_file, write_report_file


class TestFileUtils(unittest.TestCase):
    """ファイル操作ユーティリティのテスト"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.root = Path(self.tmp.name)

    def tearDown(self):
        self.tmp.cleanup()

    def test_ensure_dir_exists(self):
        """文字列でも Path でもディレクトリを作る"""
        created = ensure_dir_exists(str(self.root / "a" / "b"))
        self.assertTrue(created.is_dir())
        self.assertEqual(ensure_dir_exists(created), created)

    def test_read_missing(self):
        """存在しないファイルはエラーメッセージを返す"""
        text, error = read_text_file(self.root / "missing.cfg")
        self.assertIsNone(text)
        self.assertIn("ファイルが存在しません", error)

    def test_write_and_read(self):
        """親ディレクトリを作って書き出し、読み戻せる"""
        path = write_report_file("CHECK a.b PASS\n", self.root / "out" / "report.txt")
        self.assertTrue(path.exists())
        self.assertEqual(read_text_file(path), ("CHECK a.b PASS\n", None))
        self.assertEqual(path.read_bytes(), b"CHECK a.b PASS\n")


if __name__ == "__main__":
    unittest.main()
