#!/usr/bin/env python
# -*- coding: utf-8 -*-
"""
curvhomo - エントリーポイント

このスクリプトは以下の機能を提供します:
1. verify: 検証スイートの実行とレポート出力
2. invariants: 各点での不変量 α と局所等質性の判定
3. scan: モデル上のヤコビ作用素のジョルダン型の走査
"""

import argparse
import logging
import os
import sys

from src.core.errors import CurvHomoError
from src.report.suites import invariants_report, run_suites, scan_report
from src.report.verification import emit_report
from src.utils.config_utils import SUITE_IDS, safe_parse_config
from src.utils.file_utils import read_text_file, write_report_file

# Windows環境での文字化けを防ぐためにUTF-8出力に設定
if sys.platform == "win32":
    os.environ["PYTHONIOENCODING"] = "utf-8"

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_CONFIG = 2

logger = logging.getLogger("curvhomo")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="curvhomo",
        description="curvhomo - 曲率等質な擬リーマン多様体族を厳密な有理数計算で検証するツール",
    )
    parser.add_argument("--verbose", action="store_true", help="詳細なログを標準エラーに出力する")
    sub = parser.add_subparsers(dest="command")

    verify = sub.add_parser("verify", help="検証スイートを実行する")
    verify.add_argument("config", help="設定ファイル")
    verify.add_argument("--format", choices=("text", "tsv"), default="text", help="出力形式")
    verify.add_argument("--suite", nargs="+", choices=SUITE_IDS, help="実行するスイート（省略時は設定に従う）")
    verify.add_argument("--out", help="レポートの出力先ファイル（省略時は標準出力）")

    invariants = sub.add_parser("invariants", help="各点の不変量 α を計算する")
    invariants.add_argument("config", help="設定ファイル")
    invariants.add_argument("--out", help="出力先ファイル")

    scan = sub.add_parser("scan", help="モデル上の k 平面のジョルダン型を走査する")
    scan.add_argument("config", help="設定ファイル")
    scan.add_argument("--type", choices=("spacelike", "timelike"), required=True, help="因果型")
    scan.add_argument("--k", type=int, default=1, help="平面の次元")
    scan.add_argument("--out", help="出力先ファイル")
    return parser


def load_config(path):
    """
    設定ファイルを読み、CURVHOMO_SEED があればシードを上書きする

    Returns:
        tuple: (RunConfig, None) または (None, エラーメッセージ)
    """
    text, error = read_text_file(path)
    if error:
        return None, error
    cfg, error = safe_parse_config(text)
    if error:
        return None, f"{path}: {error}"
    seed = os.environ.get("CURVHOMO_SEED")
    if seed is not None:
        try:
            cfg = cfg.with_seed(int(seed))
        except ValueError:
            return None, f"CURVHOMO_SEED が整数ではありません: {seed!r}"
        logger.info(f"💡 CURVHOMO_SEED によりシードを {cfg.seed} に設定しました")
    return cfg, None


def write_output(text, out):
    if out:
        path = write_report_file(text, out)
        logger.info(f"✅ レポートを書き出しました: {path}")
    else:
        sys.stdout.write(text)


def main(argv=None):
    """メイン関数"""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    if not args.command:
        parser.print_help(sys.stderr)
        print("💡 サブコマンド verify / invariants / scan のいずれかを指定してください。", file=sys.stderr)
        return EXIT_CONFIG

    cfg, error = load_config(args.config)
    if error:
        print(f"❌ 設定エラー: {error}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "verify":
        report = run_suites(cfg, suites=args.suite)
        write_output(emit_report(report, args.format), args.out)
        return EXIT_OK if report.all_passed else EXIT_FAIL

    try:
        if args.command == "invariants":
            report = invariants_report(cfg)
        else:
            report = scan_report(cfg, args.type, args.k)
    except CurvHomoError as e:
        print(f"❌ {e}", file=sys.stderr)
        return EXIT_FAIL
    write_output(emit_report(report), args.out)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
