#!/usr/bin/env python
# -*- coding: utf-8 -*-

from pathlib import Path


def ensure_dir_exists(dir_path):
    """
    ディレクトリが存在することを確認し、存在しない場合は作成する

    Args:
        dir_path: 作成するディレクトリのパス（文字列またはPathオブジェクト）

    Returns:
        Path: 作成されたディレクトリのPathオブジェクト
    """
    path = Path(dir_path) if isinstance(dir_path, str) else dir_path
    path.mkdir(parents=True, exist_ok=True)
    return path


def read_text_file(filepath):
    """
    UTF-8 のテキストファイルを読む

    Returns:
        tuple: (内容, None) または (None, エラーメッセージ)
    """
    path = Path(filepath)
    if not path.exists():
        return None, f"ファイルが存在しません: {filepath}"
    try:
        return path.read_text(encoding="utf-8"), None
    except (OSError, UnicodeDecodeError) as e:
        return None, f"ファイル読み込みエラー: {e}"


def write_report_file(text, filepath):
    """
    レポートを UTF-8 で書き出す（親ディレクトリは必要なら作成）

    Returns:
        Path: 書き出したファイルのパス
    """
    path = Path(filepath)
    ensure_dir_exists(path.parent)
    # 改行コードはプラットフォームによらず LF
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)
    return path
