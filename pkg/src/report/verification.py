#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
検証レポート（CHECK / NOTE 行の順序付きリスト）と出力
"""

from dataclasses import dataclass, field
from fractions import Fraction

from src.core.exact_algebra import format_rational

PASS = "PASS"
FAIL = "FAIL"


@dataclass(frozen=True)
class CheckResult:
    """1 行分の結果。kind は CHECK か NOTE（NOTE は集計に含めない）"""

    suite: str
    name: str
    status: str
    detail: str = ""
    kind: str = "CHECK"

    @property
    def passed(self):
        return self.status == PASS


def format_value(value):
    """詳細文字列用の値の整形（有理数は p/q）"""
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return format_rational(value)
    if isinstance(value, tuple):
        return "(" + ",".join(format_value(v) for v in value) + ")"
    if isinstance(value, list):
        return "[" + ",".join(format_value(v) for v in value) + "]"
    return str(value)


@dataclass
class VerificationReport:
    """
    検査結果の順序付きリスト
    """

    items: list = field(default_factory=list)

    def add_check(self, suite, name, passed, detail=""):
        self.items.append(CheckResult(suite, name, PASS if passed else FAIL, _single_line(detail)))
        return passed

    def add_note(self, suite, name, detail):
        self.items.append(CheckResult(suite, name, "", _single_line(detail), kind="NOTE"))

    def extend(self, other):
        self.items.extend(other.items)

    @property
    def checks(self):
        return [item for item in self.items if item.kind == "CHECK"]

    @property
    def notes(self):
        return [item for item in self.items if item.kind == "NOTE"]

    @property
    def failures(self):
        return [item for item in self.checks if not item.passed]

    @property
    def all_passed(self):
        return not self.failures

    def summary(self):
        checks = self.checks
        passed = sum(1 for c in checks if c.passed)
        return {"total": len(checks), "pass": passed, "fail": len(checks) - passed}

    def find(self, suite, name):
        return next((item for item in self.items if item.suite == suite and item.name == name), None)


def _single_line(text):
    return " ".join(str(text).split())


def emit_report(report, fmt="text"):
    """
    レポートを文字列にする

    Args:
        report: VerificationReport
        fmt: "text" または "tsv"

    Returns:
        str: 末尾改行つきのテキスト
    """
    if fmt not in ("text", "tsv"):
        raise ValueError(f"未対応の出力形式です: {fmt}")
    lines = []
    for item in report.items:
        label = f"{item.suite}.{item.name}"
        if item.kind == "NOTE":
            fields = ["NOTE", label, item.detail]
        else:
            fields = ["CHECK", label, item.status, item.detail]
        if fmt == "tsv":
            lines.append("\t".join(fields))
        else:
            lines.append(" ".join(f for f in fields if f))
    summary = report.summary()
    if fmt == "tsv":
        lines.append("\t".join(["SUMMARY", f"total={summary['total']}", f"pass={summary['pass']}", f"fail={summary['fail']}"]))
    else:
        lines.append(f"SUMMARY total={summary['total']} pass={summary['pass']} fail={summary['fail']}")
    return "\n".join(lines) + "\n"
