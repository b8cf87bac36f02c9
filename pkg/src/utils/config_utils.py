#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
設定ファイルの読み書き

行単位の `key = value` 形式。`#` 以降はコメント。

    s = 2
    f1 = -1/6*u^4 + 2*u
    seed = 1
    point.1 = u:1,2 t:3,4 v:0,0

多項式の文法:
    poly  := term (('+'|'-') term)*
    term  := coeff ['*'] ['u' ['^' uint]]
    coeff := int ['/' posint]
"""

import logging
import re
from dataclasses import dataclass, replace
from fractions import Fraction

from src.core.errors import ConfigError
from src.core.exact_algebra import SeededSampler, format_rational
from src.core.tensor_core import max_valence
from src.geometry.family_mf import FamilySpec, PointCoords

logger = logging.getLogger(__name__)

SUITE_IDS = ("model", "crosscheck", "curvature", "homogeneity", "jacobi", "higher_jacobi", "quotient", "invariants")

DEFAULT_POLY = ((3, Fraction(1)),)

_INT_KEYS = {
    # key: 最小値
    "seed": None,
    "samples": 2,
    "plane_samples": 2,
    "bound": 1,
    "kmax": 1,
    "families": 0,
    "degree": 0,
}

_INT_MAXIMA = {
    # ∇^k R の階数 4 + k が上限を超えないこと
    "kmax": lambda: max_valence() - 4,
}


@dataclass(frozen=True)
class RunConfig:
    """
    検証の実行設定

    polys[i] は f_{i+1} の ((次数, 係数), ...)。points が空なら実行時にシードから 5 点を引く。
    """

    s: int = 2
    polys: tuple = (DEFAULT_POLY, DEFAULT_POLY)
    seed: int = 1
    samples: int = 100
    plane_samples: int = 50
    bound: int = 10
    kmax: int = 2
    families: int = 5
    degree: int = 5
    points: tuple = ()
    suites: tuple = SUITE_IDS

    def family(self):
        return FamilySpec(self.s, self.polys)

    def sampler(self, label=""):
        base = SeededSampler(self.seed, self.bound)
        return base.fork(label) if label else base

    def with_seed(self, seed):
        return replace(self, seed=int(seed))


class _PolyParser:
    """f の右辺を 1 文字ずつ読む再帰下降パーサ"""

    def __init__(self, text, line, column_offset):
        self.text = text
        self.pos = 0
        self.line = line
        self.column_offset = column_offset

    def error(self, message):
        raise ConfigError(message, self.line, self.column_offset + self.pos + 1)

    def peek(self):
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def skip(self):
        while self.peek() in (" ", "\t"):
            self.pos += 1

    def digits(self):
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected digits")
        return int(self.text[start:self.pos])

    def rational(self):
        numerator = self.digits()
        self.skip()
        if self.peek() == "/":
            self.pos += 1
            self.skip()
            if not self.peek().isdigit():
                self.error("malformed rational: expected denominator")
            denominator = self.digits()
            if denominator == 0:
                self.pos -= 1
                self.error("malformed rational: zero denominator")
            return Fraction(numerator, denominator)
        return Fraction(numerator)

    def term(self, sign, terms):
        self.skip()
        coeff = None
        if self.peek().isdigit():
            coeff = self.rational()
            self.skip()
        starred = False
        if self.peek() == "*":
            if coeff is None:
                self.error("'*' without a coefficient")
            self.pos += 1
            self.skip()
            starred = True
        degree = 0
        if self.peek() == "u":
            self.pos += 1
            degree = 1
            self.skip()
            if self.peek() == "^":
                self.pos += 1
                self.skip()
                degree = self.digits()
        elif starred or coeff is None:
            self.error("expected 'u' or a coefficient")
        value = sign * (coeff if coeff is not None else Fraction(1))
        terms[degree] = terms.get(degree, Fraction(0)) + value

    def parse(self):
        terms = {}
        self.skip()
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.peek() == "-" else 1
            self.pos += 1
        self.term(sign, terms)
        while True:
            self.skip()
            ch = self.peek()
            if not ch:
                break
            if ch not in ("+", "-"):
                self.error(f"unexpected character {ch!r}")
            self.pos += 1
            self.term(-1 if ch == "-" else 1, terms)
        return tuple(sorted((n, c) for n, c in terms.items() if c))


def parse_poly(text, line=None, column_offset=0):
    """多項式の文字列を ((次数, 係数), ...) にする"""
    return _PolyParser(text, line, column_offset).parse()


def format_poly(poly):
    """((次数, 係数), ...) を文法どおりの文字列にする（次数の降順）"""
    if not poly:
        return "0"
    parts = []
    for degree, coeff in sorted(poly, reverse=True):
        body = format_rational(abs(coeff))
        if degree == 1:
            body += "*u"
        elif degree > 1:
            body += f"*u^{degree}"
        if not parts:
            parts.append(("-" if coeff < 0 else "") + body)
        else:
            parts.append(("- " if coeff < 0 else "+ ") + body)
    return " ".join(parts)


_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")


def _parse_rational_list(text, line, column):
    values = []
    for item in text.split(","):
        item = item.strip()
        if not _RATIONAL.match(item):
            raise ConfigError(f"malformed rational {item!r}", line, column)
        numerator, _, denominator = item.partition("/")
        if denominator and int(denominator) == 0:
            raise ConfigError(f"malformed rational {item!r}: zero denominator", line, column)
        values.append(Fraction(int(numerator), int(denominator or 1)))
    return tuple(values)


def _parse_point(value, line, column):
    parts = {}
    offset = 0
    for chunk in value.split():
        name, sep, rest = chunk.partition(":")
        chunk_column = column + value.index(chunk, offset)
        offset = value.index(chunk, offset) + len(chunk)
        if not sep or name not in ("u", "t", "v"):
            raise ConfigError(f"expected u:<list> t:<list> v:<list>, got {chunk!r}", line, chunk_column)
        if name in parts:
            raise ConfigError(f"duplicate component {name!r}", line, chunk_column)
        parts[name] = (_parse_rational_list(rest, line, chunk_column + len(name) + 1), chunk_column)
    missing = [n for n in ("u", "t", "v") if n not in parts]
    if missing:
        raise ConfigError(f"point is missing {','.join(missing)}", line, column)
    return parts


def parse_config(text):
    """
    設定テキストを RunConfig にする

    Raises:
        ConfigError: 行・列つきの診断
    """
    values = {}
    seen = {}
    poly_entries = {}
    point_entries = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line_no, len(line) - len(line.lstrip()) + 1)
        key_part, value_part = line.split("=", 1)
        key = key_part.strip()
        key_column = len(key_part) - len(key_part.lstrip()) + 1
        value = value_part.strip()
        value_column = len(key_part) + 2 + (len(value_part) - len(value_part.lstrip()))
        if key in seen:
            raise ConfigError(f"duplicate key {key!r} (first on line {seen[key]})", line_no, key_column)
        seen[key] = line_no
        if not value:
            raise ConfigError(f"missing value for {key!r}", line_no, value_column)

        if key == "s" or key in _INT_KEYS:
            if not re.match(r"^-?\d+$", value):
                raise ConfigError(f"{key} must be an integer", line_no, value_column)
            number = int(value)
            if key == "s" and number < 2:
                raise ConfigError("s must be ≥ 2", line_no, value_column)
            minimum = _INT_KEYS.get(key)
            if minimum is not None and number < minimum:
                raise ConfigError(f"{key} must be ≥ {minimum}", line_no, value_column)
            if key in _INT_MAXIMA and number > _INT_MAXIMA[key]():
                raise ConfigError(
                    f"{key} must be ≤ {_INT_MAXIMA[key]()} (CURVHOMO_KMAX_GUARD)", line_no, value_column
                )
            values[key] = (number, line_no, value_column)
        elif re.match(r"^f\d+$", key):
            poly_entries[int(key[1:])] = (parse_poly(value, line_no, value_column - 1), line_no, key_column)
        elif re.match(r"^point\.\d+$", key):
            point_entries[int(key.split(".")[1])] = (_parse_point(value, line_no, value_column), line_no, key_column)
        elif key == "suites":
            ids = tuple(x.strip() for x in value.split(","))
            unknown = [x for x in ids if x not in SUITE_IDS]
            if unknown:
                raise ConfigError(f"unknown suite {unknown[0]!r}", line_no, value_column)
            values[key] = (tuple(x for x in SUITE_IDS if x in ids), line_no, value_column)
        else:
            raise ConfigError(f"unknown key {key!r}", line_no, key_column)

    s = values["s"][0] if "s" in values else 2
    polys = []
    for index, (_, line_no, column) in sorted(poly_entries.items()):
        if not 1 <= index <= s:
            raise ConfigError(f"f{index} does not exist for s={s} (wrong arity)", line_no, column)
    for i in range(1, s + 1):
        polys.append(poly_entries[i][0] if i in poly_entries else DEFAULT_POLY)

    points = []
    for _, (parts, line_no, column) in sorted(point_entries.items()):
        for name in ("u", "t", "v"):
            vector, chunk_column = parts[name]
            if len(vector) != s:
                raise ConfigError(
                    f"{name} has {len(vector)} entries, expected {s} (wrong arity)", line_no, chunk_column
                )
        points.append(PointCoords(parts["u"][0], parts["t"][0], parts["v"][0]))

    kwargs = {key: entry[0] for key, entry in values.items()}
    kwargs["s"] = s
    kwargs["polys"] = tuple(polys)
    kwargs["points"] = tuple(points)
    cfg = RunConfig(**kwargs)
    logger.debug(f"✅ 設定を読み込みました: s={cfg.s}, seed={cfg.seed}, suites={','.join(cfg.suites)}")
    return cfg


def safe_parse_config(text):
    """
    設定を安全にパースする

    Returns:
        tuple: (RunConfig, None) または (None, エラーメッセージ)
    """
    if not text or not text.strip():
        return None, "空の設定ファイル"
    try:
        return parse_config(text), None
    except ConfigError as e:
        logger.warning(f"⚠️ 設定のパースエラー: {e}")
        return None, str(e)


def emit_config(cfg):
    """RunConfig を parse_config で読み戻せるテキストにする"""
    lines = [f"s = {cfg.s}"]
    for i, poly in enumerate(cfg.polys, start=1):
        lines.append(f"f{i} = {format_poly(poly)}")
    for key in ("seed", "samples", "plane_samples", "bound", "kmax", "families", "degree"):
        lines.append(f"{key} = {getattr(cfg, key)}")
    for n, P in enumerate(cfg.points, start=1):
        parts = " ".join(
            f"{name}:{','.join(format_rational(x) for x in getattr(P, name))}" for name in ("u", "t", "v")
        )
        lines.append(f"point.{n} = {parts}")
    lines.append(f"suites = {','.join(cfg.suites)}")
    return "\n".join(lines) + "\n"
