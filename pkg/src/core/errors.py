#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
検証ライブラリ全体で使う例外クラス
"""


class CurvHomoError(ValueError):
    """ライブラリ共通の基底例外"""


class DimensionError(CurvHomoError):
    """次元・形状の不一致"""


class ValenceError(CurvHomoError):
    """テンソルの階数が不正、または上限を超えている"""


class NonSymmetricError(CurvHomoError):
    """対称行列が要求される場所に非対称行列が渡された"""


class DegenerateMetricError(CurvHomoError):
    """計量（またはグラム行列）が退化している、または定符号でない"""


class NotOrthogonalError(CurvHomoError):
    """直交行列が要求される場所に非直交行列が渡された"""


class MetricFieldError(CurvHomoError):
    """多項式計量場の行列式が非ゼロ定数でない"""


class NotNormalizedError(CurvHomoError):
    """正規化基底でない基底が渡された"""


class UnrealizableSampleError(CurvHomoError):
    """符号数 (2s,s) では実現できない (type, k) の組"""


class SamplerExhaustedError(CurvHomoError):
    """棄却サンプリングの試行回数を使い切った"""


class NotNilpotentError(CurvHomoError):
    """冪零でない作用素の階数列からジョルダン分割を求めようとした"""


class ConfigError(CurvHomoError):
    """設定ファイルの構文・値のエラー（行・列つき）"""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(self.__str__())

    def __str__(self):
        if self.line is None:
            return self.message
        if self.column is None:
            return f"{self.line}行目: {self.message}"
        return f"{self.line}行目 {self.column}列: {self.message}"
