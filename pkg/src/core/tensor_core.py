#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
3s 次元空間上の多重添字テンソル

添字空間は密（全ての添字タプルが有効）だが、値はゼロでない成分だけを辞書に保持する。
縮約・引き戻し・代数的曲率テンソルの検査は全てゼロでない成分の走査で行う。
"""

import itertools
import logging
import os
from fractions import Fraction

from src.core.errors import CurvHomoError, DimensionError, ValenceError
from src.core.exact_algebra import as_fraction, identity, mat_mul, matrix, matrix_inverse, shape

logger = logging.getLogger(__name__)

DEFAULT_KMAX_GUARD = 3


def max_valence():
    """
    許容する最大の階数 4 + k_max

    環境変数 CURVHOMO_KMAX_GUARD で k_max を上書きできる。
    """
    raw = os.environ.get("CURVHOMO_KMAX_GUARD", "")
    try:
        guard = int(raw) if raw.strip() else DEFAULT_KMAX_GUARD
    except ValueError:
        logger.warning(f"⚠️ CURVHOMO_KMAX_GUARD の値が不正です: {raw!r}（既定値 {DEFAULT_KMAX_GUARD} を使用）")
        guard = DEFAULT_KMAX_GUARD
    return 4 + max(guard, 0)


def check_valence(valence):
    if valence < 0:
        raise ValenceError(f"階数が負です: {valence}")
    limit = max_valence()
    if valence > limit:
        raise ValenceError(f"階数 {valence} は上限 {limit} を超えています（CURVHOMO_KMAX_GUARD を確認）")


class Tensor:
    """
    有理数成分のテンソル

    Attributes:
        dim: 空間の次元
        valence: 添字の数
    """

    __slots__ = ("dim", "valence", "_entries")

    def __init__(self, dim, valence, entries=None):
        check_valence(valence)
        self.dim = dim
        self.valence = valence
        self._entries = {}
        for index, value in (entries or {}).items():
            index = tuple(index)
            if len(index) != valence or any(not 0 <= i < dim for i in index):
                raise DimensionError(f"添字 {index} は次元 {dim}・階数 {valence} の範囲外です")
            value = as_fraction(value)
            if value:
                self._entries[index] = value

    @classmethod
    def zero(cls, dim, valence):
        return cls(dim, valence)

    @classmethod
    def from_matrix(cls, M):
        n, m = shape(M)
        if n != m:
            raise DimensionError(f"正方行列ではありません: {shape(M)}")
        return cls(n, 2, {(i, j): M[i][j] for i in range(n) for j in range(n)})

    @property
    def size(self):
        """添字空間の大きさ dim ** valence"""
        return self.dim ** self.valence

    def __getitem__(self, index):
        return self._entries.get(tuple(index), Fraction(0))

    def items(self):
        """ゼロでない成分を添字順に返す"""
        return sorted(self._entries.items())

    def nonzero_count(self):
        return len(self._entries)

    def is_zero(self):
        return not self._entries

    def to_matrix(self):
        if self.valence != 2:
            raise ValenceError(f"行列化できるのは階数 2 のみです: {self.valence}")
        return matrix([[self[i, j] for j in range(self.dim)] for i in range(self.dim)])

    def scale(self, c):
        c = as_fraction(c)
        return Tensor(self.dim, self.valence, {k: c * v for k, v in self._entries.items()})

    def _check_same_shape(self, other):
        if (self.dim, self.valence) != (other.dim, other.valence):
            raise DimensionError(
                f"テンソルの形状が合いません: ({self.dim},{self.valence}) と ({other.dim},{other.valence})"
            )

    def __add__(self, other):
        self._check_same_shape(other)
        entries = dict(self._entries)
        for k, v in other._entries.items():
            entries[k] = entries.get(k, Fraction(0)) + v
        return Tensor(self.dim, self.valence, entries)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.dim, self.valence, self._entries) == (other.dim, other.valence, other._entries)

    def __repr__(self):
        return f"Tensor(dim={self.dim}, valence={self.valence}, nonzero={len(self._entries)})"


class LinearMap:
    """
    有理数行列で表した線形写像（列 a は基底ベクトル e_a の像）
    """

    def __init__(self, M, source_dim=None, target_dim=None):
        M = matrix(M)
        rows, cols = shape(M)
        if source_dim is not None and source_dim != cols:
            raise DimensionError(f"定義域の次元 {source_dim} と行列の列数 {cols} が合いません")
        if target_dim is not None and target_dim != rows:
            raise DimensionError(f"値域の次元 {target_dim} と行列の行数 {rows} が合いません")
        self.matrix = M
        self.source_dim = cols
        self.target_dim = rows

    @classmethod
    def identity(cls, n):
        return cls(identity(n))

    @classmethod
    def from_columns(cls, columns):
        """像ベクトルの列から作る"""
        return cls(tuple(zip(*columns)))

    def columns(self):
        return tuple(zip(*self.matrix))

    def apply(self, v):
        if len(v) != self.source_dim:
            raise DimensionError(f"ベクトルの次元 {len(v)} が定義域 {self.source_dim} と合いません")
        return tuple(sum((a * x for a, x in zip(row, v) if a and x), Fraction(0)) for row in self.matrix)

    def compose(self, other):
        """self ∘ other"""
        if other.target_dim != self.source_dim:
            raise DimensionError("合成する写像の次元が合いません")
        return LinearMap(mat_mul(self.matrix, other.matrix))

    def inverse(self):
        return LinearMap(matrix_inverse(self.matrix))

    def __eq__(self, other):
        return isinstance(other, LinearMap) and self.matrix == other.matrix


def pullback(T, L):
    """
    (L*T)(x_1, ..., x_r) = T(L x_1, ..., L x_r)

    Args:
        T: テンソル（次元は L の値域の次元）
        L: LinearMap

    Returns:
        Tensor: 次元は L の定義域の次元
    """
    if T.dim != L.target_dim:
        raise DimensionError(f"テンソルの次元 {T.dim} と写像の値域 {L.target_dim} が合いません")
    # b -> [(a, L[b][a])]: e_a の像が e_b 成分を持つもの
    preimages = [
        [(a, c) for a, c in enumerate(L.matrix[b]) if c]
        for b in range(L.target_dim)
    ]
    entries = {}
    for index, value in T.items():
        slots = [preimages[b] for b in index]
        for combo in itertools.product(*slots):
            key = tuple(a for a, _ in combo)
            term = value
            for _, c in combo:
                term *= c
            entries[key] = entries.get(key, Fraction(0)) + term
    return Tensor(L.source_dim, T.valence, entries)


def contract(T, metric_inverse, slot_pair):
    """
    2 つの添字を計量の逆行列で縮約する（階数が 2 減る）

    Args:
        T: テンソル
        metric_inverse: g^{ab}
        slot_pair: (p, q) 縮約する添字の位置
    """
    p, q = slot_pair
    if p == q or not (0 <= p < T.valence and 0 <= q < T.valence):
        raise ValenceError(f"縮約する添字の位置が不正です: {slot_pair}（階数 {T.valence}）")
    if shape(metric_inverse) != (T.dim, T.dim):
        raise DimensionError("計量の逆行列の次元がテンソルと合いません")
    keep = [i for i in range(T.valence) if i not in (p, q)]
    entries = {}
    for index, value in T.items():
        c = metric_inverse[index[p]][index[q]]
        if not c:
            continue
        key = tuple(index[i] for i in keep)
        entries[key] = entries.get(key, Fraction(0)) + c * value
    return Tensor(T.dim, T.valence - 2, entries)


def partial_apply(T, assignments):
    """
    指定した添字にベクトルを代入する

    Args:
        T: テンソル
        assignments: {添字位置: ベクトル}

    Returns:
        Tensor: 残りの添字のテンソル（全て代入すれば階数 0）
    """
    for slot, vec in assignments.items():
        if not 0 <= slot < T.valence:
            raise ValenceError(f"添字位置 {slot} は階数 {T.valence} の範囲外です")
        if len(vec) != T.dim:
            raise DimensionError(f"ベクトルの次元 {len(vec)} がテンソルの次元 {T.dim} と合いません")
    keep = [i for i in range(T.valence) if i not in assignments]
    entries = {}
    for index, value in T.items():
        term = value
        for slot, vec in assignments.items():
            x = vec[index[slot]]
            if not x:
                term = None
                break
            term *= x
        if term is None:
            continue
        key = tuple(index[i] for i in keep)
        entries[key] = entries.get(key, Fraction(0)) + term
    return Tensor(T.dim, len(keep), entries)


def evaluate(T, *vectors):
    """T(x_1, ..., x_r) を有理数として返す"""
    if len(vectors) != T.valence:
        raise ValenceError(f"引数の数 {len(vectors)} が階数 {T.valence} と合いません")
    return partial_apply(T, dict(enumerate(vectors)))[()]


Z2_PARTNERS = (
    ((0, 1, 2, 3), 1),
    ((1, 0, 2, 3), -1),
    ((0, 1, 3, 2), -1),
    ((1, 0, 3, 2), 1),
    ((2, 3, 0, 1), 1),
    ((3, 2, 0, 1), -1),
    ((2, 3, 1, 0), -1),
    ((3, 2, 1, 0), 1),
)


def expand_z2_orbit(index, value):
    """
    曲率テンソルの対称性 R(x,y,z,w) = R(z,w,x,y) = -R(y,x,z,w) による 8 つの相手

    先頭 4 つの添字だけを入れ替え、5 番目以降（微分の添字）はそのまま残す。

    Returns:
        dict: {添字タプル: 値}
    """
    index = tuple(index)
    if len(index) < 4:
        raise ValenceError(f"先頭 4 つの添字が必要です: {index}")
    value = as_fraction(value)
    head, tail = index[:4], index[4:]
    orbit = {}
    for perm, sign in Z2_PARTNERS:
        key = tuple(head[i] for i in perm) + tail
        partner = sign * value
        if key in orbit and orbit[key] != partner:
            raise CurvHomoError(f"成分 {index} は対称性と矛盾します（{key} が 0 でなければならない）")
        orbit[key] = partner
    return orbit


def check_pair_symmetries(R, limit=10):
    """
    R(x,y,z,w) = R(z,w,x,y) = -R(y,x,z,w) の検査

    Returns:
        list: 違反した添字タプル（最大 limit 個）
    """
    if R.valence != 4:
        raise ValenceError(f"階数 4 のテンソルが必要です: {R.valence}")
    violations = []
    for (x, y, z, w), value in R.items():
        if R[z, w, x, y] != value or R[y, x, z, w] != -value:
            violations.append((x, y, z, w))
            if len(violations) >= limit:
                break
    return violations


def check_first_bianchi(R, limit=10):
    """
    R(x,y,z,w) + R(y,z,x,w) + R(z,x,y,w) = 0 の検査

    和がゼロでない添字は必ずどれかの項がゼロでないので、
    ゼロでない成分の巡回置換だけを調べれば十分。
    """
    if R.valence != 4:
        raise ValenceError(f"階数 4 のテンソルが必要です: {R.valence}")
    candidates = set()
    for (a, b, c, w), _ in R.items():
        candidates.update({(a, b, c, w), (c, a, b, w), (b, c, a, w)})
    violations = []
    for x, y, z, w in sorted(candidates):
        if R[x, y, z, w] + R[y, z, x, w] + R[z, x, y, w] != 0:
            violations.append((x, y, z, w))
            if len(violations) >= limit:
                break
    return violations


def second_bianchi_violations(nabla_R, limit=10):
    """
    ∇R(x,y,z,w;v) + ∇R(y,v,z,w;x) + ∇R(v,x,z,w;y) = 0 の検査（微分の添字は最後）
    """
    if nabla_R.valence != 5:
        raise ValenceError(f"階数 5 のテンソルが必要です: {nabla_R.valence}")
    candidates = set()
    for (a, b, c, d, e), _ in nabla_R.items():
        candidates.update({(a, b, c, d, e), (e, a, c, d, b), (b, e, c, d, a)})
    violations = []
    for x, y, z, w, v in sorted(candidates):
        total = nabla_R[x, y, z, w, v] + nabla_R[y, v, z, w, x] + nabla_R[v, x, z, w, y]
        if total:
            violations.append((x, y, z, w, v))
            if len(violations) >= limit:
                break
    return violations


def tensor_differences(A, B, limit=None):
    """
    成分ごとの差分

    Returns:
        list: (添字, A の値, B の値) のリスト（添字順）
    """
    A._check_same_shape(B)
    keys = sorted(set(k for k, _ in A.items()) | set(k for k, _ in B.items()))
    diffs = []
    for k in keys:
        if A[k] != B[k]:
            diffs.append((k, A[k], B[k]))
            if limit is not None and len(diffs) >= limit:
                break
    return diffs
