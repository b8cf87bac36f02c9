#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
厳密有理数演算の基盤モジュール

- 有理数: fractions.Fraction（常に既約、分母は正）
- 多項式: sympy の疎多項式環 (QQ 上) の元
- 行列: Fraction のタプルのタプル（不変値）
- 乱数: シード固定の有理数サンプラー

検証経路に浮動小数点は一切現れない。
"""

import hashlib
import random
from fractions import Fraction
from functools import lru_cache
from math import lcm

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from src.core.errors import DegenerateMetricError, DimensionError, NonSymmetricError


# ---------------------------------------------------------------------------
# 有理数
# ---------------------------------------------------------------------------

def as_fraction(value):
    """
    int / Fraction / 文字列 / sympy の QQ 要素を Fraction に変換する

    Args:
        value: 変換する値

    Returns:
        Fraction: 既約分数
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    # QQ 要素 (PythonMPQ / gmpy2.mpq) は numerator/denominator を持つ
    return Fraction(int(value.numerator), int(value.denominator))


def to_qq(value):
    """Fraction を多項式環の係数体 QQ の元に変換する"""
    value = as_fraction(value)
    return QQ(value.numerator, value.denominator)


def format_rational(value):
    """有理数を `p/q`（整数なら `p`）の形で文字列化する"""
    value = as_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# ---------------------------------------------------------------------------
# 行列（Fraction のタプルのタプル）
# ---------------------------------------------------------------------------

def matrix(rows):
    """入れ子のシーケンスから不変な有理数行列を作る"""
    result = tuple(tuple(as_fraction(x) for x in row) for row in rows)
    if result and len({len(row) for row in result}) != 1:
        raise DimensionError("行の長さが揃っていません")
    return result


def vector(values):
    return tuple(as_fraction(x) for x in values)


def identity(n):
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def diagonal(entries):
    entries = [as_fraction(x) for x in entries]
    n = len(entries)
    return tuple(tuple(entries[i] if i == j else Fraction(0) for j in range(n)) for i in range(n))


def shape(M):
    return (len(M), len(M[0]) if M else 0)


def transpose(M):
    return tuple(zip(*M)) if M else ()


def mat_mul(A, B):
    if shape(A)[1] != shape(B)[0]:
        raise DimensionError(f"行列積の形状が合いません: {shape(A)} x {shape(B)}")
    Bt = transpose(B)
    return tuple(
        tuple(sum((a * b for a, b in zip(row, col) if a and b), Fraction(0)) for col in Bt)
        for row in A
    )


def mat_add(A, B):
    if shape(A) != shape(B):
        raise DimensionError(f"行列和の形状が合いません: {shape(A)} + {shape(B)}")
    return tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_sub(A, B):
    if shape(A) != shape(B):
        raise DimensionError(f"行列差の形状が合いません: {shape(A)} - {shape(B)}")
    return tuple(tuple(a - b for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_scale(M, c):
    c = as_fraction(c)
    return tuple(tuple(c * x for x in row) for row in M)


def mat_vec(M, v):
    if shape(M)[1] != len(v):
        raise DimensionError(f"行列とベクトルの次元が合いません: {shape(M)} と {len(v)}")
    return tuple(sum((a * b for a, b in zip(row, v) if a and b), Fraction(0)) for row in M)


def mat_power(M, k):
    result = identity(len(M))
    for _ in range(k):
        result = mat_mul(result, M)
    return result


def vec_add(x, y):
    return tuple(a + b for a, b in zip(x, y))


def vec_scale(x, c):
    c = as_fraction(c)
    return tuple(c * a for a in x)


def linear_combination(coefficients, vectors):
    """Σ c_i v_i を計算する"""
    n = len(vectors[0])
    total = [Fraction(0)] * n
    for c, v in zip(coefficients, vectors):
        if not c:
            continue
        for i, x in enumerate(v):
            if x:
                total[i] += c * x
    return tuple(total)


def bilinear(g, x, y):
    """g(x, y) = xᵀ g y"""
    return sum((a * b for a, b in zip(x, mat_vec(g, y)) if a and b), Fraction(0))


def gram_matrix(g, vectors):
    return tuple(tuple(bilinear(g, x, y) for y in vectors) for x in vectors)


def is_symmetric(M):
    n, m = shape(M)
    return n == m and all(M[i][j] == M[j][i] for i in range(n) for j in range(i + 1, n))


def is_skew(M):
    n, m = shape(M)
    return n == m and all(M[i][j] == -M[j][i] for i in range(n) for j in range(i, n))


def is_orthogonal(Q):
    n, m = shape(Q)
    return n == m and mat_mul(transpose(Q), Q) == identity(n)


def _integer_rows(M):
    """各行を分母の最小公倍数倍して整数行にする（階数は不変）"""
    rows = []
    for row in M:
        scale = lcm(*(x.denominator for x in row)) if row else 1
        rows.append([int(x * scale) for x in row])
    return rows


def matrix_rank(M):
    """
    分数なし（Bareiss）ガウス消去による厳密な階数

    許容誤差のパラメータは存在しない。

    Args:
        M: 有理数行列（長方行列も可）

    Returns:
        int: 階数
    """
    A = _integer_rows(matrix(M))
    n_rows = len(A)
    n_cols = len(A[0]) if A else 0
    rank = 0
    previous = 1
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if A[r][col] != 0), None)
        if pivot is None:
            continue
        A[rank], A[pivot] = A[pivot], A[rank]
        p = A[rank][col]
        for r in range(rank + 1, n_rows):
            factor = A[r][col]
            for c in range(col + 1, n_cols):
                q, remainder = divmod(p * A[r][c] - factor * A[rank][c], previous)
                if remainder:
                    raise ArithmeticError("Bareiss 消去で割り切れない除算が発生しました")
                A[r][c] = q
            A[r][col] = 0
        previous = p
        rank += 1
        if rank == n_rows:
            break
    return rank


def rref(M):
    """
    既約行階段形と主列のリストを返す

    Returns:
        tuple: (行階段形の行リスト, 主列インデックスのリスト)
    """
    A = [list(row) for row in matrix(M)]
    n_rows = len(A)
    n_cols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for col in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if A[i][col] != 0), None)
        if pivot is None:
            continue
        A[r], A[pivot] = A[pivot], A[r]
        p = A[r][col]
        A[r] = [x / p for x in A[r]]
        for i in range(n_rows):
            if i != r and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    return A, pivots


def nullspace(M, n_cols=None):
    """
    M x = 0 の解空間の基底

    Args:
        M: 有理数行列（行が空でもよい）
        n_cols: 行が無い場合の列数

    Returns:
        list: 基底ベクトル（タプル）のリスト
    """
    if not M:
        if n_cols is None:
            raise DimensionError("行の無い行列には列数の指定が必要です")
        return [tuple(Fraction(int(i == j)) for i in range(n_cols)) for j in range(n_cols)]
    A, pivots = rref(M)
    n = len(A[0])
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row_index, p in enumerate(pivots):
            x[p] = -A[row_index][f]
        basis.append(tuple(x))
    return basis


@lru_cache(maxsize=256)
def _inverse_cached(M):
    n = len(M)
    A = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            raise DegenerateMetricError("行列が正則ではありません")
        A[col], A[pivot] = A[pivot], A[col]
        p = A[col][col]
        A[col] = [x / p for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return tuple(tuple(row[n:]) for row in A)


def matrix_inverse(M):
    """ガウス・ジョルダン法による厳密な逆行列（特異なら DegenerateMetricError）"""
    M = matrix(M)
    n, m = shape(M)
    if n != m:
        raise DimensionError(f"正方行列ではありません: {shape(M)}")
    return _inverse_cached(M)


def determinant(M):
    M = matrix(M)
    n, m = shape(M)
    if n != m:
        raise DimensionError(f"正方行列ではありません: {shape(M)}")
    A = [list(row) for row in M]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = -det
        p = A[col][col]
        det *= p
        for r in range(col + 1, n):
            if A[r][col] != 0:
                f = A[r][col] / p
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return det


def congruence_diagonalize(M):
    """
    対称行列の合同変換による対角化

    Pᵀ M P = diag(d) となる正則行列 P と対角成分 d を返す。
    対角成分が全て 0 の場合は e_k ← e_k + e_j で非ゼロの対角を作る。

    Args:
        M: 対称な有理数行列

    Returns:
        tuple: (P, d)
    """
    M = matrix(M)
    if not is_symmetric(M):
        raise NonSymmetricError("対称行列ではありません")
    n = len(M)
    A = [list(row) for row in M]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(k, j):
        A[k], A[j] = A[j], A[k]
        for row in A:
            row[k], row[j] = row[j], row[k]
        for row in P:
            row[k], row[j] = row[j], row[k]

    for k in range(n):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
                if j is None:
                    continue
                for c in range(n):
                    A[k][c] += A[j][c]
                for r in range(n):
                    A[r][k] += A[r][j]
                for r in range(n):
                    P[r][k] += P[r][j]
        pivot = A[k][k]
        for i in range(k + 1, n):
            if A[i][k] == 0:
                continue
            f = A[i][k] / pivot
            for c in range(n):
                A[i][c] -= f * A[k][c]
            for r in range(n):
                A[r][i] -= f * A[r][k]
            for r in range(n):
                P[r][i] -= f * P[r][k]
    return matrix(P), tuple(A[k][k] for k in range(n))


def symmetric_signature(M):
    """
    対称行列の慣性指数

    Returns:
        tuple: (負の個数, 正の個数, ゼロの個数)
    """
    _, d = congruence_diagonalize(M)
    n_neg = sum(1 for x in d if x < 0)
    n_pos = sum(1 for x in d if x > 0)
    return (n_neg, n_pos, len(d) - n_neg - n_pos)


def cayley_orthogonal(A):
    """
    ケーリー変換 Q = (I - A)(I + A)^(-1)

    歪対称な有理数行列に対し I + A は常に正則で、QᵀQ = I が厳密に成り立つ。
    """
    A = matrix(A)
    if not is_skew(A):
        raise NonSymmetricError("歪対称行列ではありません")
    n = len(A)
    eye = identity(n)
    return mat_mul(mat_sub(eye, A), matrix_inverse(mat_add(eye, A)))


# ---------------------------------------------------------------------------
# 多項式（座標 u_1..u_s, t_1..t_s, v_1..v_s 上の QQ 係数多項式）
# ---------------------------------------------------------------------------

def coordinate_names(s):
    return tuple(
        [f"u{i}" for i in range(1, s + 1)]
        + [f"t{i}" for i in range(1, s + 1)]
        + [f"v{i}" for i in range(1, s + 1)]
    )


@lru_cache(maxsize=None)
def coordinate_ring(s):
    """3s 個の座標を生成元とする多項式環（s ごとにキャッシュ）"""
    poly_ring, *_ = ring(",".join(coordinate_names(s)), QQ)
    return poly_ring


def generator_index(poly_ring, var):
    """生成元（名前・インデックス・元）からインデックスを返す。環に無ければ None"""
    if isinstance(var, int):
        return var if 0 <= var < poly_ring.ngens else None
    names = [str(sym) for sym in poly_ring.symbols]
    if isinstance(var, str):
        return names.index(var) if var in names else None
    if var in poly_ring.gens:
        return poly_ring.gens.index(var)
    return None


def poly_partial(p, var):
    """
    厳密な形式偏微分

    Args:
        p: 多項式環の元
        var: 変数（名前・インデックス・生成元）。環に無い変数なら結果は 0

    Returns:
        多項式環の元
    """
    index = generator_index(p.ring, var)
    if index is None:
        return p.ring.zero
    return p.diff(p.ring.gens[index])


def poly_eval(p, values):
    """多項式を有理点で厳密に評価する"""
    if len(values) != p.ring.ngens:
        raise DimensionError(f"評価点の次元が合いません: {len(values)} != {p.ring.ngens}")
    total = Fraction(0)
    for monom, coeff in p.items():
        term = as_fraction(coeff)
        for x, e in zip(values, monom):
            if e:
                term *= x ** e
        total += term
    return total


def poly_from_terms(poly_ring, terms):
    """{指数タプル: 係数} から多項式を作る（係数 0 は捨てる）"""
    return poly_ring.from_dict({m: to_qq(c) for m, c in terms.items() if c})


def univariate_poly(poly_ring, var_index, coefficients):
    """{次数: 係数} で与えた1変数多項式を var_index 番目の変数の多項式として埋め込む"""
    terms = {}
    for degree, c in coefficients.items():
        monom = [0] * poly_ring.ngens
        monom[var_index] = degree
        terms[tuple(monom)] = as_fraction(c)
    return poly_from_terms(poly_ring, terms)


def poly_constant(p):
    """定数多項式の値（定数でなければ None）"""
    if not p:
        return Fraction(0)
    if not p.is_ground:
        return None
    return as_fraction(p.get(p.ring.zero_monom, QQ.zero))


# ---------------------------------------------------------------------------
# シード固定サンプラー
# ---------------------------------------------------------------------------

class SeededSampler:
    """
    シードと上界から決まる有理数サンプル列

    同じ (seed, bound) からは常に同じ列が得られる。分子・分母は bound で抑える。
    """

    def __init__(self, seed=1, bound=10):
        if bound < 1:
            raise ValueError("bound は正の整数でなければなりません")
        self.seed = int(seed)
        self.bound = int(bound)
        self._rng = random.Random(self.seed)

    def fork(self, label):
        """ラベルから決定的に導いた独立な部分列"""
        digest = hashlib.sha256(f"{self.seed}:{label}".encode("utf-8")).digest()
        return SeededSampler(int.from_bytes(digest[:8], "big"), self.bound)

    def integer(self, low, high):
        return self._rng.randint(low, high)

    def rational(self):
        return Fraction(self._rng.randint(-self.bound, self.bound), self._rng.randint(1, self.bound))

    def nonzero_rational(self):
        while True:
            x = self.rational()
            if x:
                return x

    def small_rational(self):
        """摂動用の小さな有理数（絶対値 1/bound 以下）"""
        return Fraction(self._rng.randint(-1, 1), self.bound * self._rng.randint(1, self.bound))

    def vector(self, n):
        return tuple(self.rational() for _ in range(n))

    def matrix(self, rows, cols=None):
        cols = rows if cols is None else cols
        return tuple(tuple(self.rational() for _ in range(cols)) for _ in range(rows))

    def skew(self, n):
        A = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                x = self.rational()
                A[i][j] = x
                A[j][i] = -x
        return matrix(A)

    def sign_flips(self, n):
        return diagonal([self._rng.choice((-1, 1)) for _ in range(n)])

    def orthogonal(self, n):
        """ケーリー変換と符号反転の合成で O(n) の両成分から有理直交行列を引く"""
        return mat_mul(cayley_orthogonal(self.skew(n)), self.sign_flips(n))

    def choice(self, seq):
        return self._rng.choice(list(seq))

    def subset(self, population, k):
        return sorted(self._rng.sample(list(population), k))
