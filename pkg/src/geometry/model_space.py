#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
モデル空間 V_3s = (R^{3s}, g_3s, R_3s) と正規化基底

基底の並びは U_1..U_s, T_1..T_s, V_1..V_s（添字は 0 始まりで u_index / t_index / v_index）。
"""

import logging
from fractions import Fraction

from src.core.errors import DimensionError, NotOrthogonalError, SamplerExhaustedError
from src.core.exact_algebra import (
    is_orthogonal,
    linear_combination,
    matrix,
    matrix_rank,
    symmetric_signature,
    vec_add,
    vec_scale,
)
from src.core.tensor_core import LinearMap, Tensor, check_first_bianchi, check_pair_symmetries, expand_z2_orbit, pullback

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def u_index(s, i):
    return i


def t_index(s, i):
    return s + i


def v_index(s, i):
    return 2 * s + i


def slot_label(s, index):
    """添字を `U_1` / `T_2` / `V_1` の形に"""
    block, i = divmod(index, s)
    return f"{'UTV'[block]}_{i + 1}"


def basis_vector(n, k):
    return tuple(Fraction(int(j == k)) for j in range(n))


class ModelSpace:
    """
    V_3s の計量とテンソル

    Attributes:
        s: ブロック数 (s >= 2)
        dim: 3s
        g: 計量の成分行列
        R: 曲率テンソル（階数 4）
    """

    def __init__(self, s, g, R):
        self.s = s
        self.dim = 3 * s
        self.g = g
        self.R = R

    @property
    def metric_tensor(self):
        return Tensor.from_matrix(self.g)

    def standard_basis(self):
        return ModelBasis(self.s, [basis_vector(self.dim, k) for k in range(self.dim)])

    def z_plus(self, i):
        """Z_i^+ = U_i + ½V_i"""
        return self.standard_basis().z_plus(i)

    def z_minus(self, i):
        """Z_i^- = U_i - ½V_i"""
        return self.standard_basis().z_minus(i)

    def __repr__(self):
        return f"ModelSpace(s={self.s})"


def build_model(s):
    """
    s に対するモデル空間を構成する

    g の非ゼロ成分は g(U_i,V_i)=1 と g(T_i,T_i)=-1、
    R の非ゼロ成分は R(U_i,U_j,U_j,T_i)=1 (i≠j) の対称性軌道のみ。

    Args:
        s: ブロック数

    Returns:
        ModelSpace
    """
    if s < 2:
        raise DimensionError(f"s は 2 以上でなければなりません: {s}")
    n = 3 * s
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(s):
        g[u_index(s, i)][v_index(s, i)] = Fraction(1)
        g[v_index(s, i)][u_index(s, i)] = Fraction(1)
        g[t_index(s, i)][t_index(s, i)] = Fraction(-1)
    entries = {}
    for i in range(s):
        for j in range(s):
            if i != j:
                entries.update(
                    expand_z2_orbit((u_index(s, i), u_index(s, j), u_index(s, j), t_index(s, i)), 1)
                )
    ms = ModelSpace(s, matrix(g), Tensor(n, 4, entries))
    logger.debug(f"✅ モデル空間を構成しました: s={s}, R の非ゼロ成分 {ms.R.nonzero_count()} 個")
    return ms


def model_integrity(ms):
    """
    モデルの自己検査（対称性・ビアンキ恒等式・符号数）

    Returns:
        list: 問題の説明（空なら正常）
    """
    problems = []
    sym = check_pair_symmetries(ms.R)
    if sym:
        problems.append(f"pair symmetry violated at {sym[0]}")
    bianchi = check_first_bianchi(ms.R)
    if bianchi:
        problems.append(f"first Bianchi violated at {bianchi[0]}")
    signature = symmetric_signature(ms.g)
    if signature != (2 * ms.s, ms.s, 0):
        problems.append(f"signature {signature} != {(2 * ms.s, ms.s, 0)}")
    return problems


class ModelBasis:
    """
    順序付き基底 (U_1..U_s, T_1..T_s, V_1..V_s)、各ベクトルは標準座標で与える
    """

    def __init__(self, s, vectors):
        vectors = [tuple(Fraction(x) for x in v) for v in vectors]
        n = 3 * s
        if len(vectors) != n or any(len(v) != n for v in vectors):
            raise DimensionError(f"基底には長さ {n} のベクトルが {n} 本必要です")
        if matrix_rank(vectors) != n:
            raise DimensionError("基底のベクトルが一次独立ではありません")
        self.s = s
        self.vectors = tuple(vectors)

    @property
    def dim(self):
        return 3 * self.s

    def u(self, i):
        return self.vectors[u_index(self.s, i)]

    def t(self, i):
        return self.vectors[t_index(self.s, i)]

    def v(self, i):
        return self.vectors[v_index(self.s, i)]

    def z_plus(self, i):
        return vec_add(self.u(i), vec_scale(self.v(i), HALF))

    def z_minus(self, i):
        return vec_add(self.u(i), vec_scale(self.v(i), -HALF))

    def as_linear_map(self):
        """B 座標 → 標準座標（列が基底ベクトル）"""
        return LinearMap.from_columns(self.vectors)

    def __eq__(self, other):
        return isinstance(other, ModelBasis) and self.vectors == other.vectors

    def __repr__(self):
        return f"ModelBasis(s={self.s})"


def validate_normalized_basis(ms, B):
    """
    B のフレームで g と R がモデルの値に一致するかを検査する

    要求されるゼロも含めて全成分を比較する。

    Returns:
        list: `g(U_1,V_1)=2 expected 1` 形式の違反（空なら正規化基底）
    """
    if B.s != ms.s:
        raise DimensionError(f"基底の s={B.s} とモデルの s={ms.s} が合いません")
    L = B.as_linear_map()
    violations = []
    g_B = pullback(ms.metric_tensor, L)
    for a in range(ms.dim):
        for b in range(ms.dim):
            found, expected = g_B[a, b], ms.g[a][b]
            if found != expected:
                violations.append(
                    f"g({slot_label(ms.s, a)},{slot_label(ms.s, b)})={found} expected {expected}"
                )
    R_B = pullback(ms.R, L)
    keys = sorted(set(k for k, _ in R_B.items()) | set(k for k, _ in ms.R.items()))
    for key in keys:
        found, expected = R_B[key], ms.R[key]
        if found != expected:
            labels = ",".join(slot_label(ms.s, k) for k in key)
            violations.append(f"R({labels})={found} expected {expected}")
    return violations


def os_action(xi, B):
    """
    O(s) の対角作用: U_i -> Σ_j ξ_ij U_j（T と V のブロックにも同じ行列）

    Args:
        xi: s×s の直交行列
        B: ModelBasis
    """
    xi = matrix(xi)
    if len(xi) != B.s or not is_orthogonal(xi):
        raise NotOrthogonalError(f"{B.s}×{B.s} の直交行列ではありません")
    s = B.s
    blocks = []
    for block in (B.u, B.t, B.v):
        old = [block(j) for j in range(s)]
        blocks.extend(linear_combination(xi[i], old) for i in range(s))
    return ModelBasis(s, blocks)


def shear(B, betas):
    """
    U_i -> U_i + β_i T_i + (β_i²/2) V_i,  T_i -> T_i + β_i V_i
    """
    s = B.s
    if len(betas) != s:
        raise DimensionError(f"β は {s} 個必要です")
    us, ts = [], []
    for i, beta in enumerate(betas):
        beta = Fraction(beta)
        us.append(linear_combination((1, beta, beta * beta / 2), (B.u(i), B.t(i), B.v(i))))
        ts.append(vec_add(B.t(i), vec_scale(B.v(i), beta)))
    return ModelBasis(s, us + ts + [B.v(i) for i in range(s)])


def random_normalized_basis(ms, sampler, attempts=20):
    """
    O(s) 作用・符号反転（s=2 のときはシアーも）を合成した正規化基底

    候補は毎回 validate_normalized_basis で確認する。
    """
    for attempt in range(attempts):
        B = os_action(sampler.orthogonal(ms.s), ms.standard_basis())
        if ms.s == 2:
            beta = sampler.rational()
            B = shear(B, (beta, -beta))
            B = os_action(sampler.orthogonal(ms.s), B)
        if not validate_normalized_basis(ms, B):
            return B
        logger.warning(f"⚠️ 正規化基底の候補が検査に通りませんでした（試行 {attempt + 1}）")
    raise SamplerExhaustedError(f"{attempts} 回の試行で正規化基底が得られませんでした")


def canonical_definite_subspaces(ms):
    """
    極大空間的部分空間 span{Z_i^+} と極大時間的部分空間 span{T_i, Z_i^-} の基底

    Returns:
        tuple: (空間的ベクトルのリスト, 時間的ベクトルのリスト)
    """
    B = ms.standard_basis()
    spacelike = [B.z_plus(i) for i in range(ms.s)]
    timelike = [B.t(i) for i in range(ms.s)] + [B.z_minus(i) for i in range(ms.s)]
    return spacelike, timelike
