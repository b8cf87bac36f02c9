#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
ヤコビ作用素・高次ヤコビ作用素と冪零作用素のジョルダン型

ジョルダン型は冪の階数列だけから決める（固有値計算はしない）。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isqrt

from src.core.errors import (
    DegenerateMetricError,
    DimensionError,
    NotNilpotentError,
    SamplerExhaustedError,
    UnrealizableSampleError,
)
from src.core.exact_algebra import (
    bilinear,
    congruence_diagonalize,
    gram_matrix,
    mat_mul,
    mat_scale,
    mat_vec,
    matrix_inverse,
    matrix_rank,
    symmetric_signature,
    transpose,
    vec_add,
    vec_scale,
)
from src.core.tensor_core import partial_apply
from src.geometry.model_space import canonical_definite_subspaces

logger = logging.getLogger(__name__)


class CausalType(Enum):
    SPACELIKE = "spacelike"
    TIMELIKE = "timelike"
    # sample_vector でのみ使う。causal_type は 1 本の零ベクトルを DEGENERATE_OR_MIXED とする
    NULL = "null"
    DEGENERATE_OR_MIXED = "degenerate-or-mixed"


class PlaneBasis:
    """
    一次独立な k 本のベクトルとそのグラム行列
    """

    def __init__(self, g, vectors):
        vectors = [tuple(Fraction(x) for x in v) for v in vectors]
        if not vectors:
            raise DimensionError("平面には 1 本以上のベクトルが必要です")
        if any(len(v) != len(g) for v in vectors):
            raise DimensionError("ベクトルの次元が計量と合いません")
        if matrix_rank(vectors) != len(vectors):
            raise DimensionError("平面の基底が一次独立ではありません")
        self.vectors = tuple(vectors)
        self.gram = gram_matrix(g, self.vectors)

    @property
    def k(self):
        return len(self.vectors)

    def __eq__(self, other):
        return isinstance(other, PlaneBasis) and self.vectors == other.vectors

    def __repr__(self):
        return f"PlaneBasis(k={self.k})"


@dataclass(frozen=True)
class RankProfile:
    """
    rank(N), rank(N²), ... の非ゼロ部分

    ranks が空なら零作用素。nilpotent=False は階数が非ゼロで止まったことを表す。
    """

    ranks: tuple
    dim: int
    nilpotent: bool = True

    def __str__(self):
        if not self.ranks:
            return "()"
        tail = ",0" if self.nilpotent else ",..."
        return "(" + ",".join(str(r) for r in self.ranks) + tail + ")"


@dataclass(frozen=True)
class JordanPartition:
    sizes: tuple

    def __str__(self):
        return "[" + ",".join(str(n) for n in self.sizes) + "]"


@dataclass(frozen=True)
class ScanVerdict:
    """
    走査の判定。constant なら profile、そうでなければ witnesses に (入力, RankProfile) の組
    """

    constant: bool
    samples: int
    profile: RankProfile = None
    partition: JordanPartition = None
    witnesses: tuple = field(default=())

    def __str__(self):
        if self.constant:
            return f"constant profile={self.profile} partition={self.partition} samples={self.samples}"
        (_, p1), (_, p2) = self.witnesses
        return f"not constant: witness profiles {p1} vs {p2}"


def _is_single_vector(x):
    return bool(x) and not isinstance(x[0], (tuple, list))


def causal_type(g, x):
    """
    グラム行列の慣性で分類する

    Args:
        g: 計量
        x: ベクトル、ベクトルのリスト、または PlaneBasis
    """
    if isinstance(x, PlaneBasis):
        gram = x.gram
    else:
        vectors = [x] if _is_single_vector(x) else list(x)
        gram = gram_matrix(g, vectors)
    n_neg, n_pos, _ = symmetric_signature(gram)
    k = len(gram)
    if n_pos == k:
        return CausalType.SPACELIKE
    if n_neg == k:
        return CausalType.TIMELIKE
    return CausalType.DEGENERATE_OR_MIXED


def _raise_last(g, A):
    """A[y][w] -> 行列 N[l][y] = Σ_w g^{lw} A[y][w]"""
    return mat_mul(matrix_inverse(g), transpose(A.to_matrix()))


def jacobi_operator(g, R, x):
    """J(x): y -> R(y,x)x の行列（列が像）"""
    if len(x) != len(g) or R.dim != len(g):
        raise DimensionError("ベクトル・テンソル・計量の次元が合いません")
    return _raise_last(g, partial_apply(R, {1: x, 2: x}))


def curvature_operator(g, R, x, y):
    """R(x,y): z -> R(x,y)z の行列"""
    return _raise_last(g, partial_apply(R, {0: x, 1: y}))


def jacobi_plane(g, R, plane):
    """
    J(π) = Σ_{a,b} H_ab R(·, x_a, x_b)（空間的なら H = G⁻¹、時間的なら H = (-G)⁻¹）

    正規直交基底での Σ J(e_a) と一致し、基底の取り方によらない。
    """
    if not isinstance(plane, PlaneBasis):
        plane = PlaneBasis(g, plane)
    kind = causal_type(g, plane)
    if kind is CausalType.SPACELIKE:
        H = matrix_inverse(plane.gram)
    elif kind is CausalType.TIMELIKE:
        H = matrix_inverse(mat_scale(plane.gram, -1))
    else:
        raise DegenerateMetricError("平面が定符号ではありません（退化または符号混合）")
    total = None
    for a, x_a in enumerate(plane.vectors):
        y_a = None
        for b, x_b in enumerate(plane.vectors):
            if H[a][b]:
                term = vec_scale(x_b, H[a][b])
                y_a = term if y_a is None else vec_add(y_a, term)
        if y_a is None:
            continue
        A = partial_apply(R, {1: x_a, 2: y_a})
        total = A if total is None else total + A
    return _raise_last(g, total)


def is_self_adjoint(g, N):
    """g(Ny, z) = g(y, Nz)、すなわち Nᵀg = gN"""
    return mat_mul(transpose(N), g) == mat_mul(g, N)


def is_zero_matrix(M):
    return all(not x for row in M for x in row)


def rank_profile(N):
    """
    冪の階数列

    階数が非ゼロのまま止まれば nilpotent=False。
    """
    n = len(N)
    ranks = []
    power = N
    nilpotent = True
    for _ in range(n):
        r = matrix_rank(power)
        if r == 0:
            break
        if ranks and ranks[-1] == r:
            nilpotent = False
            break
        ranks.append(r)
        power = mat_mul(power, N)
    else:
        nilpotent = matrix_rank(power) == 0
    return RankProfile(tuple(ranks), n, nilpotent)


def jordan_partition(profile):
    """
    階数列からブロックサイズの分割を求める

    サイズ j 以上のブロック数 = rank(N^{j-1}) - rank(N^j)
    """
    if not profile.nilpotent:
        raise NotNilpotentError(f"冪零でない階数列です: {profile}")
    r = [profile.dim] + list(profile.ranks) + [0]
    at_least = [r[j - 1] - r[j] for j in range(1, len(r))]
    sizes = []
    for j in range(len(at_least), 0, -1):
        exactly = at_least[j - 1] - (at_least[j] if j < len(at_least) else 0)
        sizes.extend([j] * exactly)
    return JordanPartition(tuple(sizes))


def ell_invariant(plane, B):
    """
    ℓ(π): π の基底を B のフレームで表したときの U 成分ブロックの階数
    """
    vectors = plane.vectors if isinstance(plane, PlaneBasis) else plane
    to_frame = matrix_inverse(transpose(B.vectors))
    return matrix_rank([mat_vec(to_frame, v)[: B.s] for v in vectors])


def definite_subspaces(g):
    """
    合同対角化で得る正定値・負定値の部分空間の基底

    Returns:
        tuple: (正定値方向のリスト, 負定値方向のリスト)
    """
    P, d = congruence_diagonalize(g)
    columns = transpose(P)
    positive = [tuple(columns[i]) for i, x in enumerate(d) if x > 0]
    negative = [tuple(columns[i]) for i, x in enumerate(d) if x < 0]
    return positive, negative


def _base_for(g, kind, base):
    if base is not None:
        return base[kind]
    positive, negative = definite_subspaces(g)
    return positive if kind is CausalType.SPACELIKE else negative


def sample_plane(g, kind, k, sampler, base=None, budget=200):
    """
    指定した因果型の k 平面を引く

    標準的な定符号部分空間から k 本を選び、有理数で混ぜて小さく摂動し、慣性で選別する。
    失敗が続けば素朴な棄却サンプリングに切り替える。

    Args:
        base: {CausalType: ベクトルのリスト}（省略時は合同対角化から作る）
    """
    kind = CausalType(kind)
    n_neg, n_pos, _ = symmetric_signature(g)
    limit = {CausalType.SPACELIKE: n_pos, CausalType.TIMELIKE: n_neg}.get(kind, 0)
    if k < 1 or k > limit:
        raise UnrealizableSampleError(f"{kind.value} の {k} 平面は符号数 ({n_neg},{n_pos}) では実現できません")
    vectors_base = _base_for(g, kind, base)
    n = len(g)
    m = len(vectors_base)
    for _ in range(budget):
        chosen = sampler.subset(range(m), k)
        vectors = []
        for idx in chosen:
            x = vectors_base[idx]
            for j in range(m):
                if j != idx:
                    x = vec_add(x, vec_scale(vectors_base[j], sampler.rational()))
            x = vec_add(x, tuple(sampler.small_rational() for _ in range(n)))
            vectors.append(x)
        if matrix_rank(vectors) == k and causal_type(g, vectors) is kind:
            return PlaneBasis(g, vectors)
    logger.warning(f"⚠️ 摂動による {kind.value} 平面のサンプリングに失敗しました。棄却法に切り替えます")
    for _ in range(budget):
        vectors = [sampler.vector(n) for _ in range(k)]
        if matrix_rank(vectors) == k and causal_type(g, vectors) is kind:
            return PlaneBasis(g, vectors)
    raise SamplerExhaustedError(f"{kind.value} の {k} 平面を {2 * budget} 回の試行で得られませんでした")


def _rational_sqrt(q):
    q = Fraction(q)
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return Fraction(a, b)
    return None


def rational_null_directions(g):
    """
    合同対角化の正・負の対角 d_i, d_j で -d_j/d_i が有理数の平方になる組から零ベクトルを作る

    Returns:
        list: 見つかった零ベクトル（無ければ空）
    """
    P, d = congruence_diagonalize(g)
    columns = transpose(P)
    found = []
    for i, di in enumerate(d):
        if di <= 0:
            continue
        for j, dj in enumerate(d):
            if dj >= 0:
                continue
            r = _rational_sqrt(-dj / di)
            if r is not None:
                found.append(vec_add(vec_scale(columns[i], r), tuple(columns[j])))
    return found


def _sample_null(g, sampler, base, budget):
    seeds = base.get(CausalType.NULL) if base is not None else None
    seeds = seeds or rational_null_directions(g)
    if not seeds:
        raise UnrealizableSampleError("有理数の零ベクトルが見つかりません（base に零方向を渡してください）")
    n = len(g)
    for _ in range(budget):
        n0 = vec_scale(sampler.choice(seeds), sampler.nonzero_rational())
        w = sampler.vector(n)
        # g(n0,n0) = 0 なら g(x,x) = 0
        x = vec_add(vec_scale(n0, bilinear(g, w, w)), vec_scale(w, -2 * bilinear(g, n0, w)))
        if any(x) and bilinear(g, x, x) == 0:
            return x
    raise SamplerExhaustedError(f"零ベクトルを {budget} 回の試行で得られませんでした")


def sample_vector(g, kind, sampler, base=None, budget=200):
    """
    指定した因果型のベクトルを 1 本引く

    零ベクトルは既知の零方向 n0 と乱択した w から g(w,w)n0 - 2g(n0,w)w として作る。
    NULL のときは x != 0 かつ g(x,x) = 0 を満たす。
    """
    kind = CausalType(kind)
    if kind is CausalType.NULL:
        return _sample_null(g, sampler, base, budget)
    return sample_plane(g, kind, 1, sampler, base=base, budget=budget).vectors[0]



def model_bases(ms):
    """モデルの標準的な定符号部分空間 span{Z_i^+} / span{T_i, Z_i^-} と全零部分空間 span{U_i}"""
    spacelike, timelike = canonical_definite_subspaces(ms)
    B = ms.standard_basis()
    null = [B.u(i) for i in range(ms.s)]
    return {CausalType.SPACELIKE: spacelike, CausalType.TIMELIKE: timelike, CausalType.NULL: null}


def _operator_for(g, R, sample):
    if isinstance(sample, PlaneBasis):
        if sample.k == 1:
            return jacobi_operator(g, R, sample.vectors[0])
        return jacobi_plane(g, R, sample)
    if _is_single_vector(sample):
        return jacobi_operator(g, R, sample)
    return jacobi_plane(g, R, sample)


def osserman_scan(g, R, kind, k, n, sampler, injected=None, base=None):
    """
    n 個の k 平面（k=1 ならベクトル）でジョルダン型が一定かを調べる

    J(λx) = λ²J(x) で冪零作用素の階数列は定数倍で変わらないので、正規化はしない。

    Args:
        injected: 先頭に差し込む入力（ベクトルまたは平面）のリスト
    """
    kind = CausalType(kind)
    if n < 2:
        raise ValueError(f"サンプル数は 2 以上でなければなりません: {n}")
    samples = list(injected or [])
    first = None
    count = 0
    index = 0
    while count < n:
        if index < len(samples):
            sample = samples[index]
        else:
            if k == 1:
                sample = sample_vector(g, kind, sampler, base=base)
            else:
                sample = sample_plane(g, kind, k, sampler, base=base)
        index += 1
        count += 1
        profile = rank_profile(_operator_for(g, R, sample))
        if first is None:
            first = (sample, profile)
        elif profile != first[1]:
            logger.info(f"💡 ジョルダン型の異なる入力を見つけました: {first[1]} vs {profile}")
            return ScanVerdict(False, count, witnesses=(first, (sample, profile)))
    return ScanVerdict(True, count, profile=first[1], partition=jordan_partition(first[1]))


def canonical_timelike_witnesses(ms, k):
    """
    π₁ = span{T_1..T_k}, π₂ = span{T_1..T_{k-1}, Z_1^-}（k <= s）
    k = s+1 では π₁ = span{T_1..T_s, Z_1^-}, π₂ = span{T_1..T_{s-1}, Z_1^-, Z_2^-}
    """
    s = ms.s
    if not 2 <= k <= s + 1:
        raise DimensionError(f"k は 2 以上 {s + 1} 以下でなければなりません: {k}")
    B = ms.standard_basis()
    T = [B.t(i) for i in range(s)]
    if k <= s:
        pi1 = T[:k]
        pi2 = T[: k - 1] + [B.z_minus(0)]
    else:
        pi1 = T + [B.z_minus(0)]
        pi2 = T[: s - 1] + [B.z_minus(0), B.z_minus(1)]
    return PlaneBasis(ms.g, pi1), PlaneBasis(ms.g, pi2)


@dataclass(frozen=True)
class RankTableRow:
    ell: int
    plane: str
    computed: int
    tabulated: int
    structural: int


def rank_table_rows(ms):
    """
    ℓ = 0, 1, 2 の証人平面での rank J(π) と、表の値 (0, s-1, s)・構造から決まる値 (0, 2(s-1), 2s)
    """
    s = ms.s
    B = ms.standard_basis()
    planes = [
        (0, "span{T_1,T_2}", [B.t(0), B.t(1)]),
        (1, "span{T_1,Z_1^-}", [B.t(0), B.z_minus(0)]),
        (2, "span{Z_1^-,Z_2^-}", [B.z_minus(0), B.z_minus(1)]),
    ]
    tabulated = {0: 0, 1: s - 1, 2: s}
    structural = {0: 0, 1: 2 * (s - 1), 2: 2 * s}
    rows = []
    for ell, label, vectors in planes:
        computed = matrix_rank(jacobi_plane(ms.g, ms.R, vectors))
        rows.append(RankTableRow(ell, label, computed, tabulated[ell], structural[ell]))
    return rows
