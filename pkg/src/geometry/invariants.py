#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
部分空間 A_V, A_{T,V} と商空間 B_{U,T}, B_T, B_U 上の誘導構造、
および局所等質性を妨げる不変量 α
"""

import logging
from dataclasses import dataclass
from fractions import Fraction

from src.core.errors import CurvHomoError, DegenerateMetricError, DimensionError, NotNormalizedError
from src.core.exact_algebra import (
    determinant,
    gram_matrix,
    identity,
    linear_combination,
    mat_mul,
    mat_vec,
    matrix_inverse,
    matrix_rank,
    nullspace,
    rref,
    transpose,
    vec_add,
)
from src.core.tensor_core import LinearMap, pullback
from src.geometry.family_mf import alpha, alpha_k, engine_fields, normalized_basis_at, u_slot_square_sum
from src.geometry.model_space import basis_vector, validate_normalized_basis

logger = logging.getLogger(__name__)

NOT_LOCALLY_HOMOGENEOUS = "NOT-LOCALLY-HOMOGENEOUS"
INCONCLUSIVE_CONSTANT = "INCONCLUSIVE-CONSTANT"


class Subspace:
    """全列階数の基底で与える部分空間"""

    def __init__(self, ambient_dim, basis):
        basis = [tuple(Fraction(x) for x in b) for b in basis]
        if any(len(b) != ambient_dim for b in basis):
            raise DimensionError(f"基底ベクトルの次元が {ambient_dim} ではありません")
        if basis and matrix_rank(basis) != len(basis):
            raise DimensionError("部分空間の基底が一次独立ではありません")
        self.ambient_dim = ambient_dim
        self.basis = tuple(basis)

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v):
        if not self.basis:
            return not any(v)
        return matrix_rank(list(self.basis) + [tuple(v)]) == self.dim

    def same_span(self, other):
        if self.ambient_dim != other.ambient_dim or self.dim != other.dim:
            return False
        return all(self.contains(v) for v in other.basis)

    def random_element(self, sampler):
        if not self.basis:
            return tuple(Fraction(0) for _ in range(self.ambient_dim))
        return linear_combination([sampler.rational() for _ in self.basis], self.basis)

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


class QuotientSpace:
    """
    ambient / kernel を代表元の補空間で表す

    σ(v) は v = Σ a_i k_i + Σ c_j r_j と分解したときの係数 c。
    """

    def __init__(self, ambient, kernel, representatives=None):
        if representatives is None:
            representatives = _greedy_complement(ambient, kernel)
        self.ambient = ambient
        self.kernel = kernel
        self.representatives = tuple(tuple(Fraction(x) for x in r) for r in representatives)
        frame = list(kernel.basis) + list(self.representatives)
        if len(frame) != ambient.dim or (frame and matrix_rank(frame) != ambient.dim):
            raise DimensionError("代表元が核の補空間になっていません")
        self._frame = frame

    @property
    def dim(self):
        return len(self.representatives)

    def sigma(self, v):
        """代表元に関する商空間の座標"""
        rows = transpose(self._frame)
        # frame の係数を解く: Σ x_i frame_i = v
        augmented = [list(row) + [x] for row, x in zip(rows, v)]
        solution = _solve(augmented, len(self._frame))
        if solution is None:
            raise DimensionError("ベクトルが ambient に含まれていません")
        return tuple(solution[self.kernel.dim:])

    def lift(self, c):
        return linear_combination(c, self.representatives)


def _solve(augmented, n_unknowns):
    """拡大係数行列の一意解（解が無ければ None）"""
    A, pivots = rref(augmented)
    if n_unknowns in pivots:
        return None
    solution = [Fraction(0)] * n_unknowns
    for row, p in zip(A, pivots):
        solution[p] = row[n_unknowns]
    return solution


def _greedy_complement(ambient, kernel):
    chosen = list(kernel.basis)
    reps = []
    for c in ambient.basis:
        if matrix_rank(chosen + [c]) > len(chosen):
            chosen.append(c)
            reps.append(c)
    return reps


def full_space(n):
    return Subspace(n, [basis_vector(n, k) for k in range(n)])


def kernel_subspace_AV(R):
    """W -> R(·,·,·,W) の核"""
    if R.valence != 4:
        raise DimensionError(f"階数 4 のテンソルが必要です: {R.valence}")
    rows = {}
    for (x, y, z, w), value in R.items():
        rows.setdefault((x, y, z), [Fraction(0)] * R.dim)[w] = value
    return Subspace(R.dim, nullspace([rows[k] for k in sorted(rows)], n_cols=R.dim))


def orthogonal_complement(g, S):
    """{x : g(x, s) = 0 (s ∈ S)}"""
    if determinant(g) == 0:
        raise DegenerateMetricError("計量が退化しています")
    n = len(g)
    rows = [mat_vec(g, b) for b in S.basis]
    return Subspace(n, nullspace(rows, n_cols=n))


@dataclass
class InducedStructures:
    """
    A_V, A_{T,V}, 商空間と誘導構造

    g_T は基底 σ_T(T_i)、g_U は基底 σ_U(U_i)、R_UT は基底 σ(U_1..U_s, T_1..T_s) での成分。
    """

    A_V: Subspace
    A_TV: Subspace
    B_UT: QuotientSpace
    B_T: QuotientSpace
    B_U: QuotientSpace
    g_T: tuple
    g_U: tuple
    R_UT: object


def _require_normalized(ms, B):
    violations = validate_normalized_basis(ms, B)
    if violations:
        raise NotNormalizedError(f"正規化基底ではありません: {violations[0]}")


def induced_structures(ms, B):
    """
    正規化基底 B に対する誘導構造
    """
    _require_normalized(ms, B)
    s = ms.s
    n = ms.dim
    A_V = kernel_subspace_AV(ms.R)
    A_TV = orthogonal_complement(ms.g, A_V)
    ambient = full_space(n)
    B_UT = QuotientSpace(ambient, A_V, [B.u(i) for i in range(s)] + [B.t(i) for i in range(s)])
    B_T = QuotientSpace(A_TV, A_V, [B.t(i) for i in range(s)])
    B_U = QuotientSpace(ambient, A_TV, [B.u(i) for i in range(s)])
    g_T = gram_matrix(ms.g, [B.t(i) for i in range(s)])
    R_UT = pullback(ms.R, LinearMap.from_columns([B.u(i) for i in range(s)] + [B.t(i) for i in range(s)]))
    return InducedStructures(A_V, A_TV, B_UT, B_T, B_U, g_T, identity(s), R_UT)


def reference_quotient_U(ms):
    """基底によらない参照用の B_U = R^{3s}/A_{T,V}"""
    A_V = kernel_subspace_AV(ms.R)
    A_TV = orthogonal_complement(ms.g, A_V)
    return QuotientSpace(full_space(ms.dim), A_TV)


def g_U_in_reference(ms, B, reference=None):
    """
    g_{U,B} を参照フレームで表した行列

    P の行を σ_U(U_i) の参照座標とすると P G Pᵀ = I なので G = (PᵀP)⁻¹。
    """
    reference = reference or reference_quotient_U(ms)
    P = [reference.sigma(B.u(i)) for i in range(ms.s)]
    return matrix_inverse(mat_mul(transpose(P), P))


def representative_problems(ms, B, sampler, trials=5):
    """
    代表元を核の元でずらしても誘導構造が変わらないかを調べる

    Returns:
        list: 問題の説明（空なら全て代表元によらない）
    """
    base = induced_structures(ms, B)
    reference = reference_quotient_U(ms)
    g_U_ref = g_U_in_reference(ms, B, reference)
    s = ms.s
    problems = []
    for trial in range(trials):
        us = [vec_add(B.u(i), base.A_V.random_element(sampler)) for i in range(s)]
        ts = [vec_add(B.t(i), base.A_V.random_element(sampler)) for i in range(s)]
        if gram_matrix(ms.g, ts) != base.g_T:
            problems.append(f"trial {trial}: g_T depends on representatives")
        if pullback(ms.R, LinearMap.from_columns(us + ts)) != base.R_UT:
            problems.append(f"trial {trial}: R_UT depends on representatives")
        shifted_u = [vec_add(B.u(i), base.A_TV.random_element(sampler)) for i in range(s)]
        P = [reference.sigma(u) for u in shifted_u]
        if matrix_inverse(mat_mul(transpose(P), P)) != g_U_ref:
            problems.append(f"trial {trial}: g_U depends on representatives")
    return problems


def alpha_via_quotient(spec, P):
    """
    ∇R を Ψ で正規化フレームに移し、U 成分の二乗和の ¼
    """
    _, _, tower = engine_fields(spec, 1)
    pulled = pullback(tower[1].evaluate(P.values), normalized_basis_at(spec, P).psi)
    return u_slot_square_sum(pulled, spec.s) / 4


@dataclass(frozen=True)
class HomogeneityVerdict:
    verdict: str
    values: tuple
    witness: tuple = None

    def __str__(self):
        if self.witness is None:
            return f"{self.verdict} alpha={self.values[0][1]}"
        P, Q, a, b = self.witness
        return f"{self.verdict} alpha({P})={a} alpha({Q})={b}"


def homogeneity_obstruction(spec, points):
    """
    α が点によって異なれば局所等質でない（一定でも等質とは言えない）
    """
    if len(set(points)) < 2:
        raise CurvHomoError("異なる点が 2 つ以上必要です")
    values = tuple((P, alpha(spec, P)) for P in points)
    first_point, first_value = values[0]
    for P, value in values[1:]:
        if value != first_value:
            return HomogeneityVerdict(NOT_LOCALLY_HOMOGENEOUS, values, (first_point, P, first_value, value))
    return HomogeneityVerdict(INCONCLUSIVE_CONSTANT, values)


@dataclass(frozen=True)
class AlphaRow:
    point: object
    alpha: Fraction
    alpha_quotient: Fraction
    alpha_k: tuple


def alpha_profile(spec, points, kmax=1):
    """各点での α, ¼‖∇R_U‖², α^1..α^kmax"""
    rows = []
    for P in points:
        rows.append(
            AlphaRow(
                P,
                alpha(spec, P),
                alpha_via_quotient(spec, P),
                tuple(alpha_k(spec, P, k, kmax) for k in range(1, kmax + 1)),
            )
        )
    return rows
