#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
多様体族 (M_F, g_F) の閉じた式

座標は (u_1..u_s, t_1..t_s, v_1..v_s)、F(u) = f_1(u_1) + ... + f_s(u_s)。
計量の非ゼロ成分は g(∂u_i,∂u_i) = -2F - 2u·t, g(∂u_i,∂v_i) = 1, g(∂t_i,∂t_i) = -1。

閉じた式（点での値と多項式場の両方）と、汎用エンジンで計算した場を提供する。
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from src.core.errors import CurvHomoError, DimensionError
from src.core.exact_algebra import (
    as_fraction,
    coordinate_ring,
    format_rational,
    matrix,
    univariate_poly,
)
from src.core.tensor_core import (
    LinearMap,
    Tensor,
    contract,
    expand_z2_orbit,
)
from src.geometry.geometry_engine import (
    ChristoffelField,
    MetricField,
    TensorField,
    christoffel_field,
    nabla_k,
)
from src.geometry.model_space import t_index, u_index, v_index

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# 1 変数多項式（{次数: 係数}）
# ---------------------------------------------------------------------------

def derive(coefficients, order=1):
    result = dict(coefficients)
    for _ in range(order):
        result = {n - 1: n * c for n, c in result.items() if n > 0 and c}
    return result


def evaluate_univariate(coefficients, x):
    return sum((c * x ** n for n, c in coefficients.items()), Fraction(0))


@dataclass(frozen=True)
class FamilySpec:
    """
    s と f_1..f_s（各 f_i は u_i の 1 変数多項式）

    coefficients[i] は ((次数, 係数), ...) の昇順タプル。
    """

    s: int
    coefficients: tuple

    def __post_init__(self):
        if self.s < 2:
            raise DimensionError(f"s は 2 以上でなければなりません: {self.s}")
        if len(self.coefficients) != self.s:
            raise DimensionError(f"f_i は {self.s} 個必要です（{len(self.coefficients)} 個）")

    @classmethod
    def from_polys(cls, s, polys):
        """
        Args:
            polys: 各 f_i の {次数: 係数} の列
        """
        normalized = tuple(
            tuple(sorted((int(n), as_fraction(c)) for n, c in p.items() if c)) for p in polys
        )
        return cls(s, normalized)

    @classmethod
    def uniform(cls, s, poly):
        """全ての i で同じ f を使う"""
        return cls.from_polys(s, [poly] * s)

    def f(self, i):
        return dict(self.coefficients[i])

    def F(self, u):
        return sum((evaluate_univariate(self.f(i), x) for i, x in enumerate(u)), Fraction(0))

    def F_d(self, i, u, order):
        """F_{/i...i}（order 階）"""
        return evaluate_univariate(derive(self.f(i), order), u[i])

    @property
    def dim(self):
        return 3 * self.s


@dataclass(frozen=True)
class PointCoords:
    """点 (u, t, v)"""

    u: tuple
    t: tuple
    v: tuple

    def __post_init__(self):
        if not len(self.u) == len(self.t) == len(self.v):
            raise DimensionError("u, t, v の長さが揃っていません")
        object.__setattr__(self, "u", tuple(as_fraction(x) for x in self.u))
        object.__setattr__(self, "t", tuple(as_fraction(x) for x in self.t))
        object.__setattr__(self, "v", tuple(as_fraction(x) for x in self.v))

    @classmethod
    def zero(cls, s):
        return cls((0,) * s, (0,) * s, (0,) * s)

    @classmethod
    def random(cls, s, sampler):
        return cls(sampler.vector(s), sampler.vector(s), sampler.vector(s))

    @property
    def s(self):
        return len(self.u)

    @property
    def values(self):
        """座標環の生成元の順の値"""
        return self.u + self.t + self.v

    @property
    def u_norm2(self):
        return sum((x * x for x in self.u), Fraction(0))

    @property
    def u_dot_t(self):
        return sum((a * b for a, b in zip(self.u, self.t)), Fraction(0))

    def __str__(self):
        parts = []
        for name in ("u", "t", "v"):
            parts.append(f"{name}:(" + ",".join(format_rational(x) for x in getattr(self, name)) + ")")
        return " ".join(parts)


def _check_point(spec, P):
    if P.s != spec.s:
        raise DimensionError(f"点の次元 s={P.s} が族の s={spec.s} と合いません")


def _merge(entries, orbit):
    for key, value in orbit.items():
        if key in entries and entries[key] != value:
            raise CurvHomoError(f"閉じた式の成分 {key} が二重に定義されています")
        entries[key] = value


# ---------------------------------------------------------------------------
# 点での閉じた式
# ---------------------------------------------------------------------------

def g_uu(spec, P):
    """g(∂u_i,∂u_i) = -2F(u) - 2u·t（i によらない）"""
    return -2 * spec.F(P.u) - 2 * P.u_dot_t


def metric_at(spec, P):
    _check_point(spec, P)
    s = spec.s
    n = 3 * s
    h = g_uu(spec, P)
    g = [[Fraction(0)] * n for _ in range(n)]
    for i in range(s):
        g[u_index(s, i)][u_index(s, i)] = h
        g[u_index(s, i)][v_index(s, i)] = Fraction(1)
        g[v_index(s, i)][u_index(s, i)] = Fraction(1)
        g[t_index(s, i)][t_index(s, i)] = Fraction(-1)
    return matrix(g)


def metric_inverse_at(spec, P):
    """g^{u_i v_i} = 1, g^{v_i v_i} = -g(∂u_i,∂u_i), g^{t_i t_i} = -1"""
    _check_point(spec, P)
    s = spec.s
    n = 3 * s
    h = g_uu(spec, P)
    inv = [[Fraction(0)] * n for _ in range(n)]
    for i in range(s):
        inv[u_index(s, i)][v_index(s, i)] = Fraction(1)
        inv[v_index(s, i)][u_index(s, i)] = Fraction(1)
        inv[v_index(s, i)][v_index(s, i)] = -h
        inv[t_index(s, i)][t_index(s, i)] = Fraction(-1)
    return matrix(inv)


class ClosedForms:
    """
    Γ, R, ∇R の閉じた式（点での値）

    検算のテストでは一部のメソッドを差し替えて誤りを仕込む。
    """

    def christoffel_at(self, spec, P):
        """
        {(k, i, j): Γ^k_{ij}}

        Γ^{t_a}_{u_b u_b} = -u_a
        Γ^{v_a}_{u_a u_a} = -F_{/a} - t_a,  Γ^{v_a}_{u_b u_b} = F_{/a} + t_a (b≠a)
        Γ^{v_a}_{u_a u_b} = -F_{/b} - t_b (b≠a),  Γ^{v_a}_{u_a t_b} = -u_b
        """
        _check_point(spec, P)
        s = spec.s
        U, T, V = (lambda i: u_index(s, i)), (lambda i: t_index(s, i)), (lambda i: v_index(s, i))
        F1 = [spec.F_d(i, P.u, 1) for i in range(s)]
        entries = {}

        def put(k, i, j, value):
            if value:
                entries[k, i, j] = value
                entries[k, j, i] = value

        for a in range(s):
            for b in range(s):
                put(T(a), U(b), U(b), -P.u[a])
                put(V(a), U(a), T(b), -P.u[b])
                if a == b:
                    put(V(a), U(a), U(a), -F1[a] - P.t[a])
                else:
                    put(V(a), U(b), U(b), F1[a] + P.t[a])
                    put(V(a), U(a), U(b), -F1[b] - P.t[b])
        return entries

    def curvature_at(self, spec, P):
        """
        R(∂u_i,∂u_j,∂u_j,∂u_i) = F_{/ii} + F_{/jj} + |u|²,  R(∂u_i,∂u_j,∂u_j,∂t_i) = 1 (i≠j)
        """
        _check_point(spec, P)
        s = spec.s
        F2 = [spec.F_d(i, P.u, 2) for i in range(s)]
        entries = {}
        for i in range(s):
            for j in range(s):
                if i == j:
                    continue
                ui, uj = u_index(s, i), u_index(s, j)
                value = F2[i] + F2[j] + P.u_norm2
                if value:
                    _merge(entries, expand_z2_orbit((ui, uj, uj, ui), value))
                _merge(entries, expand_z2_orbit((ui, uj, uj, t_index(s, i)), 1))
        return Tensor(3 * s, 4, entries)

    def nabla_curvature_at(self, spec, P, cross_terms=True):
        """
        ∇R(∂u_i,∂u_j,∂u_j,∂u_i;∂u_i) = F_{/iii} + 4u_i (i≠j)

        cross_terms=True のときは i, j, k が相異なる場合の
        ∇R(∂u_i,∂u_j,∂u_j,∂u_i;∂u_k) = 2u_k,  ∇R(∂u_i,∂u_j,∂u_j,∂u_k;∂u_i) = u_k も含める（s >= 3）。
        """
        _check_point(spec, P)
        s = spec.s
        F3 = [spec.F_d(i, P.u, 3) for i in range(s)]
        entries = {}
        for i in range(s):
            for j in range(s):
                if i == j:
                    continue
                ui, uj = u_index(s, i), u_index(s, j)
                value = F3[i] + 4 * P.u[i]
                if value:
                    _merge(entries, expand_z2_orbit((ui, uj, uj, ui, ui), value))
                if not cross_terms:
                    continue
                for k in range(s):
                    if k in (i, j) or not P.u[k]:
                        continue
                    uk = u_index(s, k)
                    _merge(entries, expand_z2_orbit((ui, uj, uj, ui, uk), 2 * P.u[k]))
                    _merge(entries, expand_z2_orbit((ui, uj, uj, uk, ui), P.u[k]))
        return Tensor(3 * s, 5, entries)


CLOSED_FORMS = ClosedForms()


def christoffel_closed(spec, P):
    return CLOSED_FORMS.christoffel_at(spec, P)


def curvature_closed(spec, P):
    return CLOSED_FORMS.curvature_at(spec, P)


def nabla_curvature_closed(spec, P, cross_terms=True):
    return CLOSED_FORMS.nabla_curvature_at(spec, P, cross_terms=cross_terms)


def ricci_closed(spec, P):
    """Ric_{bc} = Σ g^{aw} R_{abcw}"""
    return contract(curvature_closed(spec, P), metric_inverse_at(spec, P), (0, 3))


def alpha(spec, P):
    """α_F = Σ_i (F_{/iii}(u_i) + 4u_i)²"""
    _check_point(spec, P)
    return sum(((spec.F_d(i, P.u, 3) + 4 * P.u[i]) ** 2 for i in range(spec.s)), Fraction(0))


def u_slot_square_sum(T, s):
    """全ての添字が u ブロックにある成分の二乗和"""
    return sum((value * value for index, value in T.items() if all(i < s for i in index)), Fraction(0))


def alpha_via_slots_expected(spec, P):
    """
    ¼Σ(∇R の u 成分)² の厳密値 (s-1)(α + 4(s-2)|u|²)

    s = 2 または u = 0 のときだけ (s-1)α に一致する。
    """
    return (spec.s - 1) * (alpha(spec, P) + 4 * (spec.s - 2) * P.u_norm2)


# ---------------------------------------------------------------------------
# 正規化基底
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizationData:
    """
    ε_i, ϱ_i と Ψ（モデルのフレーム座標 → 座標フレーム）
    """

    eps: tuple
    rho: tuple
    psi: LinearMap

    def frame(self):
        """U_1..U_s, T_1..T_s, V_1..V_s を座標フレームで表したベクトル"""
        return self.psi.columns()


def normalized_basis_at(spec, P):
    """
    ε_i = -½F_{/ii} - ¼|u|²,  ϱ_i = ½(ε_i² - g(∂u_i,∂u_i))
    U_i = ∂u_i + ε_i∂t_i + ϱ_i∂v_i,  T_i = ∂t_i + ε_i∂v_i,  V_i = ∂v_i
    """
    _check_point(spec, P)
    s = spec.s
    n = 3 * s
    h = g_uu(spec, P)
    eps = tuple(-Fraction(1, 2) * spec.F_d(i, P.u, 2) - Fraction(1, 4) * P.u_norm2 for i in range(s))
    rho = tuple(Fraction(1, 2) * (e * e - h) for e in eps)

    def unit(k):
        return [Fraction(int(j == k)) for j in range(n)]

    columns = []
    for i in range(s):
        col = unit(u_index(s, i))
        col[t_index(s, i)] = eps[i]
        col[v_index(s, i)] = rho[i]
        columns.append(col)
    for i in range(s):
        col = unit(t_index(s, i))
        col[v_index(s, i)] = eps[i]
        columns.append(col)
    for i in range(s):
        columns.append(unit(v_index(s, i)))
    return NormalizationData(eps, rho, LinearMap.from_columns(columns))


# ---------------------------------------------------------------------------
# 多項式場とエンジン
# ---------------------------------------------------------------------------

def _ring_parts(spec):
    poly_ring = coordinate_ring(spec.s)
    s = spec.s
    gens = poly_ring.gens
    u = gens[:s]
    t = gens[s:2 * s]
    F = poly_ring.zero
    for i in range(s):
        F += univariate_poly(poly_ring, u_index(s, i), spec.f(i))
    return poly_ring, u, t, F


def metric_field(spec):
    """g_F を多項式の計量場として（行列式 1）"""
    poly_ring, u, t, F = _ring_parts(spec)
    s = spec.s
    n = 3 * s
    h = -2 * F - 2 * sum((a * b for a, b in zip(u, t)), poly_ring.zero)
    g = [[poly_ring.zero] * n for _ in range(n)]
    for i in range(s):
        g[u_index(s, i)][u_index(s, i)] = h
        g[u_index(s, i)][v_index(s, i)] = poly_ring.one
        g[v_index(s, i)][u_index(s, i)] = poly_ring.one
        g[t_index(s, i)][t_index(s, i)] = -poly_ring.one
    return MetricField(poly_ring, g)


@lru_cache(maxsize=32)
def engine_fields(spec, k=1):
    """
    エンジンで計算した (計量場, Γ, [R, ∇R, ..., ∇^k R])（spec, k ごとにキャッシュ）
    """
    logger.debug(f"🔍 エンジンで曲率場を計算します: s={spec.s}, k={k}")
    metric = metric_field(spec)
    gamma = christoffel_field(metric)
    return metric, gamma, tuple(nabla_k(metric, k, gamma))


def closed_form_fields(spec, cross_terms=True):
    """
    閉じた式を多項式場として返す

    Returns:
        tuple: (ChristoffelField, R の TensorField, ∇R の TensorField)
    """
    poly_ring, u, t, F = _ring_parts(spec)
    s = spec.s
    n = 3 * s
    U, T, V = (lambda i: u_index(s, i)), (lambda i: t_index(s, i)), (lambda i: v_index(s, i))
    F1 = [univariate_poly(poly_ring, U(i), derive(spec.f(i), 1)) for i in range(s)]
    F2 = [univariate_poly(poly_ring, U(i), derive(spec.f(i), 2)) for i in range(s)]
    F3 = [univariate_poly(poly_ring, U(i), derive(spec.f(i), 3)) for i in range(s)]
    u_norm2 = sum((x * x for x in u), poly_ring.zero)

    gamma = {}

    def put(k, i, j, value):
        if value:
            gamma[k, i, j] = value
            gamma[k, j, i] = value

    for a in range(s):
        for b in range(s):
            put(T(a), U(b), U(b), -u[a])
            put(V(a), U(a), T(b), -u[b])
            if a == b:
                put(V(a), U(a), U(a), -F1[a] - t[a])
            else:
                put(V(a), U(b), U(b), F1[a] + t[a])
                put(V(a), U(a), U(b), -F1[b] - t[b])

    def orbit(entries, index, value):
        if not value:
            return
        head, tail = index[:4], index[4:]
        for key, sign in expand_z2_orbit(head, 1).items():
            entries[key + tail] = value if sign > 0 else -value

    R = {}
    nabla = {}
    for i in range(s):
        for j in range(s):
            if i == j:
                continue
            orbit(R, (U(i), U(j), U(j), U(i)), F2[i] + F2[j] + u_norm2)
            orbit(R, (U(i), U(j), U(j), T(i)), poly_ring.one)
            orbit(nabla, (U(i), U(j), U(j), U(i), U(i)), F3[i] + 4 * u[i])
            if cross_terms:
                for k in range(s):
                    if k not in (i, j):
                        orbit(nabla, (U(i), U(j), U(j), U(i), U(k)), 2 * u[k])
                        orbit(nabla, (U(i), U(j), U(j), U(k), U(i)), u[k])
    return ChristoffelField(n, gamma), TensorField(n, 4, R), TensorField(n, 5, nabla)


# ---------------------------------------------------------------------------
# 族の生成
# ---------------------------------------------------------------------------

def random_family(s, sampler, degree=5):
    """次数 degree 以下の係数をシード固定で引いた族"""
    polys = []
    for _ in range(s):
        polys.append({n: sampler.rational() for n in range(degree + 1)})
    return FamilySpec.from_polys(s, polys)


def symmetric_candidates(s):
    """
    ∇R ≡ 0 の候補 f_i = -u_i³/6 と f_i = -u_i⁴/6

    Returns:
        dict: {"cubic": FamilySpec, "quartic": FamilySpec}
    """
    return {
        "cubic": FamilySpec.uniform(s, {3: Fraction(-1, 6)}),
        "quartic": FamilySpec.uniform(s, {4: Fraction(-1, 6)}),
    }


def cubic_family(s):
    """f_i = u_i³"""
    return FamilySpec.uniform(s, {3: 1})


def alpha_k(spec, P, k, kmax=None):
    """
    α^k = 2^(-k-1) Σ（∇^k R の全 u 成分）²（∇^k R はエンジンで計算）
    """
    if k < 1 or (kmax is not None and k > kmax):
        raise CurvHomoError(f"k は 1 以上 {kmax} 以下でなければなりません: {k}")
    _check_point(spec, P)
    _, _, tower = engine_fields(spec, k)
    field = tower[k]
    return u_slot_square_sum(field.evaluate(P.values), spec.s) / 2 ** (k + 1)
