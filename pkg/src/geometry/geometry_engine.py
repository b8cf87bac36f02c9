#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
汎用テンソル解析エンジン

多項式計量場からクリストッフェル記号・曲率・反復共変微分・リッチ曲率を
多項式の恒等式として計算する。閉じた式の検算に使う独立な経路。

規約:
- 添字は座標環の生成元の順
- R(∂_i,∂_j)∂_k = R^l_{ijk} ∂_l,  R_{ijkw} = g_{lw} R^l_{ijk}
- 共変微分の微分添字は最後: (∇T)_{i_1..i_r;j}
"""

import logging

from sympy.polys.domains import QQ

from src.core.errors import DimensionError, MetricFieldError, NonSymmetricError
from src.core.exact_algebra import as_fraction, poly_constant, poly_eval, poly_partial
from src.core.tensor_core import Tensor, check_valence

logger = logging.getLogger(__name__)


def _add_to(entries, key, value):
    if not value:
        return
    total = entries.get(key)
    total = value if total is None else total + value
    if total:
        entries[key] = total
    else:
        entries.pop(key, None)


def poly_determinant(M):
    """多項式行列の行列式（Bareiss の分数なし消去、除算は exquo で厳密）"""
    n = len(M)
    if n == 0:
        raise DimensionError("空の行列です")
    poly_ring = M[0][0].ring
    A = [list(row) for row in M]
    sign = 1
    previous = poly_ring.one
    for k in range(n - 1):
        if not A[k][k]:
            pivot = next((r for r in range(k + 1, n) if A[r][k]), None)
            if pivot is None:
                return poly_ring.zero
            A[k], A[pivot] = A[pivot], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[k][k] * A[i][j] - A[i][k] * A[k][j]).exquo(previous)
        previous = A[k][k]
    return A[n - 1][n - 1] if sign > 0 else -A[n - 1][n - 1]


def _minor(M, row, col):
    return [[x for j, x in enumerate(r) if j != col] for i, r in enumerate(M) if i != row]


def _inverse_by_ground_pivots(M):
    """
    定数の主元だけを選ぶガウス・ジョルダン法

    Returns:
        tuple: (逆行列, 行列式) / 定数主元が見つからなければ None
    """
    n = len(M)
    poly_ring = M[0][0].ring
    A = [list(row) + [poly_ring.one if i == j else poly_ring.zero for j in range(n)] for i, row in enumerate(M)]
    det = QQ.one
    for col in range(n):
        pivot = next((r for r in range(col, n) if A[r][col] and A[r][col].is_ground), None)
        if pivot is None:
            return None
        if pivot != col:
            A[col], A[pivot] = A[pivot], A[col]
            det = -det
        p = A[col][col].LC
        det *= p
        A[col] = [x.quo_ground(p) if x else x for x in A[col]]
        for r in range(n):
            if r != col and A[r][col]:
                factor = A[r][col]
                A[r] = [a - factor * b for a, b in zip(A[r], A[col])]
    return [row[n:] for row in A], det


class MetricField:
    """
    多項式係数の計量場（行列式が非ゼロ定数であることを構成時に検査）

    Attributes:
        ring: 座標多項式環
        dim: 次元（生成元の数）
        g: 成分行列（多項式）
        inverse: 逆行列（多項式）
        determinant: 行列式（有理数）
    """

    def __init__(self, poly_ring, components):
        n = poly_ring.ngens
        g = [[poly_ring(x) for x in row] for row in components]
        if len(g) != n or any(len(row) != n for row in g):
            raise DimensionError(f"計量は {n}×{n} でなければなりません")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(i + 1, n)):
            raise NonSymmetricError("計量場が対称ではありません")
        self.ring = poly_ring
        self.dim = n
        self.g = g
        result = _inverse_by_ground_pivots(g)
        if result is None:
            logger.debug("🔍 定数主元が無いため余因子行列で逆行列を求めます")
            det_poly = poly_determinant(g)
            det = poly_constant(det_poly)
            if det is None or det == 0:
                raise MetricFieldError(f"計量場の行列式が非ゼロ定数ではありません: {det_poly}")
            det_qq = QQ(det.numerator, det.denominator)
            inverse = [
                [
                    (poly_determinant(_minor(g, j, i)) if n > 1 else poly_ring.one).quo_ground(det_qq)
                    * (1 if (i + j) % 2 == 0 else -1)
                    for j in range(n)
                ]
                for i in range(n)
            ]
            self.inverse = inverse
            self.determinant = det
        else:
            inverse, det = result
            self.inverse = inverse
            self.determinant = as_fraction(det)
        # 疎な行: l -> [(w, g_lw)]
        self._rows = [[(w, p) for w, p in enumerate(row) if p] for row in g]

    def row(self, l):
        return self._rows[l]

    def at(self, values):
        """点での成分行列（Fraction）"""
        return tuple(tuple(poly_eval(p, values) for p in row) for row in self.g)

    def as_tensor_field(self):
        return TensorField(self.dim, 2, {(i, j): p for i, row in enumerate(self.g) for j, p in enumerate(row) if p})


class ChristoffelField:
    """
    Γ^k_{ij}（多項式）。ゼロでない成分を上付き添字と下付き添字の両方から引ける
    """

    def __init__(self, dim, entries):
        self.dim = dim
        self.entries = {k: p for k, p in entries.items() if p}
        self.by_lower = {}
        self.by_upper = {}
        for (k, i, j), p in sorted(self.entries.items()):
            self.by_lower.setdefault((i, j), []).append((k, p))
            self.by_upper.setdefault(k, []).append(((i, j), p))

    def __getitem__(self, index):
        return self.entries.get(tuple(index))

    def items(self):
        return sorted(self.entries.items())

    def torsion_violations(self):
        return [(k, i, j) for (k, i, j), p in self.items() if self.entries.get((k, j, i)) != p]

    def evaluate(self, values):
        """点での値 {(k, i, j): Fraction}"""
        result = {}
        for key, p in self.items():
            x = poly_eval(p, values)
            if x:
                result[key] = x
        return result


class TensorField:
    """
    多項式成分のテンソル場（ゼロでない成分のみ保持）
    """

    def __init__(self, dim, valence, entries):
        check_valence(valence)
        self.dim = dim
        self.valence = valence
        self.entries = {tuple(k): p for k, p in entries.items() if p}

    def __getitem__(self, index):
        return self.entries.get(tuple(index))

    def items(self):
        return sorted(self.entries.items())

    def nonzero_count(self):
        return len(self.entries)

    def is_zero(self):
        return not self.entries

    def evaluate(self, values):
        return Tensor(self.dim, self.valence, {k: poly_eval(p, values) for k, p in self.entries.items()})

    def differences(self, other, limit=None):
        """(添字, self の成分, other の成分) のリスト（ゼロは None）"""
        keys = sorted(set(self.entries) | set(other.entries))
        diffs = []
        for k in keys:
            if self.entries.get(k) != other.entries.get(k):
                diffs.append((k, self.entries.get(k), other.entries.get(k)))
                if limit is not None and len(diffs) >= limit:
                    break
        return diffs

    def __eq__(self, other):
        if not isinstance(other, TensorField):
            return NotImplemented
        return (self.dim, self.valence) == (other.dim, other.valence) and not self.differences(other, limit=1)

    def __repr__(self):
        return f"TensorField(dim={self.dim}, valence={self.valence}, nonzero={len(self.entries)})"


def christoffel_field(metric):
    """
    Γ^k_{ij} = ½ Σ_l g^{kl}(∂_i g_{jl} + ∂_j g_{il} - ∂_l g_{ij})
    """
    n = metric.dim
    g = metric.g
    half = QQ(1, 2)
    # dg[c][(a, b)] = ∂_c g_ab
    dg = [{} for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if g[a][b].is_ground:
                continue
            for c in range(n):
                d = poly_partial(g[a][b], c)
                if d:
                    dg[c][a, b] = d

    zero = metric.ring.zero
    first_kind = {}
    for l in range(n):
        for i in range(n):
            for j in range(i, n):
                value = dg[i].get((j, l), zero) + dg[j].get((i, l), zero) - dg[l].get((i, j), zero)
                if value:
                    first_kind[l, i, j] = value * half

    entries = {}
    for (l, i, j), value in first_kind.items():
        for k in range(n):
            c = metric.inverse[k][l]
            if c:
                _add_to(entries, (k, i, j), c * value)
                if i != j:
                    _add_to(entries, (k, j, i), c * value)
    logger.debug(f"✅ クリストッフェル記号: 非ゼロ成分 {len(entries)} 個")
    return ChristoffelField(n, entries)


def curvature_field(metric, gamma):
    """
    R_{ijkw} = g_{lw}(∂_iΓ^l_{jk} - ∂_jΓ^l_{ik} + Γ^l_{im}Γ^m_{jk} - Γ^l_{jm}Γ^m_{ik})
    """
    n = metric.dim
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(n):
                upper = {}
                for l, p in gamma.by_lower.get((j, k), []):
                    _add_to(upper, l, poly_partial(p, i))
                for l, p in gamma.by_lower.get((i, k), []):
                    _add_to(upper, l, -poly_partial(p, j))
                for m, p in gamma.by_lower.get((j, k), []):
                    for l, q in gamma.by_lower.get((i, m), []):
                        _add_to(upper, l, q * p)
                for m, p in gamma.by_lower.get((i, k), []):
                    for l, q in gamma.by_lower.get((j, m), []):
                        _add_to(upper, l, -(q * p))
                for l, value in upper.items():
                    for w, g_lw in metric.row(l):
                        term = g_lw * value
                        _add_to(entries, (i, j, k, w), term)
                        _add_to(entries, (j, i, k, w), -term)
    logger.debug(f"✅ 曲率テンソル: 非ゼロ成分 {len(entries)} 個")
    return TensorField(n, 4, entries)


def covariant_derivative_field(field, gamma):
    """
    (∇T)_{i_1..i_r;j} = ∂_j T_{i_1..i_r} - Σ_a Σ_m Γ^m_{j i_a} T_{i_1..m..i_r}
    """
    check_valence(field.valence + 1)
    n = field.dim
    entries = {}
    for index, p in field.items():
        for j in range(n):
            _add_to(entries, index + (j,), poly_partial(p, j))
        for slot, m in enumerate(index):
            for (j, i), gamma_value in gamma.by_upper.get(m, []):
                key = index[:slot] + (i,) + index[slot + 1:] + (j,)
                _add_to(entries, key, -(gamma_value * p))
    return TensorField(n, field.valence + 1, entries)


def ricci_field(curvature, metric):
    """Ric_{bc} = Σ g^{aw} R_{abcw}"""
    entries = {}
    for (a, b, c, w), p in curvature.items():
        coefficient = metric.inverse[a][w]
        if coefficient:
            _add_to(entries, (b, c), coefficient * p)
    return TensorField(curvature.dim, 2, entries)


def nabla_k(metric, k, gamma=None):
    """
    曲率とその反復共変微分 [R, ∇R, ..., ∇^k R]
    """
    if k < 0:
        raise ValueError(f"k は 0 以上でなければなりません: {k}")
    check_valence(4 + k)
    gamma = gamma or christoffel_field(metric)
    tower = [curvature_field(metric, gamma)]
    for _ in range(k):
        tower.append(covariant_derivative_field(tower[-1], gamma))
    return tower
