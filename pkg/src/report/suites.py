#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
検証スイートの実行

スイートは SUITE_IDS の順に実行する。スイート内の例外は `<suite>.error` の FAIL 行になり、
レポートは必ず最後まで作られる。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction

from src.core.errors import CurvHomoError
from src.core.exact_algebra import (
    coordinate_names,
    identity,
    linear_combination,
    mat_add,
    mat_mul,
    mat_power,
    matrix_rank,
)
from src.core.tensor_core import (
    Tensor,
    check_first_bianchi,
    check_pair_symmetries,
    pullback,
    second_bianchi_violations,
    tensor_differences,
)
from src.geometry.family_mf import (
    CLOSED_FORMS,
    PointCoords,
    alpha,
    alpha_via_slots_expected,
    closed_form_fields,
    cubic_family,
    curvature_closed,
    engine_fields,
    metric_at,
    nabla_curvature_closed,
    normalized_basis_at,
    random_family,
    ricci_closed,
    symmetric_candidates,
)
from src.geometry.geometry_engine import covariant_derivative_field, ricci_field
from src.geometry.invariants import (
    NOT_LOCALLY_HOMOGENEOUS,
    Subspace,
    alpha_profile,
    alpha_via_quotient,
    g_U_in_reference,
    homogeneity_obstruction,
    induced_structures,
    kernel_subspace_AV,
    reference_quotient_U,
    representative_problems,
)
from src.geometry.jacobi_analysis import (
    CausalType,
    PlaneBasis,
    canonical_timelike_witnesses,
    curvature_operator,
    is_self_adjoint,
    is_zero_matrix,
    jacobi_operator,
    jacobi_plane,
    jordan_partition,
    model_bases,
    osserman_scan,
    rank_profile,
    rank_table_rows,
)
from src.geometry.model_space import (
    basis_vector,
    build_model,
    model_integrity,
    os_action,
    random_normalized_basis,
    shear,
    v_index,
    validate_normalized_basis,
)
from src.report.verification import VerificationReport, format_value
from src.utils.config_utils import SUITE_IDS

logger = logging.getLogger(__name__)

HOMOGENEITY_POINTS = 25
INVARIANT_POINTS = 10
NORMALIZED_BASIS_PAIRS = 20
MODEL_ACTIONS = 50
HEXTUPLES = 50


@dataclass
class SuiteContext:
    """スイート間で共有するモデル・族・点"""

    cfg: object
    model: object
    family: object
    points: list = field(default_factory=list)

    @classmethod
    def from_config(cls, cfg):
        ctx = cls(cfg, build_model(cfg.s), cfg.family())
        ctx.points = ctx.points_upto(5)
        return ctx

    def points_upto(self, total):
        """設定の点にシード固定の乱択点を足して total 個にする"""
        points = list(self.cfg.points)
        sampler = self.cfg.sampler("points")
        while len(points) < total:
            points.append(PointCoords.random(self.cfg.s, sampler))
        return points


def _count_detail(n, what):
    return f"{n} {what}"


# ---------------------------------------------------------------------------
# 閉じた式とエンジンの検算
# ---------------------------------------------------------------------------

def index_label(spec, index):
    names = coordinate_names(spec.s)
    return "(" + ",".join(names[i] for i in index) + ")"


def _report_differences(report, suite, name, spec, diffs):
    if not diffs:
        report.add_check(suite, name, True, "exact match")
        return
    index, closed_value, engine_value = diffs[0]
    report.add_check(
        suite,
        name,
        False,
        f"{len(diffs)} mismatches; first at {index_label(spec, index)} "
        f"closed={format_value(closed_value)} engine={format_value(engine_value)}",
    )


def crosscheck_at(spec, P, closed=None, suite="crosscheck", label="point"):
    """
    閉じた式 Γ, R, ∇R とエンジンの値を点 P で成分ごとに比較する

    Args:
        closed: ClosedForms（省略時は既定の閉じた式）
    """
    closed = closed or CLOSED_FORMS
    report = VerificationReport()
    _, gamma, tower = engine_fields(spec, 1)
    values = P.values

    engine_gamma = gamma.evaluate(values)
    closed_gamma = closed.christoffel_at(spec, P)
    keys = sorted(set(engine_gamma) | set(closed_gamma))
    diffs = [
        (k, closed_gamma.get(k, Fraction(0)), engine_gamma.get(k, Fraction(0)))
        for k in keys
        if closed_gamma.get(k, Fraction(0)) != engine_gamma.get(k, Fraction(0))
    ]
    _report_differences(report, suite, f"{label}.christoffel", spec, diffs)
    _report_differences(
        report, suite, f"{label}.curvature", spec,
        tensor_differences(closed.curvature_at(spec, P), tower[0].evaluate(values)),
    )
    _report_differences(
        report, suite, f"{label}.nabla_curvature", spec,
        tensor_differences(closed.nabla_curvature_at(spec, P), tower[1].evaluate(values)),
    )
    return report


def crosscheck_fields(spec, suite="crosscheck", label="fields"):
    """閉じた式とエンジンを多項式の恒等式として比較する"""
    report = VerificationReport()
    _, gamma, tower = engine_fields(spec, 1)
    closed_gamma, closed_R, closed_nabla = closed_form_fields(spec)
    gamma_diffs = [
        (k, closed_gamma[k], gamma[k])
        for k in sorted(set(closed_gamma.entries) | set(gamma.entries))
        if closed_gamma[k] != gamma[k]
    ]
    _report_differences(report, suite, f"{label}.christoffel", spec, gamma_diffs)
    _report_differences(report, suite, f"{label}.curvature", spec, closed_R.differences(tower[0]))
    _report_differences(report, suite, f"{label}.nabla_curvature", spec, closed_nabla.differences(tower[1]))
    report.add_check(
        suite, f"{label}.torsion_free", not gamma.torsion_violations(), "Γ^k_ij = Γ^k_ji as polynomials"
    )
    _, _, displayed = closed_form_fields(spec, cross_terms=False)
    missing = len(displayed.differences(tower[1]))
    if missing:
        report.add_note(
            suite,
            f"{label}.nabla_cross_terms",
            f"s={spec.s}: the (i,j,j,i;i)-only form misses {missing} nonzero ∇R components "
            f"(2u_k on (i,j,j,i;k) and u_k on (i,j,j,k;i) with i,j,k distinct)",
        )
    return report


# ---------------------------------------------------------------------------
# model
# ---------------------------------------------------------------------------

def suite_model(ctx, report):
    ms = ctx.model
    s = ms.s
    report.add_check("model", "pair_symmetries", not check_pair_symmetries(ms.R), "R_3s has Z2 pair symmetries")
    report.add_check("model", "first_bianchi", not check_first_bianchi(ms.R), "R_3s satisfies the first Bianchi identity")
    problems = model_integrity(ms)
    report.add_check("model", "integrity", not problems, problems[0] if problems else f"signature ({2 * s},{s},0)")

    sampler = ctx.cfg.sampler("model.os")
    standard = ms.standard_basis()
    failures = []
    n = min(MODEL_ACTIONS, ctx.cfg.samples)
    for _ in range(n):
        B = os_action(sampler.orthogonal(s), standard)
        violations = validate_normalized_basis(ms, B)
        if violations:
            failures.append(violations[0])
    report.add_check(
        "model", "os_invariance", not failures,
        failures[0] if failures else _count_detail(n, "O(s) elements preserve (g,R)"),
    )

    sampler = ctx.cfg.sampler("model.bases")
    bases = [random_normalized_basis(ms, sampler) for _ in range(5)]
    report.add_check("model", "random_normalized_bases", True, _count_detail(len(bases), "bases validated"))
    if s == 2:
        sheared = validate_normalized_basis(ms, shear(standard, (1, -1)))
        report.add_check("model", "shear", not sheared, sheared[0] if sheared else "beta=(1,-1) keeps the normal form")
    report.add_note(
        "model", "normalized_basis_changes",
        "sampled O(s) x sign flips" + (" with shears" if s == 2 else "")
        + "; richer changes preserving the normal form are not explored",
    )


# ---------------------------------------------------------------------------
# crosscheck
# ---------------------------------------------------------------------------

def suite_crosscheck(ctx, report):
    spec = ctx.family
    report.extend(crosscheck_fields(spec, label="cfg.fields"))
    for n, P in enumerate(ctx.points, start=1):
        report.extend(crosscheck_at(spec, P, label=f"cfg.point{n}"))

    sampler = ctx.cfg.sampler("crosscheck.families")
    for n in range(1, ctx.cfg.families + 1):
        family = random_family(ctx.cfg.s, sampler, ctx.cfg.degree)
        report.extend(crosscheck_fields(family, label=f"family{n}.fields"))
        report.extend(crosscheck_at(family, PointCoords.random(ctx.cfg.s, sampler), label=f"family{n}.point"))


# ---------------------------------------------------------------------------
# curvature
# ---------------------------------------------------------------------------

def suite_curvature(ctx, report):
    spec = ctx.family
    s = spec.s
    metric, gamma, tower = engine_fields(spec, 1)

    ricci = ricci_field(tower[0], metric)
    report.add_check("curvature", "ricci_field_zero", ricci.is_zero(), "Ric ≡ 0 as polynomials")
    nonzero = [P for P in ctx.points if not ricci_closed(spec, P).is_zero()]
    report.add_check(
        "curvature", "ricci_closed_zero", not nonzero,
        f"nonzero at {nonzero[0]}" if nonzero else _count_detail(len(ctx.points), "points"),
    )
    compatible = covariant_derivative_field(metric.as_tensor_field(), gamma).is_zero()
    report.add_check("curvature", "metric_compatible", compatible, "∇g ≡ 0")

    bad = []
    for P in ctx.points:
        R = curvature_closed(spec, P)
        found = check_pair_symmetries(R) or check_first_bianchi(R)
        if found:
            bad.append((P, found[0]))
    report.add_check(
        "curvature", "algebraic_symmetries", not bad,
        f"violated at {bad[0][1]} for {bad[0][0]}" if bad else _count_detail(len(ctx.points), "points"),
    )

    bad = []
    for P in ctx.points:
        found = second_bianchi_violations(tower[1].evaluate(P.values))
        if found:
            bad.append((P, found[0]))
    report.add_check(
        "curvature", "second_bianchi", not bad,
        f"violated at {bad[0][1]} for {bad[0][0]}" if bad else _count_detail(len(ctx.points), "points"),
    )

    P = ctx.points[0]
    g = metric_at(spec, P)
    R = curvature_closed(spec, P)
    sampler = ctx.cfg.sampler("curvature.jacobi")
    failures = 0
    for _ in range(ctx.cfg.samples):
        J = jacobi_operator(g, R, sampler.vector(3 * s))
        if not is_zero_matrix(mat_power(J, 3)):
            failures += 1
    report.add_check(
        "curvature", "jacobi_cube_zero", failures == 0,
        f"{failures} of {ctx.cfg.samples} vectors with J(z)^3 != 0" if failures else _count_detail(ctx.cfg.samples, "vectors"),
    )

    sampler = ctx.cfg.sampler("curvature.triple")
    failures = 0
    for _ in range(HEXTUPLES):
        z = [sampler.vector(3 * s) for _ in range(6)]
        product = mat_mul(
            curvature_operator(g, R, z[0], z[1]),
            mat_mul(curvature_operator(g, R, z[2], z[3]), curvature_operator(g, R, z[4], z[5])),
        )
        if not is_zero_matrix(product):
            failures += 1
    report.add_check(
        "curvature", "triple_product_zero", failures == 0,
        f"{failures} of {HEXTUPLES} hextuples" if failures else _count_detail(HEXTUPLES, "hextuples"),
    )

    shifted = PointCoords(P.u, P.t, tuple(x + 1 for x in P.v))
    report.add_check("curvature", "v_independent", metric_at(spec, shifted) == g, "g does not depend on v")

    if s == 2:
        mismatched = [
            Q for Q in ctx.points
            if (alpha(spec, Q) == 0) != nabla_curvature_closed(spec, Q).is_zero()
        ]
        report.add_check(
            "curvature", "alpha_detects_nabla", not mismatched,
            f"alpha and ∇R disagree at {mismatched[0]}" if mismatched else _count_detail(len(ctx.points), "points"),
        )
    else:
        report.add_note(
            "curvature", "alpha_detects_nabla",
            f"s={s}: ∇R also carries cross terms in u, alpha=0 does not force ∇R=0",
        )


# ---------------------------------------------------------------------------
# homogeneity
# ---------------------------------------------------------------------------

def suite_homogeneity(ctx, report):
    spec = ctx.family
    ms = ctx.model
    points = ctx.points_upto(HOMOGENEITY_POINTS)
    bad = []
    for P in points:
        psi = normalized_basis_at(spec, P).psi
        g_frame = pullback(Tensor.from_matrix(metric_at(spec, P)), psi)
        R_frame = pullback(curvature_closed(spec, P), psi)
        if g_frame != ms.metric_tensor or R_frame != ms.R:
            bad.append(P)
    report.add_check(
        "homogeneity", "frame_matches_model", not bad,
        f"frame fails at {bad[0]}" if bad else _count_detail(len(points), "points"),
    )

    P = points[0]
    N = normalized_basis_at(spec, P)
    report.add_note("homogeneity", "normalization", f"at {P}: eps={format_value(N.eps)} rho={format_value(N.rho)}")

    sampler = ctx.cfg.sampler("homogeneity.jacobi")
    g = metric_at(spec, P)
    R = curvature_closed(spec, P)
    mismatches = 0
    trials = 10
    for _ in range(trials):
        y = sampler.vector(ms.dim)
        model_profile = rank_profile(jacobi_operator(ms.g, ms.R, y))
        point_profile = rank_profile(jacobi_operator(g, R, N.psi.apply(y)))
        if model_profile != point_profile:
            mismatches += 1
    report.add_check(
        "homogeneity", "jacobi_profiles_agree", mismatches == 0,
        f"{mismatches} of {trials} vectors" if mismatches else _count_detail(trials, "vectors"),
    )


# ---------------------------------------------------------------------------
# jacobi
# ---------------------------------------------------------------------------

def suite_jacobi(ctx, report):
    ms = ctx.model
    s = ms.s
    base = model_bases(ms)
    sampler = ctx.cfg.sampler("jacobi.spacelike")
    verdict = osserman_scan(ms.g, ms.R, CausalType.SPACELIKE, 1, ctx.cfg.samples, sampler, base=base)
    expected = (2 * (s - 1), s - 1)
    expected_partition = (3,) * (s - 1) + (1, 1, 1)
    ok = verdict.constant and verdict.profile.ranks == expected and verdict.partition.sizes == expected_partition
    report.add_check("jacobi", "spacelike_osserman", ok, str(verdict))

    B = ms.standard_basis()
    sampler = ctx.cfg.sampler("jacobi.timelike")
    verdict = osserman_scan(
        ms.g, ms.R, CausalType.TIMELIKE, 1, 2, sampler, injected=[B.t(0), B.z_minus(0)], base=base
    )
    ok = not verdict.constant and str(verdict.witnesses[0][1]) == "()" and verdict.witnesses[1][1].ranks == expected
    report.add_check("jacobi", "timelike_witnesses", ok, f"J(T_1) vs J(Z_1^-): {verdict}")

    random_verdict = osserman_scan(ms.g, ms.R, CausalType.TIMELIKE, 1, ctx.cfg.samples, sampler, base=base)
    report.add_note("jacobi", "timelike_random_scan", str(random_verdict))

    report.add_check(
        "jacobi", "kernel_directions",
        is_zero_matrix(jacobi_operator(ms.g, ms.R, B.v(0))),
        "J(V_1) = 0",
    )

    sampler = ctx.cfg.sampler("jacobi.adjoint")
    failures = 0
    for _ in range(ctx.cfg.samples):
        J = jacobi_operator(ms.g, ms.R, sampler.vector(ms.dim))
        if not is_self_adjoint(ms.g, J) or not is_zero_matrix(mat_power(J, 3)):
            failures += 1
    report.add_check(
        "jacobi", "self_adjoint_nilpotent", failures == 0,
        f"{failures} of {ctx.cfg.samples} vectors" if failures else _count_detail(ctx.cfg.samples, "vectors"),
    )


# ---------------------------------------------------------------------------
# higher_jacobi
# ---------------------------------------------------------------------------

def suite_higher_jacobi(ctx, report):
    ms = ctx.model
    s = ms.s
    n = ctx.cfg.plane_samples
    base = model_bases(ms)
    B = ms.standard_basis()

    for k in range(2, s + 1):
        sampler = ctx.cfg.sampler(f"higher_jacobi.spacelike.{k}")
        verdict = osserman_scan(ms.g, ms.R, CausalType.SPACELIKE, k, n, sampler, base=base)
        ok = verdict.constant and verdict.profile.ranks == (2 * s, s) and verdict.partition.sizes == (3,) * s
        report.add_check("higher_jacobi", f"spacelike_k{k}", ok, str(verdict))

    for k in range(s + 2, 2 * s + 1):
        sampler = ctx.cfg.sampler(f"higher_jacobi.timelike.{k}")
        verdict = osserman_scan(ms.g, ms.R, CausalType.TIMELIKE, k, n, sampler, base=base)
        report.add_check("higher_jacobi", f"timelike_k{k}", verdict.constant, str(verdict))
        if verdict.constant:
            rank = verdict.profile.ranks[0] if verdict.profile.ranks else 0
            matches = "2s" if rank == 2 * s else ("s" if rank == s else "neither")
            report.add_note(
                "higher_jacobi", f"timelike_k{k}_rank",
                f"rank J(π)={rank}; 2s={2 * s} tabulated s={s}; matches {matches}",
            )

    for k in range(2, s + 2):
        pi1, pi2 = canonical_timelike_witnesses(ms, k)
        p1 = rank_profile(jacobi_plane(ms.g, ms.R, pi1))
        p2 = rank_profile(jacobi_plane(ms.g, ms.R, pi2))
        ok = jordan_partition(p1) != jordan_partition(p2)
        report.add_check(
            "higher_jacobi", f"timelike_witnesses_k{k}", ok,
            f"π1 profile={p1} partition={jordan_partition(p1)}; π2 profile={p2} partition={jordan_partition(p2)}",
        )

    for row in rank_table_rows(ms):
        report.add_note(
            "higher_jacobi", f"rank_table_l{row.ell}",
            f"{row.plane}: computed rank {row.computed}, tabulated {row.tabulated}, structural {row.structural}",
        )

    plane = [B.z_plus(0), B.z_plus(1)]
    reference = jacobi_plane(ms.g, ms.R, plane)
    summed = mat_add(jacobi_operator(ms.g, ms.R, plane[0]), jacobi_operator(ms.g, ms.R, plane[1]))
    report.add_check("higher_jacobi", "orthonormal_sum", reference == summed, "J(span{Z_1^+,Z_2^+}) = J(Z_1^+) + J(Z_2^+)")

    sampler = ctx.cfg.sampler("higher_jacobi.basis_change")
    changes = 0
    differing = 0
    while changes < 20:
        M = sampler.matrix(2)
        if matrix_rank(M) < 2:
            continue
        changes += 1
        changed = [linear_combination(row, plane) for row in M]
        if jacobi_plane(ms.g, ms.R, PlaneBasis(ms.g, changed)) != reference:
            differing += 1
    report.add_check(
        "higher_jacobi", "basis_independent", differing == 0,
        f"{differing} of {changes} basis changes" if differing else _count_detail(changes, "basis changes"),
    )


# ---------------------------------------------------------------------------
# quotient
# ---------------------------------------------------------------------------

def basis_independence_report(ms, B1, B2, suite="quotient", name="g_U_basis_independent"):
    """
    2 つの正規化基底の g_{U,B} を参照フレームで比較する
    """
    report = VerificationReport()
    for label, B in (("B1", B1), ("B2", B2)):
        violations = validate_normalized_basis(ms, B)
        if violations:
            report.add_check(suite, name, False, f"{label} rejected: {violations[0]}")
            return report
    reference = reference_quotient_U(ms)
    G1 = g_U_in_reference(ms, B1, reference)
    G2 = g_U_in_reference(ms, B2, reference)
    report.add_check(
        suite, name, G1 == G2,
        "identical" if G1 == G2 else f"{format_value(G1)} != {format_value(G2)}",
    )
    return report


def suite_quotient(ctx, report):
    ms = ctx.model
    s = ms.s
    n = ms.dim
    B = ms.standard_basis()
    structures = induced_structures(ms, B)
    span_V = Subspace(n, [B.v(i) for i in range(s)])
    span_TV = Subspace(n, [B.t(i) for i in range(s)] + [B.v(i) for i in range(s)])
    report.add_check("quotient", "A_V", structures.A_V.same_span(span_V), f"dim {structures.A_V.dim} = span{{V_i}}")
    report.add_check("quotient", "A_TV", structures.A_TV.same_span(span_TV), f"dim {structures.A_TV.dim} = span{{T_i,V_i}}")
    report.add_check(
        "quotient", "g_T", structures.g_T == tuple(tuple(-x for x in row) for row in identity(s)), "g_T = -I"
    )
    g_U = g_U_in_reference(ms, B)
    report.add_check("quotient", "g_U_standard", g_U == identity(s), f"g_U = {format_value(g_U)}")

    sampler = ctx.cfg.sampler("quotient.representatives")
    problems = representative_problems(ms, B, sampler)
    report.add_check(
        "quotient", "representative_independent", not problems,
        problems[0] if problems else "g_T, g_U and R_UT unchanged under kernel shifts",
    )

    sampler = ctx.cfg.sampler("quotient.pairs")
    passed = 0
    for _ in range(NORMALIZED_BASIS_PAIRS):
        B1 = random_normalized_basis(ms, sampler)
        B2 = random_normalized_basis(ms, sampler)
        result = basis_independence_report(ms, B1, B2)
        if result.all_passed:
            passed += 1
        else:
            report.extend(result)
            break
    else:
        report.add_check(
            "quotient", "g_U_basis_independent", True, _count_detail(passed, "pairs of normalized bases"),
        )

    spec = ctx.family
    P = ctx.points[0]
    A_V = kernel_subspace_AV(curvature_closed(spec, P))
    coordinate_V = Subspace(n, [basis_vector(n, v_index(s, i)) for i in range(s)])
    report.add_check("quotient", "A_V_at_point", A_V.same_span(coordinate_V), f"A_V = span{{∂v_i}} at {P}")


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------

def suite_invariants(ctx, report):
    spec = ctx.family
    s = spec.s
    points = ctx.points_upto(INVARIANT_POINTS)

    bad = []
    for P in points:
        found = alpha_via_quotient(spec, P)
        expected = alpha_via_slots_expected(spec, P)
        if found != expected:
            bad.append((P, found, expected))
    report.add_check(
        "invariants", "alpha_via_quotient", not bad,
        f"at {bad[0][0]}: {format_value(bad[0][1])} != {format_value(bad[0][2])}" if bad
        else _count_detail(len(points), "points") + "; ¼Σ(∇R_u)² = (s-1)(alpha + 4(s-2)|u|²)",
    )
    if s == 2:
        equal = all(alpha_via_quotient(spec, P) == alpha(spec, P) for P in points)
        report.add_check("invariants", "alpha_factor", equal, "¼Σ(∇R_u)² = alpha for s=2")
    else:
        report.add_note(
            "invariants", "alpha_factor",
            f"s={s}: ¼Σ(∇R_u)² = {s - 1}(alpha + {4 * (s - 2)}|u|²), equals (s-1)alpha only at u=0",
        )

    origin = PointCoords.zero(s)
    for name, candidate in symmetric_candidates(s).items():
        _, _, tower = engine_fields(candidate, 1)
        flat_alpha = all(alpha(candidate, P) == 0 for P in points)
        if name == "quartic":
            report.add_check("invariants", "quartic_alpha_zero", flat_alpha, "alpha ≡ 0 for f_i = -u_i^4/6")
            if s == 2:
                report.add_check("invariants", "quartic_nabla_zero", tower[1].is_zero(), "∇R ≡ 0 for f_i = -u_i^4/6")
            else:
                report.add_check(
                    "invariants", "quartic_nabla_zero_at_origin",
                    tower[1].evaluate(origin.values).is_zero(), "∇R = 0 at u=0 for f_i = -u_i^4/6",
                )
                report.add_note(
                    "invariants", "quartic_residue",
                    f"s={s}: ∇R has {tower[1].nonzero_count()} nonzero polynomial components (cross terms in u)",
                )
        else:
            report.add_note(
                "invariants", "cubic_candidate",
                f"f_i = -u_i^3/6: ∇R ≡ 0 is {'true' if tower[1].is_zero() else 'false'}; "
                f"alpha ≡ 0 is {'true' if flat_alpha else 'false'}",
            )

    cubic = cubic_family(s)
    reference = PointCoords((1, 2) + (0,) * (s - 2), (0,) * s, (0,) * s)
    verdict = homogeneity_obstruction(cubic, [reference, origin])
    report.add_check(
        "invariants", "cubic_obstruction", verdict.verdict == NOT_LOCALLY_HOMOGENEOUS, str(verdict)
    )

    verdict = homogeneity_obstruction(spec, _distinct([origin] + points))
    report.add_note("invariants", "verdict", str(verdict))
    if engine_fields(spec, 1)[2][1].is_zero():
        report.add_note("invariants", "symmetric_space", "∇R ≡ 0: locally symmetric instance")

    rows = alpha_profile(spec, points[:1], ctx.cfg.kmax)
    row = rows[0]
    report.add_check(
        "invariants", "alpha_k1_matches_quotient", row.alpha_k[0] == row.alpha_quotient,
        f"alpha^1 = {format_value(row.alpha_k[0])} at {row.point}",
    )
    for k, value in enumerate(row.alpha_k[1:], start=2):
        report.add_note("invariants", f"alpha_k{k}", f"alpha^{k} = {format_value(value)} at {row.point}")


def _distinct(points):
    seen = []
    for P in points:
        if P not in seen:
            seen.append(P)
    return seen


SUITES = {
    "model": suite_model,
    "crosscheck": suite_crosscheck,
    "curvature": suite_curvature,
    "homogeneity": suite_homogeneity,
    "jacobi": suite_jacobi,
    "higher_jacobi": suite_higher_jacobi,
    "quotient": suite_quotient,
    "invariants": suite_invariants,
}


def run_suite(suite_id, ctx, report):
    """
    1 つのスイートを実行する（例外は FAIL 行にする）

    Returns:
        bool: 例外なく終わったか
    """
    logger.info(f"🔍 スイート {suite_id} を実行します")
    try:
        SUITES[suite_id](ctx, report)
    except Exception as e:
        logger.error(f"❌ スイート {suite_id} でエラーが発生しました: {e}")
        report.add_check(suite_id, "error", False, f"{type(e).__name__}: {e}")
        return False
    return True


def run_suites(cfg, suites=None):
    """
    設定に従って検証スイートを順に実行する

    Args:
        cfg: RunConfig
        suites: 実行するスイート ID（省略時は cfg.suites）。順序は常に SUITE_IDS に従う

    Returns:
        VerificationReport
    """
    selected = set(suites if suites is not None else cfg.suites)
    report = VerificationReport()
    try:
        ctx = SuiteContext.from_config(cfg)
    except CurvHomoError as e:
        logger.error(f"❌ モデルまたは族を構成できません: {e}")
        report.add_check("setup", "error", False, f"{type(e).__name__}: {e}")
        return report
    for suite_id in SUITE_IDS:
        if suite_id in selected:
            run_suite(suite_id, ctx, report)
    summary = report.summary()
    if summary["fail"]:
        logger.warning(f"⚠️ {summary['fail']} 件の検査が失敗しました")
    else:
        logger.info(f"✅ {summary['total']} 件の検査が全て成功しました")
    return report


def invariants_report(cfg):
    """各点の alpha, ¼Σ(∇R_u)², alpha^k と局所等質性の判定"""
    ctx = SuiteContext.from_config(cfg)
    spec = ctx.family
    report = VerificationReport()
    for n, row in enumerate(alpha_profile(spec, ctx.points, cfg.kmax), start=1):
        values = " ".join(f"alpha^{k}={format_value(v)}" for k, v in enumerate(row.alpha_k, start=1))
        report.add_note(
            "invariants", f"point{n}",
            f"{row.point} alpha={format_value(row.alpha)} quotient={format_value(row.alpha_quotient)} {values}",
        )
    points = _distinct([PointCoords.zero(spec.s)] + ctx.points)
    report.add_note("invariants", "verdict", str(homogeneity_obstruction(spec, points)))
    return report


def scan_report(cfg, kind, k):
    """
    モデル上で k 平面（k=1 ならベクトル）を走査する

    Args:
        kind: "spacelike" または "timelike"
    """
    kind = CausalType(kind)
    ms = build_model(cfg.s)
    n = cfg.samples if k == 1 else cfg.plane_samples
    verdict = osserman_scan(ms.g, ms.R, kind, k, n, cfg.sampler(f"scan.{kind.value}.{k}"), base=model_bases(ms))
    report = VerificationReport()
    report.add_note("scan", f"{kind.value}_k{k}", str(verdict))
    return report
