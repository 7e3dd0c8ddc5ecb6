"""Determinant of K_i on a weight space versus the ratio D(lam + kappa omega_i) / D(lam).

Shifting lam by kappa*omega_i with (omega_i, alpha) = 1 moves every Gamma
argument of X_alpha by exactly -1, so Gamma(y - 1) / Gamma(y) = 1 / (y - 1)
turns the ratio into the finite product

    prod_k prod_{j=1..k} [(lam + (nu + j alpha)/2, alpha) / (lam - (nu + j alpha)/2, alpha)]^{d_k}.

Roots with (omega_i, alpha) = 0 contribute nothing, and the (z_k - z_l)
factors and gamma_k terms do not depend on lam, so they cancel.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import EmptyWeightSpace, PoleError
from .exact import mat_det, mat_rank
from .kz import ZSample, dyn_operator
from .modules import WeightModule
from .operators import EvalContext, bb_alpha, bb_w, dot, omega_matrices
from .reports import CheckReport, combine, compare_values, require
from .roots import inversion_sequence, vadd, vscale, vsub, w_bracket

F = Fraction


@dataclass
class DetData:
    nu: tuple
    dim: int
    Lambda: list  # tr_{V[nu]} lam^{(k)}
    epsilon: dict  # (k, l) -> tr_{V[nu]} Omega^{(k,l)}
    gamma: list
    multiplicities: dict = field(default_factory=dict)  # alpha -> {k: d_k}


def isotypic_multiplicities(V: WeightModule, nu: Sequence, alpha: Sequence) -> dict:
    """d_k for the sl_2(alpha)-module generated by V[nu]: highest weights nu + k alpha."""
    nu = tuple(F(x) for x in nu)
    alpha = tuple(F(x) for x in alpha)
    _, E, _ = V.root_vectors(alpha)
    blocks = V.weight_blocks()
    pairing = dot(nu, alpha)  # alpha^vee = alpha for sl_N
    out = {}
    k = max(0, int(-pairing))
    while True:
        wt = vadd(nu, vscale(k, alpha))
        if wt not in blocks:
            break
        cols = blocks[wt]
        above = blocks.get(vadd(wt, alpha), [])
        rank = mat_rank(E.submatrix(above, cols)) if above else 0
        dk = len(cols) - rank
        if dk:
            out[k] = dk
        k += 1
    return out


def det_data(V: WeightModule, nu: Sequence, lam: Sequence) -> DetData:
    idx = V.weight_space(nu)
    n = V.n_factors
    Lam = [sum((V.cartan(lam, factor=k)[a, a] for a in idx), F(0)) for k in range(n)]
    eps = {}
    for k in range(n):
        for l in range(k + 1, n):
            om = omega_matrices(V, k, l).full
            eps[(k, l)] = eps[(l, k)] = sum((om[a, a] for a in idx), F(0))
    gamma = [sum((eps[(k, l)] for l in range(n) if l != k), F(0)) for k in range(n)]
    mult = {a: isotypic_multiplicities(V, nu, a) for a in V.root_system.positive_roots}
    return DetData(tuple(F(x) for x in nu), len(idx), Lam, eps, gamma, mult)


def gamma_ratio(data: DetData, omega: Sequence, lam: Sequence, positive_roots: Sequence) -> Fraction:
    """prod over alpha of X_alpha(lam + kappa omega) / X_alpha(lam) for a minuscule omega."""
    out = F(1)
    nu = data.nu
    for alpha in positive_roots:
        shift = dot(omega, alpha)
        if shift == 0:
            continue
        if shift != 1:
            raise ValueError("omega is not minuscule")
        for k, dk in data.multiplicities[alpha].items():
            for j in range(1, k + 1):
                half = vscale(F(1, 2), vadd(nu, vscale(j, alpha)))
                num = dot(vadd(lam, half), alpha)
                den = dot(vsub(lam, half), alpha)
                if den == 0 or num == 0:
                    raise PoleError("Gamma ratio is singular at this lambda", weight=nu, j=j)
                out *= (num / den) ** dk
    return out


def d_ratio(V: WeightModule, nu: Sequence, i: int, zs: ZSample, ctx: EvalContext) -> Fraction:
    """D_{V[nu]}(z, lam + kappa omega_i) / D_{V[nu]}(z, lam) as an exact rational."""
    omega = V.root_system.dual_fundamental(i)
    before = det_data(V, nu, ctx.lam)
    after = det_data(V, nu, ctx.shifted(omega).lam)
    exps = [(a - b) / ctx.kappa for a, b in zip(after.Lambda, before.Lambda)]
    return zs.monomial(exps) * gamma_ratio(before, omega, ctx.lam, V.root_system.positive_roots)


def det_formula_check(V: WeightModule, nu: Sequence, i: int, zs: ZSample, ctx: EvalContext) -> CheckReport:
    params = {"module": V.name, "nu": list(nu), "i": i, "t": list(zs.t), "lam": list(ctx.lam), "kappa": ctx.kappa}
    idx = V.weight_space(nu)
    if not idx:
        raise EmptyWeightSpace("empty weight space")
    K = dyn_operator(V, i, ctx.lam).evaluate(zs)
    lhs = mat_det(K.submatrix(idx, idx))
    rhs = d_ratio(V, nu, i, zs, ctx)
    data = det_data(V, nu, ctx.lam)
    counts = [
        require("multiplicity_count", sum(m.values()) == data.dim, f"d_k do not add up for {a}", **params)
        for a, m in data.multiplicities.items()
    ]
    return combine("det_ratio", [compare_values("det_ratio", lhs, rhs, **params), inversion_factorization_check(V, nu, i, ctx)] + counts, **params)


def inversion_factorization_check(V: WeightModule, nu: Sequence, i: int, ctx: EvalContext) -> CheckReport:
    """B_{w_[i]} is a product of the B^alpha with (omega_i, alpha) > 0, each once; det factors accordingly."""
    rs = V.root_system
    params = {"module": V.name, "nu": list(nu), "i": i}
    w = w_bracket(rs, i)
    seq = inversion_sequence(rs, w.word)
    expected = {a for a in rs.positive_roots if dot(rs.dual_fundamental(i), a) > 0}
    same_set = set(seq) == expected and len(seq) == len(expected)
    idx = V.weight_space(nu)
    per_root = F(1)
    for a in expected:
        per_root *= mat_det(bb_alpha(V, a, ctx.lam).submatrix(idx, idx))
    whole = mat_det(bb_w(V, w, ctx.lam).submatrix(idx, idx))
    return combine(
        "det_factorization",
        [require("det_factorization_roots", same_set, "inversion set mismatch", **params),
         compare_values("det_factorization_det", whole, per_root, **params)],
        **params,
    )
