"""KZ operators, dynamical difference operators, affine cocycles and the compatibility checks.

A point is given as ``t`` together with a power ``d``; the actual coordinates
are ``z_k = t_k ** d``.  With ``d = N`` every prefactor ``z^omega`` for
``omega`` in the dual weight lattice of sl_N evaluates to a rational number.

The KZ operator is ``nabla_j = kappa z_j d/dz_j - M_j`` and every identity
between first-order operators is checked in the derivative-free form obtained
by moving ``z_j d/dz_j`` through the coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CoincidingPoints
from .exact import PuiseuxMatrix, RationalMatrix, mat_inverse
from .modules import WeightModule, group_lift
from .operators import EvalContext, bb_alpha, bb_w, dot, omega_matrices, r_matrix, r_matrix_euler
from .reports import SKIP, CheckReport, combine, compare, require
from .roots import (
    AffineRoot,
    AffineWeylElement,
    affine_inversion_sequence,
    solve_level,
    vneg,
    w_bracket,
)

F = Fraction


@dataclass(frozen=True)
class ZSample:
    t: tuple
    d: int = 1

    def __post_init__(self):
        t = tuple(F(x) for x in self.t)
        object.__setattr__(self, "t", t)
        if any(x == 0 for x in t):
            raise ValueError("sample coordinates must be nonzero")
        z = [x**self.d for x in t]
        if len(set(z)) != len(z):
            raise CoincidingPoints("sample points coincide")

    @property
    def z(self) -> tuple:
        return tuple(x**self.d for x in self.t)

    @property
    def n(self) -> int:
        return len(self.t)

    def monomial(self, exps: Sequence) -> Fraction:
        """prod_k z_k^{e_k}; requires d * e_k integral."""
        out = F(1)
        for x, e in zip(self.t, exps):
            p = F(e) * self.d
            if p.denominator != 1:
                raise ValueError(f"exponent {e} is not cleared by d={self.d}")
            out *= x ** int(p)
        return out


# ---------------------------------------------------------------------------
# KZ matrices
# ---------------------------------------------------------------------------


def r_sum(V: WeightModule, j: int, z: Sequence) -> RationalMatrix:
    """sum_{k != j} r(z_j / z_k)^{(j,k)}."""
    out = RationalMatrix.zeros(V.dim)
    for k in range(V.n_factors):
        if k != j:
            if z[j] == z[k]:
                raise CoincidingPoints(f"z_{j + 1} = z_{k + 1}")
            out = out + r_matrix(V, j, k, F(z[j]) / z[k])
    return out


@dataclass
class KzMatrix:
    j: int
    M: RationalMatrix
    euler: dict  # i -> z_i d/dz_i M_j


def kz_matrix(V: WeightModule, j: int, z: Sequence, lam: Sequence) -> KzMatrix:
    """M_j = sum_{k != j} r(z_j/z_k)^{(j,k)} + lam^{(j)} and its Euler derivatives."""
    z = [F(x) for x in z]
    if len(z) != V.n_factors:
        raise ValueError("need one point per tensor factor")
    if len(set(z)) != len(z):
        raise CoincidingPoints("sample points coincide")
    M = r_sum(V, j, z) + V.cartan(lam, factor=j)
    euler = {}
    own = RationalMatrix.zeros(V.dim)
    for k in range(V.n_factors):
        if k == j:
            continue
        d = r_matrix_euler(V, j, k, z[j] / z[k])
        own = own + d
        euler[k] = -d  # z_k d/dz_k r(z_j/z_k) = -(u d/du r)(u)
    euler[j] = own
    return KzMatrix(j, M, euler)


def check_kz_flatness(V: WeightModule, z: Sequence, ctx: EvalContext) -> CheckReport:
    params = {"module": V.name, "z": list(z), "lam": list(ctx.lam), "kappa": ctx.kappa}
    mats = [kz_matrix(V, j, z, ctx.lam) for j in range(V.n_factors)]
    reports = []
    for i in range(V.n_factors):
        for j in range(i + 1, V.n_factors):
            lhs = (mats[j].euler[i] - mats[i].euler[j]).scale(ctx.kappa)
            rhs = mats[i].M.commutator(mats[j].M)
            reports.append(compare(f"flat_{i + 1}{j + 1}", lhs, rhs, **params))
    return combine("kz_flatness", reports, **params)


# ---------------------------------------------------------------------------
# z-monomials
# ---------------------------------------------------------------------------


def monomial_exponents(V: WeightModule, omega: Sequence) -> list[tuple]:
    """Per basis vector, the exponent vector ((omega, nu^{(1)}), ..., (omega, nu^{(n)}))."""
    return [tuple(dot(omega, fw[b]) for fw in V.factor_weights) for b in range(V.dim)]


def monomial_diag(V: WeightModule, omega: Sequence, zs: ZSample) -> RationalMatrix:
    return RationalMatrix.diag([zs.monomial(e) for e in monomial_exponents(V, omega)])


def conj_monomial(V: WeightModule, omega: Sequence, X: RationalMatrix, zs: ZSample) -> RationalMatrix:
    """z^omega X z^{-omega} at the sample point."""
    exps = monomial_exponents(V, omega)
    entries = {}
    for r, c, v in X.nonzero():
        entries[(r, c)] = v * zs.monomial([a - b for a, b in zip(exps[r], exps[c])])
    return RationalMatrix.from_entries(V.dim, V.dim, entries)


# ---------------------------------------------------------------------------
# dynamical operators for sl_N
# ---------------------------------------------------------------------------


@dataclass
class DynOperator:
    """K_i = prod_k z_k^{(omega_i)^{(k)}} B_{w_[i],V}(lam)."""

    i: int
    exponents: list
    bpart: RationalMatrix

    @property
    def puiseux(self) -> PuiseuxMatrix:
        nvars = len(self.exponents[0])
        return PuiseuxMatrix.diagonal_monomials(self.exponents) @ PuiseuxMatrix.from_rational(self.bpart, nvars)

    def evaluate(self, zs: ZSample) -> RationalMatrix:
        return self.bpart.scale_rows([zs.monomial(e) for e in self.exponents])


def dyn_operator(V: WeightModule, i: int, lam: Sequence) -> DynOperator:
    rs = V.root_system
    if i in (0, V.N):
        return DynOperator(i, [(F(0),) * V.n_factors] * V.dim, RationalMatrix.identity(V.dim))
    omega = rs.dual_fundamental(i)
    return DynOperator(i, monomial_exponents(V, omega), bb_w(V, w_bracket(rs, i), lam))


def check_kz_dyn_compat(V: WeightModule, i: int, j: int, zs: ZSample, ctx: EvalContext) -> CheckReport:
    """M_j(lam + kappa omega_i) K_i - K_i M_j(lam) = kappa (omega_i)^{(j)} K_i."""
    params = {"module": V.name, "i": i, "j": j + 1, "t": list(zs.t), "lam": list(ctx.lam), "kappa": ctx.kappa}
    omega = V.root_system.dual_fundamental(i)
    K = dyn_operator(V, i, ctx.lam).evaluate(zs)
    shifted = ctx.shifted(omega)
    lhs = kz_matrix(V, j, zs.z, shifted.lam).M @ K - K @ kz_matrix(V, j, zs.z, ctx.lam).M
    rhs = (V.cartan(omega, factor=j) @ K).scale(ctx.kappa)
    blocks = require("dyn_preserves_weights", V.preserves_weights(K), "K_i mixes weight spaces", **params)
    return combine("kz_dyn_compat", [compare("kz_dyn_compat", lhs, rhs, **params), blocks], **params)


def check_dyn_dyn_compat(V: WeightModule, i: int, j: int, zs: ZSample, ctx: EvalContext) -> CheckReport:
    """K_i(lam + kappa omega_j) K_j(lam) = K_j(lam + kappa omega_i) K_i(lam)."""
    rs = V.root_system
    params = {"module": V.name, "i": i, "j": j, "t": list(zs.t), "lam": list(ctx.lam), "kappa": ctx.kappa}
    wi, wj = rs.dual_fundamental(i), rs.dual_fundamental(j)
    lhs = dyn_operator(V, i, ctx.shifted(wj).lam).puiseux @ dyn_operator(V, j, ctx.lam).puiseux
    rhs = dyn_operator(V, j, ctx.shifted(wi).lam).puiseux @ dyn_operator(V, i, ctx.lam).puiseux
    symbolic = require("dyn_dyn_puiseux", lhs == rhs, "Puiseux products differ", **params)
    d = zs.d
    left = lhs.substitute_power(d).evaluate(zs.t)
    right = rhs.substitute_power(d).evaluate(zs.t)
    return combine("dyn_dyn_compat", [compare("dyn_dyn_compat", left, right, **params), symbolic], **params)


# ---------------------------------------------------------------------------
# affine cocycles
# ---------------------------------------------------------------------------


@dataclass
class CocycleElement:
    element: AffineWeylElement | None
    factors: list  # (AffineRoot, omega) in application order (rightmost first)
    value: PuiseuxMatrix


def affine_factor(V: WeightModule, root: AffineRoot, ctx: EvalContext, alternative: int = 0):
    """z^omega B^alpha(lam - kappa omega) z^{-omega} with (omega, alpha) = -level."""
    omega = solve_level(V.root_system, root.alpha, root.level, alternative)
    exps = monomial_exponents(V, omega)
    nvars = V.n_factors
    b = bb_alpha(V, root.alpha, ctx.shifted(omega, -1).lam)
    value = (
        PuiseuxMatrix.diagonal_monomials(exps)
        @ PuiseuxMatrix.from_rational(b, nvars)
        @ PuiseuxMatrix.diagonal_monomials([tuple(-x for x in e) for e in exps])
    )
    return omega, value


def cocycle_from_sequence(V: WeightModule, seq: Sequence[AffineRoot], ctx: EvalContext) -> CocycleElement:
    value = PuiseuxMatrix.from_rational(RationalMatrix.identity(V.dim), V.n_factors)
    factors = []
    for root in seq:
        omega, f = affine_factor(V, root, ctx)
        value = f @ value
        factors.append((root, omega))
    return CocycleElement(None, factors, value)


def cocycle_value(V: WeightModule, el: AffineWeylElement, ctx: EvalContext, tie_break: str = "min") -> CocycleElement:
    """G_w = G^{a^l} ... G^{a^1} along a reduced word of ``el``."""
    _, word = el.reduced_word(tie_break)
    out = cocycle_from_sequence(V, affine_inversion_sequence(el.rs, word), ctx)
    out.element = el
    return out


def check_factor_well_defined(V: WeightModule, root: AffineRoot, ctx: EvalContext) -> CheckReport:
    params = {"module": V.name, "root": root.label(V.root_system), "lam": list(ctx.lam), "kappa": ctx.kappa}
    o1, a = affine_factor(V, root, ctx, 0)
    o2, b = affine_factor(V, root, ctx, 1)
    if o1 == o2:
        o2, b = affine_factor(V, root, ctx, 2)
    if o1 == o2:
        return CheckReport("cocycle_factor_well_defined", SKIP, params, note="omega is unique in rank one")
    return require("cocycle_factor_well_defined", a == b and o1 != o2, "factor depends on omega", **params)


def check_cocycle_identity(
    V: WeightModule, x: AffineWeylElement, y: AffineWeylElement, ctx: EvalContext
) -> CheckReport:
    """G_{xy} = {}^{y^{-1}}G_x G_y when lengths add."""
    params = {"module": V.name, "lam": list(ctx.lam), "kappa": ctx.kappa}
    xy = x * y
    if xy.length != x.length + y.length:
        return require("cocycle_identity", False, "lengths do not add", **params)
    _, xword = x.reduced_word()
    yinv = y.inverse()
    twisted = [yinv.act(a) for a in affine_inversion_sequence(x.rs, xword)]
    rhs = cocycle_from_sequence(V, twisted, ctx).value @ cocycle_value(V, y, ctx).value
    lhs = cocycle_value(V, xy, ctx).value
    return require("cocycle_identity", lhs == rhs, "G_xy differs from twisted product", **params)


def twisted_kz_matrix(V: WeightModule, el: AffineWeylElement, j: int, zs: ZSample, lam: Sequence) -> RationalMatrix:
    """Coefficient M' of the twisted operator {}^{el} nabla_j = kappa z_j d/dz_j - M'.

    With el = u t_eta: M' = x_u z^eta (sum_k r^{(j,k)}) z^{-eta} x_u^{-1} + lam^{(j)}.
    """
    r = conj_monomial(V, el.omega, r_sum(V, j, zs.z), zs)
    if not el.w.is_identity():
        r = group_lift(V, el.w).conj(r)
    return r + V.cartan(lam, factor=j)


def check_cocycle_kz(V: WeightModule, el: AffineWeylElement, j: int, zs: ZSample, ctx: EvalContext) -> CheckReport:
    """G_w nabla_j = {}^{w^{-1}}nabla_j G_w, i.e. M' G - G M_j = kappa z_j d/dz_j G."""
    params = {
        "module": V.name,
        "word": list(el.reduced_word()[1]),
        "pi": el.reduced_word()[0],
        "j": j + 1,
        "t": list(zs.t),
        "lam": list(ctx.lam),
        "kappa": ctx.kappa,
    }
    G = cocycle_value(V, el, ctx).value
    g = G.substitute_power(zs.d)
    Gz = g.evaluate(zs.t)
    dG = g.z_derivative(j).evaluate(zs.t).scale(F(1, zs.d))
    Mp = twisted_kz_matrix(V, el.inverse(), j, zs, ctx.lam)
    lhs = Mp @ Gz - Gz @ kz_matrix(V, j, zs.z, ctx.lam).M
    return compare("cocycle_kz", lhs, dG.scale(ctx.kappa), **params)


def check_cocycle_matches_dyn(V: WeightModule, i: int, ctx: EvalContext) -> CheckReport:
    """For sl_N, G_{t_{omega_i}} is z-free and equals B_{w_[i],V}."""
    from .roots import translation

    rs = V.root_system
    params = {"module": V.name, "i": i, "lam": list(ctx.lam)}
    G = cocycle_value(V, translation(rs, rs.dual_fundamental(i)), ctx).value
    zero = (F(0),) * V.n_factors
    zfree = G.exponents() <= {zero}
    Gm = G.evaluate([F(1)] * V.n_factors)
    return combine(
        "cocycle_matches_dyn",
        [require("cocycle_z_free", zfree, "translation cocycle depends on z", **params),
         compare("cocycle_matches_dyn", Gm, bb_w(V, w_bracket(rs, i), ctx.lam), **params)],
        **params,
    )


# ---------------------------------------------------------------------------
# B_w exchange, pi-invariance, equivalent form
# ---------------------------------------------------------------------------


def check_bw_r_exchange(V: WeightModule, j: int, w, zs: ZSample, ctx: EvalContext) -> CheckReport:
    """B_w (R + lam^{(j)}) = (w^{-1}(R) + lam^{(j)}) B_w with R = sum_k r(z_j/z_k)^{(j,k)}."""
    params = {"module": V.name, "w": list(w.word), "j": j + 1, "t": list(zs.t), "lam": list(ctx.lam)}
    B = bb_w(V, w, ctx.lam)
    R = r_sum(V, j, zs.z)
    lj = V.cartan(ctx.lam, factor=j)
    x = group_lift(V, w)
    main = compare("bw_r_exchange", B @ (R + lj), (x.conj_inv(R) + lj) @ B, **params)
    residues = [
        compare(f"bw_r_exchange_residue_{k + 1}", B @ omega_matrices(V, j, k).full, omega_matrices(V, j, k).full @ B, **params)
        for k in range(V.n_factors)
        if k != j
    ]
    return combine("bw_r_exchange", [main] + residues, **params)


def check_pi_invariance(V: WeightModule, i: int, j: int, zs: ZSample, ctx: EvalContext) -> CheckReport:
    """z^{omega_i} (sum_k w_[i]^{-1}(r)^{(j,k)}) z^{-omega_i} + lam^{(j)} = M_j."""
    rs = V.root_system
    params = {"module": V.name, "i": i, "j": j + 1, "t": list(zs.t), "lam": list(ctx.lam)}
    x = group_lift(V, w_bracket(rs, i))
    R = x.conj_inv(r_sum(V, j, zs.z))
    lhs = conj_monomial(V, rs.dual_fundamental(i), R, zs) + V.cartan(ctx.lam, factor=j)
    return compare("pi_invariance", lhs, kz_matrix(V, j, zs.z, ctx.lam).M, **params)


def check_monomial_twist(V: WeightModule, i: int, zs: ZSample) -> CheckReport:
    """z^{-omega_i} r(z_1/z_2) z^{omega_i} = w_[i]^{-1}(r(z_1/z_2)) on the first two factors."""
    rs = V.root_system
    params = {"module": V.name, "i": i, "t": list(zs.t)}
    r = r_matrix(V, 0, 1, zs.z[0] / zs.z[1])
    lhs = conj_monomial(V, vneg(rs.dual_fundamental(i)), r, zs)
    rhs = group_lift(V, w_bracket(rs, i)).conj_inv(r)
    return compare("monomial_twist", lhs, rhs, **params)


def _unit_root(N: int, a: int, b: int) -> tuple:
    """e_a - e_b with 1-based a, b."""
    v = [F(0)] * N
    v[a - 1] += 1
    v[b - 1] -= 1
    return tuple(v)


def equivalent_form_step(V: WeightModule, i: int, zs: ZSample, ctx: EvalContext) -> RationalMatrix:
    """The delta_i-step operator, inverse factors replaced by B^{-alpha} and reflection scalars."""
    from .operators import bb_alpha_inverse

    rs = V.root_system
    N = V.N
    delta = _delta(rs, i)
    up = ctx.shifted(delta).lam
    out = RationalMatrix.identity(V.dim)
    for a in range(i - 1, 0, -1):
        out = out @ bb_alpha_inverse(V, _unit_root(N, a, i), up)
    out = out @ monomial_diag(V, delta, zs)
    for b in range(N, i, -1):
        out = out @ bb_alpha(V, _unit_root(N, i, b), ctx.lam)
    return out


def _delta(rs, i: int) -> tuple:
    zero = rs.zero()
    hi = rs.dual_fundamental(i) if i < rs.rank + 1 else zero
    lo = rs.dual_fundamental(i - 1) if i > 1 else zero
    return tuple(a - b for a, b in zip(hi, lo))


def check_equivalent_form(V: WeightModule, i: int, zs: ZSample, ctx: EvalContext) -> CheckReport:
    """u(lam + kappa delta_i) = T_i u(lam) with T_i = K_i(mu) K_{i-1}(mu)^{-1}, mu = lam - kappa omega_{i-1}."""
    rs = V.root_system
    params = {"module": V.name, "i": i, "t": list(zs.t), "lam": list(ctx.lam), "kappa": ctx.kappa}
    prev = rs.dual_fundamental(i - 1) if i > 1 else rs.zero()
    mu = ctx.shifted(prev, -1).lam
    implied = dyn_operator(V, i, mu).evaluate(zs) @ mat_inverse(dyn_operator(V, i - 1, mu).evaluate(zs))
    via_inverse = _equivalent_form_direct(V, i, zs, ctx)
    built = equivalent_form_step(V, i, zs, ctx)
    return combine(
        "equivalent_form",
        [compare("equivalent_form", built, implied, **params),
         compare("inverse_by_reflection_scalar", built, via_inverse, **params)],
        **params,
    )


def _equivalent_form_direct(V: WeightModule, i: int, zs: ZSample, ctx: EvalContext) -> RationalMatrix:
    """Same operator with the inverses taken by Gauss-Jordan."""
    N = V.N
    delta = _delta(V.root_system, i)
    up = ctx.shifted(delta).lam
    out = RationalMatrix.identity(V.dim)
    for a in range(i - 1, 0, -1):
        out = out @ mat_inverse(bb_alpha(V, _unit_root(N, a, i), up))
    out = out @ monomial_diag(V, delta, zs)
    for b in range(N, i, -1):
        out = out @ bb_alpha(V, _unit_root(N, i, b), ctx.lam)
    return out
