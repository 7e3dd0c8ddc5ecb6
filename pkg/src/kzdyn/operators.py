"""p-series, the operators B^alpha and B_w, Casimir pieces, r(z) and fusion matrices.

All operators are evaluated matrices on a :class:`WeightModule` at a rational
point.  Weights and lambda are trace-zero vectors of length N; for sl_N every
root satisfies alpha^vee = alpha and the form is the dot product.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import PoleAtOne, PoleError, ResonantLambda
from .exact import RationalMatrix, mat_inverse
from .modules import GroupLift, WeightModule, group_lift
from .reports import CheckReport, combine, compare, require
from .roots import WeylElement, dot_action, inversion_sequence, vadd, vscale, vsub

F = Fraction


def dot(x: Sequence, y: Sequence) -> Fraction:
    return sum((F(a) * b for a, b in zip(x, y)), F(0))


@dataclass(frozen=True)
class EvalContext:
    """A rational evaluation point: lambda in the Cartan space and a nonzero kappa."""

    lam: tuple
    kappa: Fraction = F(1)

    def __post_init__(self):
        object.__setattr__(self, "lam", tuple(F(x) for x in self.lam))
        object.__setattr__(self, "kappa", F(self.kappa))
        if self.kappa == 0:
            raise ValueError("kappa must be nonzero")

    def shifted(self, omega: Sequence, times=1) -> "EvalContext":
        return EvalContext(vadd(self.lam, vscale(F(times) * self.kappa, omega)), self.kappa)


# ---------------------------------------------------------------------------
# p-series
# ---------------------------------------------------------------------------


def p_series_columns(ts: Sequence, H: RationalMatrix, E: RationalMatrix, F_: RationalMatrix) -> RationalMatrix:
    """sum_k F^k E^k (1/k!) prod_{j<k} (t - H - j)^{-1} with a separate t for each column.

    H must be diagonal.  A vanishing factor raises PoleError unless E^k kills that column.
    """
    n = H.nrows
    hs = H.diagonal()
    ts = [F(t) for t in ts]
    result = [[F(0)] * n for _ in range(n)]
    for c in range(n):
        result[c][c] = F(1)
    coeff = [F(1)] * n
    ek = RationalMatrix.identity(n)
    fk = RationalMatrix.identity(n)
    k = 0
    while True:
        ek = E @ ek
        if ek.is_zero():
            break
        fk = fk @ F_
        k += 1
        live = {c for _, c, _ in ek.nonzero()}
        term = fk @ ek
        for c in live:
            d = ts[c] - hs[c] - (k - 1)
            if d == 0:
                raise PoleError(f"p-series pole at h={hs[c]}, j={k - 1}", weight=hs[c], j=k - 1)
            coeff[c] = coeff[c] / (d * k)
        for r, c, v in term.nonzero():
            result[r][c] += v * coeff[c]
    return RationalMatrix(result)


def p_series(t, H: RationalMatrix, E: RationalMatrix, F_: RationalMatrix) -> RationalMatrix:
    return p_series_columns([t] * H.nrows, H, E, F_)


# ---------------------------------------------------------------------------
# B operators
# ---------------------------------------------------------------------------


def bb_alpha(V: WeightModule, alpha: Sequence, lam: Sequence) -> RationalMatrix:
    """B^alpha_V(lam): on V[nu] the p-series at t = (lam + nu/2, alpha^vee) - 1."""
    H, E, F_ = V.root_vectors(alpha)
    ts = [dot(vadd(lam, vscale(F(1, 2), nu)), alpha) - 1 for nu in V.weights]
    return p_series_columns(ts, H, E, F_)


def bb_product(V: WeightModule, roots: Sequence, lam: Sequence) -> RationalMatrix:
    """B^{roots[0]} B^{roots[1]} ... B^{roots[-1]} at a common lam."""
    out = RationalMatrix.identity(V.dim)
    for a in roots:
        out = out @ bb_alpha(V, a, lam)
    return out


def bb_w(V: WeightModule, w: WeylElement, lam: Sequence, word: Sequence[int] | None = None) -> RationalMatrix:
    """B_{w,V}(lam) = B^{alpha^k} ... B^{alpha^1} over the inversion sequence of a reduced word."""
    seq = inversion_sequence(w.rs, w.word if word is None else word)
    return bb_product(V, list(reversed(seq)), lam)


def universal_b_simple(V: WeightModule, i: int, mu: Sequence) -> RationalMatrix:
    """B_{s_i}(mu) restricted to V: the p-series at the constant t = (mu, alpha_i^vee)."""
    alpha = V.root_system.simple(i)
    H, E, F_ = V.root_vectors(alpha)
    return p_series(dot(mu, alpha), H, E, F_)


def universal_b(V: WeightModule, w: WeylElement, mu: Sequence, word: Sequence[int] | None = None) -> RationalMatrix:
    """B_w(mu)|_V as the product of twisted simple factors with dot-shifted arguments."""
    rs = V.root_system
    right_first = list(reversed(w.word if word is None else word))
    out = RationalMatrix.identity(V.dim)
    prefix: list[int] = []  # u_j = s_{i_{j-1}} ... s_{i_1}, stored left to right
    for i in right_first:
        u = rs.from_word(prefix)
        factor = universal_b_simple(V, i, dot_action(rs, u, mu))
        if prefix:
            factor = group_lift(V, u, prefix).conj_inv(factor)
        out = factor @ out
        prefix.insert(0, i)
    return out


def bb_w_universal(V: WeightModule, w: WeylElement, lam: Sequence, word: Sequence[int] | None = None) -> RationalMatrix:
    """Second route to B_{w,V}(lam): column block V[nu] of B_w(lam - rho + nu/2)."""
    rho = V.root_system.rho
    cols: dict = {}
    for nu, idx in V.weight_blocks().items():
        full = universal_b(V, w, vadd(vsub(lam, rho), vscale(F(1, 2), nu)), word)
        for c in idx:
            for r in range(V.dim):
                v = full[r, c]
                if v:
                    cols[(r, c)] = v
    return RationalMatrix.from_entries(V.dim, V.dim, cols)


def reflection_scalar(V: WeightModule, alpha: Sequence, lam: Sequence) -> RationalMatrix:
    """diag((lam - nu/2, alpha^vee) / (lam + nu/2, alpha^vee))."""
    vals = []
    for nu in V.weights:
        den = dot(vadd(lam, vscale(F(1, 2), nu)), alpha)
        if den == 0:
            raise PoleError("reflection scalar denominator vanishes", weight=nu)
        vals.append(dot(vsub(lam, vscale(F(1, 2), nu)), alpha) / den)
    return RationalMatrix.diag(vals)


def bb_alpha_inverse(V: WeightModule, alpha: Sequence, lam: Sequence) -> RationalMatrix:
    """(B^alpha)^{-1} = B^{-alpha} diag(1/s) without a general matrix inverse."""
    s = reflection_scalar(V, alpha, lam)
    neg = tuple(-a for a in alpha)
    inv_s = []
    for v in s.diagonal():
        if v == 0:
            raise PoleError("B^alpha is singular at this lambda")
        inv_s.append(1 / v)
    return bb_alpha(V, neg, lam) @ RationalMatrix.diag(inv_s)


# ---------------------------------------------------------------------------
# Casimir and r(z)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OmegaParts:
    zero: RationalMatrix
    plus: RationalMatrix
    minus: RationalMatrix

    @property
    def full(self) -> RationalMatrix:
        return self.plus + self.minus


def omega_matrices(V: WeightModule, i: int, j: int) -> OmegaParts:
    """Omega^0, Omega^+ and Omega^- acting in tensor factors i and j (0-based)."""
    if i == j:
        raise ValueError("factor indices must differ")
    N = V.N
    cache = V.__dict__.setdefault("_omega_cache", {})
    if (i, j) in cache:
        return cache[(i, j)]
    e = lambda k, a, b: V.e_factor(k, a, b)  # noqa: E731
    diag_sum = RationalMatrix.zeros(V.dim)
    zi = RationalMatrix.zeros(V.dim)
    zj = RationalMatrix.zeros(V.dim)
    for a in range(N):
        diag_sum = diag_sum + e(i, a, a) @ e(j, a, a)
        zi = zi + e(i, a, a)
        zj = zj + e(j, a, a)
    zero = (diag_sum - (zi @ zj).scale(F(1, N))).scale(F(1, 2))
    up = RationalMatrix.zeros(V.dim)
    down = RationalMatrix.zeros(V.dim)
    for a in range(N):
        for b in range(a + 1, N):
            up = up + e(i, a, b) @ e(j, b, a)
            down = down + e(i, b, a) @ e(j, a, b)
    parts = OmegaParts(zero, zero + up, zero + down)
    cache[(i, j)] = parts
    return parts


def r_matrix(V: WeightModule, i: int, j: int, u) -> RationalMatrix:
    """r(u)^{(i,j)} = (Omega^+ u + Omega^-) / (u - 1)."""
    u = F(u)
    if u == 1:
        raise PoleAtOne("r(z) has a pole at z = 1")
    om = omega_matrices(V, i, j)
    return (om.plus.scale(u) + om.minus).scale(1 / (u - 1))


def r_matrix_euler(V: WeightModule, i: int, j: int, u) -> RationalMatrix:
    """u d/du r(u) = -u Omega / (u - 1)^2."""
    u = F(u)
    if u == 1:
        raise PoleAtOne("r(z) has a pole at z = 1")
    return omega_matrices(V, i, j).full.scale(-u / (u - 1) ** 2)


# ---------------------------------------------------------------------------
# fusion matrices
# ---------------------------------------------------------------------------


def _simple_coords(mu: Sequence) -> list[Fraction]:
    out, acc = [], F(0)
    for x in mu[:-1]:
        acc += x
        out.append(acc)
    return out


def _in_q_plus(mu: Sequence) -> bool:
    cs = _simple_coords(mu)
    return all(c.denominator == 1 and c >= 0 for c in cs) and any(cs)


def _lowering_part(WV: WeightModule) -> RationalMatrix:
    """sum over positive alpha of e_{-alpha} (x) e_alpha."""
    N = WV.N
    out = RationalMatrix.zeros(WV.dim)
    for a in range(N):
        for b in range(a + 1, N):
            out = out + WV.e_factor(0, b, a) @ WV.e_factor(1, a, b)
    return out


def _solve_abrr_block(WV: WeightModule, idx: list[int], lam: Sequence, lowering: RationalMatrix) -> dict:
    """Entries of the transformed J on one total-weight block, at argument lam."""
    w1 = WV.factor_weights[0]
    w2 = WV.factor_weights[1]
    d = {a: dot(lam, w2[a]) + dot(w1[a], w2[a]) / 2 for a in idx}
    pairs = []
    for a in idx:
        for b in idx:
            mu = vsub(w1[b], w1[a])
            if _in_q_plus(mu):
                pairs.append((sum(_simple_coords(mu)), a, b))
    pairs.sort()
    nrows: dict = {}
    for r, c, v in lowering.nonzero():
        nrows.setdefault(r, []).append((c, v))
    L: dict = {}
    for _, a, b in pairs:
        num = F(0)
        for c, v in nrows.get(a, ()):
            if c == b:
                num += v
            else:
                num += v * L.get((c, b), 0)
        if not num:
            continue
        den = d[b] - d[a]
        if den == 0:
            raise ResonantLambda("ABRR solve divides by zero", weight=tuple(lam))
        L[(a, b)] = num / den
    for a in idx:
        L[(a, a)] = F(1)
    return L


def fusion_transformed(WV: WeightModule, lam: Sequence) -> RationalMatrix:
    """J(lam - rho + (h1 + h2)/2) on W (x) V, via ABRR."""
    low = _lowering_part(WV)
    entries: dict = {}
    for idx in WV.weight_blocks().values():
        entries.update(_solve_abrr_block(WV, idx, lam, low))
    return RationalMatrix.from_entries(WV.dim, WV.dim, entries)


def fusion_J(WV: WeightModule, mu: Sequence) -> RationalMatrix:
    """J_{WV}(mu); on the total-weight block tau this is the transformed J at mu + rho - tau/2."""
    low = _lowering_part(WV)
    rho = WV.root_system.rho
    entries: dict = {}
    for tau, idx in WV.weight_blocks().items():
        lam = vsub(vadd(mu, rho), vscale(F(1, 2), tau))
        entries.update(_solve_abrr_block(WV, idx, lam, low))
    return RationalMatrix.from_entries(WV.dim, WV.dim, entries)


def abrr_residual(WV: WeightModule, lam: Sequence, J: RationalMatrix | None = None) -> RationalMatrix:
    """J (lam^(2) + Omega^0) - (lam^(2) + Omega^-) J for the transformed J."""
    J = fusion_transformed(WV, lam) if J is None else J
    om = omega_matrices(WV, 0, 1)
    l2 = WV.cartan(lam, factor=1)
    return J @ (l2 + om.zero) - (l2 + om.minus) @ J


def is_unipotent_lower(WV: WeightModule, J: RationalMatrix) -> bool:
    """J - 1 maps W[nu] (x) V[mu] into sums of W[tau] (x) V[sigma] with tau < nu."""
    w1 = WV.factor_weights[0]
    for r, c, v in J.nonzero():
        if r == c:
            if v != 1:
                return False
        elif not _in_q_plus(vsub(w1[c], w1[r])):
            return False
    return True


def _split_tensor_op(W: WeightModule, V: WeightModule, WV: WeightModule, w, lam) -> RationalMatrix:
    """B_{w,W}(lam - h2/2) (x) B_{w,V}(lam + h1/2) on W (x) V."""
    half = F(1, 2)
    bw = {nu2: bb_w(W, w, vsub(lam, vscale(half, nu2))) for nu2 in set(V.weights)}
    bv = {nu1: bb_w(V, w, vadd(lam, vscale(half, nu1))) for nu1 in set(W.weights)}
    entries: dict = {}
    dv = V.dim
    for a in range(W.dim):
        for b in range(dv):
            mw = bw[V.weights[b]]
            mv = bv[W.weights[a]]
            col = a * dv + b
            for r1 in range(W.dim):
                x = mw[r1, a]
                if not x:
                    continue
                for r2 in range(dv):
                    y = mv[r2, b]
                    if y:
                        entries[(r1 * dv + r2, col)] = x * y
    return RationalMatrix.from_entries(WV.dim, WV.dim, entries)


def verify_coproduct_factorization(W: WeightModule, V: WeightModule, w: WeylElement, ctx: EvalContext) -> CheckReport:
    from .modules import tensor

    WV = tensor([W, V])
    lam = ctx.lam
    params = {"module": WV.name, "w": list(w.word), "lam": list(lam)}
    lhs = bb_w(WV, w, lam)
    x = group_lift(WV, w)
    j_w = x.conj_inv(fusion_transformed(WV, w.act(lam)))
    j_inv = mat_inverse(fusion_transformed(WV, lam))
    rhs = j_w @ _split_tensor_op(W, V, WV, w, lam) @ j_inv
    return compare("coproduct_factorization", lhs, rhs, **params)


def verify_r_exchange(WV: WeightModule, w: WeylElement, ctx: EvalContext, lift: GroupLift | None = None) -> CheckReport:
    lam = ctx.lam
    params = {"module": WV.name, "w": list(w.word), "lam": list(lam)}
    b = bb_w(WV, w, lam)
    om = omega_matrices(WV, 0, 1)
    x = lift or group_lift(WV, w)
    l2 = WV.cartan(lam, factor=1)
    first = compare("r_exchange_casimir", om.full @ b, b @ om.full, **params)
    second = compare("r_exchange_minus", (x.conj_inv(om.minus) + l2) @ b, b @ (om.minus + l2), **params)
    blocks = require("r_exchange_blocks", WV.preserves_weights(b), "B does not preserve weights", **params)
    return combine("r_exchange", [first, second, blocks], **params)


def sl2_x(V: WeightModule) -> RationalMatrix:
    """The lift x = exp(-E) exp(F) exp(-E) of s_1 on an sl_2 module."""
    from .modules import simple_lift

    return simple_lift(V, 1)


