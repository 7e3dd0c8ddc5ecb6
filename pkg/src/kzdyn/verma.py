"""Truncated sl_2 Verma modules and the intertwiner oracle for A_{s_1, L_m}.

Weights here are integers: the H-eigenvalue of a vector.  ``F^s v_mu`` is
stored by its exponent ``s``; an element of ``M_mu (x) L_m`` is a dict
``{(s, j): coeff}`` meaning ``sum coeff * F^s v_mu (x) v_j``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .errors import NonGenericWeight, TruncationTooShallow
from .exact import RationalMatrix
from .modules import simple_lift, sl2_hef, sl2_module
from .operators import p_series
from .reports import CheckReport, combine, compare, require

F = Fraction


@dataclass(frozen=True)
class TruncatedVerma:
    """Span of F^s v_weight for 0 <= s <= depth."""

    weight: int
    depth: int

    def f(self, s: int) -> int:
        if s + 1 > self.depth:
            raise TruncationTooShallow(f"F would leave the truncation at depth {self.depth}")
        return s + 1

    def e_coeff(self, s: int) -> int:
        """E F^s v = s (weight - s + 1) F^{s-1} v."""
        return s * (self.weight - s + 1)

    def h(self, s: int) -> int:
        return self.weight - 2 * s


def _delta_f(M: TruncatedVerma, m: int, vec: dict) -> dict:
    out: dict = {}
    for (s, j), c in vec.items():
        key = (M.f(s), j)
        out[key] = out.get(key, 0) + c
        if j < m:
            key = (s, j + 1)
            out[key] = out.get(key, 0) + c * (j + 1)
    return {k: v for k, v in out.items() if v}


def _delta_e(M: TruncatedVerma, m: int, vec: dict) -> dict:
    out: dict = {}
    for (s, j), c in vec.items():
        if s:
            key = (s - 1, j)
            out[key] = out.get(key, 0) + c * M.e_coeff(s)
        if j:
            key = (s, j - 1)
            out[key] = out.get(key, 0) + c * (m - j + 1)
    return {k: v for k, v in out.items() if v}


def intertwiner_top(m: int, k: int, lam: int) -> dict:
    """Phi(v_lam) for the intertwiner M_lam -> M_{lam - nu} (x) L_m with expectation v_k."""
    mu = lam - (m - 2 * k)
    vec = {(0, k): F(1)}
    a = F(1)
    for s in range(k):
        if mu - s == 0:
            raise NonGenericWeight("intertwiner is not unique at this weight")
        a = -a * (m - k + s + 1) / ((s + 1) * (mu - s))
        vec[(s + 1, k - s - 1)] = a
    return vec


def condition_two(m: int, lam: int) -> bool:
    """w.lam - w'.(lam - nu) is never a weight of L_m for w != w'."""
    weights = set(range(-m, m + 1, 2))
    dot = {"1": lambda x: x, "s": lambda x: -x - 2}
    for nu in weights:
        for w, w2 in (("1", "s"), ("s", "1")):
            if dot[w](lam) - dot[w2](lam - nu) in weights:
                return False
    return True


def extract_a_matrix(m: int, lam: int, depth: int | None = None) -> tuple[RationalMatrix, list[str]]:
    """A_{s_1,L_m}(lam) read off from the images of the singular vector; also returns problems found."""
    if lam < m:
        raise NonGenericWeight("need lam >= m")
    if not condition_two(m, lam):
        raise NonGenericWeight(f"condition II fails for m={m}, lam={lam}")
    problems = []
    entries = {}
    for k in range(m + 1):
        mu = lam - (m - 2 * k)
        M = TruncatedVerma(mu, depth if depth is not None else lam + 1 + m + 2)
        top = intertwiner_top(m, k, lam)
        if _delta_e(M, m, top):
            problems.append(f"Phi(v_lam) is not singular for k={k}")
        vec = top
        for _ in range(lam + 1):
            vec = _delta_f(M, m, vec)
        vec = {key: c / factorial(lam + 1) for key, c in vec.items()}
        if _delta_e(M, m, vec):
            problems.append(f"image of the singular vector is not singular for k={k}")
        lead = mu + 1
        for (s, j), c in vec.items():
            if s < lead:
                problems.append(f"term F^{s} v (x) v_{j} survives below the singular vector (k={k})")
            elif s == lead and j != m - k:
                problems.append(f"unexpected leading component v_{j} for k={k}")
        coeff = vec.get((lead, m - k), F(0)) * factorial(lead)
        if coeff:
            entries[(m - k, k)] = coeff
    return RationalMatrix.from_entries(m + 1, m + 1, entries), problems


def sl2_verma_oracle(m: int, lam: int, depth: int | None = None) -> CheckReport:
    params = {"m": m, "lam": lam}
    A, problems = extract_a_matrix(m, lam, depth)
    L = sl2_module(m)
    H, E, F_ = sl2_hef(L)
    expected = simple_lift(L, 1) @ p_series(lam, H, E, F_)
    return combine(
        "sl2_verma_oracle",
        [compare("A_equals_xp", A, expected, **params), require("singular_structure", not problems, "; ".join(problems), **params)],
        **params,
    )
