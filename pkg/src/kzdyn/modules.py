"""Finite-dimensional sl_N modules with exact action matrices.

Every module stores the full gl_N action ``e_{ij}`` (diagonal units included),
so Cartan elements and root vectors are read off directly.  Weights are
trace-zero rational vectors of length N, which is the Cartan space used by
``build_root_system("A", N - 1)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import factorial
from typing import Sequence

from .errors import ConfigError, EmptyWeightSpace, MixedRank
from .exact import RationalMatrix, mat_inverse
from .roots import RootSystem, WeylElement, build_root_system

F = Fraction


def _trace_zero(v: Sequence) -> tuple:
    n = len(v)
    mean = sum((F(x) for x in v), F(0)) / n
    return tuple(F(x) - mean for x in v)


def exp_nilpotent(x: RationalMatrix) -> RationalMatrix:
    """exp(x) for nilpotent x, as a finite sum."""
    n = x.nrows
    out = RationalMatrix.identity(n)
    term = RationalMatrix.identity(n)
    for k in range(1, n + 1):
        term = term @ x
        if term.is_zero():
            return out
        out = out + term.scale(F(1, factorial(k)))
    if not (term @ x).is_zero():
        raise ValueError("matrix is not nilpotent")
    return out


class WeightModule:
    """A gl_N module given by matrices for all ``e_{ij}``; tensor factors are tracked."""

    def __init__(
        self,
        N: int,
        gens: dict,
        labels: Sequence,
        factor_gens: list[dict] | None = None,
        factor_labels: list | None = None,
        descriptor: tuple = (),
        name: str = "",
    ):
        self.N = N
        self.gens = gens
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.factor_gens = factor_gens if factor_gens is not None else [gens]
        self.factor_labels = factor_labels if factor_labels is not None else [tuple((lab,) for lab in self.labels)]
        self.descriptor = tuple(descriptor)
        self.name = name or f"sl{N}-module"
        self.gl_weights = [tuple(gens[(k, k)][a, a] for k in range(N)) for a in range(self.dim)]
        self.weights = [_trace_zero(w) for w in self.gl_weights]
        self.factor_weights = [
            [_trace_zero(tuple(fg[(k, k)][a, a] for k in range(N))) for a in range(self.dim)] for fg in self.factor_gens
        ]

    @property
    def n_factors(self) -> int:
        return len(self.factor_gens)

    @property
    def root_system(self) -> RootSystem:
        return build_root_system("A", self.N - 1)

    def e(self, i: int, j: int) -> RationalMatrix:
        """Matrix of e_{ij} (0-based indices)."""
        return self.gens[(i, j)]

    def e_factor(self, k: int, i: int, j: int) -> RationalMatrix:
        """e_{ij} acting in tensor factor k only (0-based)."""
        return self.factor_gens[k][(i, j)]

    def root_vectors(self, alpha: Sequence) -> tuple[RationalMatrix, RationalMatrix, RationalMatrix]:
        """(H_alpha, E_alpha, F_alpha) for the root alpha = e_i - e_j."""
        i, j = root_indices(alpha)
        return self.e(i, i) - self.e(j, j), self.e(i, j), self.e(j, i)

    def cartan(self, lam: Sequence, factor: int | None = None) -> RationalMatrix:
        """The diagonal operator lam (or lam^{(factor)})."""
        ws = self.weights if factor is None else self.factor_weights[factor]
        return RationalMatrix.diag([sum((F(a) * b for a, b in zip(lam, w)), F(0)) for w in ws])

    def weight_blocks(self) -> dict:
        out: dict = {}
        for a, w in enumerate(self.weights):
            out.setdefault(w, []).append(a)
        return out

    def weight_space(self, nu: Sequence) -> list[int]:
        nu = tuple(F(x) for x in nu)
        idx = [a for a, w in enumerate(self.weights) if w == nu]
        if not idx:
            raise EmptyWeightSpace(f"weight {nu} does not occur")
        return idx

    def shifts_weight(self, m: RationalMatrix, alpha: Sequence) -> bool:
        """True when m maps V[nu] into V[nu + alpha] for all nu."""
        alpha = tuple(F(x) for x in alpha)
        return all(
            self.weights[r] == tuple(a + b for a, b in zip(self.weights[c], alpha)) for r, c, _ in m.nonzero()
        )

    def preserves_weights(self, m: RationalMatrix) -> bool:
        return self.shifts_weight(m, (F(0),) * self.N)

    def __repr__(self) -> str:
        return f"WeightModule({self.name}, dim={self.dim})"


def root_indices(alpha: Sequence) -> tuple[int, int]:
    """For alpha = e_i - e_j return (i, j), 0-based."""
    i = [k for k, x in enumerate(alpha) if x == 1]
    j = [k for k, x in enumerate(alpha) if x == -1]
    if len(i) != 1 or len(j) != 1 or sum(1 for x in alpha if x) != 2:
        raise ValueError(f"{alpha} is not a root of sl_N")
    return i[0], j[0]


def _unit(n: int, i: int, j: int) -> RationalMatrix:
    return RationalMatrix.from_entries(n, n, {(i, j): F(1)})


def vector_rep(N: int) -> WeightModule:
    if N < 2:
        raise ValueError("N must be at least 2")
    gens = {(i, j): _unit(N, i, j) for i in range(N) for j in range(N)}
    return WeightModule(N, gens, [(i,) for i in range(N)], descriptor=(1,), name=f"C{N}")


def exterior_power(V: WeightModule, k: int) -> WeightModule:
    if not 1 <= k <= V.dim:
        raise ValueError("wedge degree out of range")
    if k == 1:
        return V
    basis = list(combinations(range(V.dim), k))
    index = {b: n for n, b in enumerate(basis)}
    gens = {}
    for key, x in V.gens.items():
        entries: dict = {}
        cols: dict = {}
        for r, c, v in x.nonzero():
            cols.setdefault(c, []).append((r, v))
        for n, b in enumerate(basis):
            for p, a in enumerate(b):
                for r, v in cols.get(a, ()):
                    if r != a and r in b:
                        continue
                    new = list(b)
                    new[p] = r
                    order = sorted(range(k), key=lambda q: new[q])
                    sign = _perm_sign(order)
                    m = index[tuple(new[q] for q in order)]
                    entries[(m, n)] = entries.get((m, n), F(0)) + sign * v
        gens[key] = RationalMatrix.from_entries(len(basis), len(basis), entries)
    name = f"L{k}({V.name})"
    desc = (k,) if V.descriptor == (1,) else ()
    return WeightModule(V.N, gens, [tuple(b) for b in basis], descriptor=desc, name=name)


def _perm_sign(order: Sequence[int]) -> int:
    sign, seen = 1, [False] * len(order)
    for s in range(len(order)):
        if seen[s]:
            continue
        length, t = 0, s
        while not seen[t]:
            seen[t] = True
            t = order[t]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def tensor(modules: Sequence[WeightModule]) -> WeightModule:
    modules = list(modules)
    if not modules:
        raise ValueError("empty tensor product")
    if len(modules) == 1:
        return modules[0]
    N = modules[0].N
    if any(m.N != N for m in modules):
        raise MixedRank("all tensor factors must have the same N")
    idents = [RationalMatrix.identity(m.dim) for m in modules]

    def embed(k: int, x: RationalMatrix) -> RationalMatrix:
        out = None
        for p, ident in enumerate(idents):
            piece = x if p == k else ident
            out = piece if out is None else out.kron(piece)
        return out

    factor_gens = [{key: embed(k, x) for key, x in m.gens.items()} for k, m in enumerate(modules)]
    gens = {}
    for key in modules[0].gens:
        total = factor_gens[0][key]
        for fg in factor_gens[1:]:
            total = total + fg[key]
        gens[key] = total
    labels = list(product(*[m.labels for m in modules]))
    factor_labels = [tuple(lab[k] for lab in labels) for k in range(len(modules))]
    desc = tuple(d for m in modules for d in m.descriptor)
    name = "(x)".join(m.name for m in modules)
    return WeightModule(N, gens, labels, factor_gens, factor_labels, descriptor=desc, name=name)


def sl2_module(m: int) -> WeightModule:
    """L_m with basis v_0..v_m: Hv_k=(m-2k)v_k, Fv_k=(k+1)v_{k+1}, Ev_k=(m-k+1)v_{k-1}."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    n = m + 1
    gens = {
        (0, 0): RationalMatrix.diag([m - k for k in range(n)]),
        (1, 1): RationalMatrix.diag([k for k in range(n)]),
        (0, 1): RationalMatrix.from_entries(n, n, {(k - 1, k): F(m - k + 1) for k in range(1, n)}),
        (1, 0): RationalMatrix.from_entries(n, n, {(k + 1, k): F(k + 1) for k in range(n - 1)}),
    }
    return WeightModule(2, gens, [(k,) for k in range(n)], name=f"L{m}")


def sl2_hef(V: WeightModule) -> tuple[RationalMatrix, RationalMatrix, RationalMatrix]:
    return V.root_vectors((1, -1))


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ModuleDescriptor:
    """``N`` plus the wedge degree of each tensor factor; ``3:1,2`` is C^3 (x) L^2 C^3."""

    N: int
    degrees: tuple

    @classmethod
    def parse(cls, text: str, N: int | None = None) -> "ModuleDescriptor":
        text = text.strip()
        if ":" in text:
            head, text = text.split(":", 1)
            try:
                n2 = int(head)
            except ValueError as exc:
                raise ConfigError(f"bad module descriptor {text!r}") from exc
            if N is not None and N != n2:
                raise ConfigError(f"descriptor rank {n2} conflicts with N={N}")
            N = n2
        if N is None:
            raise ConfigError("module descriptor needs N")
        try:
            degrees = tuple(int(x) for x in text.replace("[", "").replace("]", "").split(",") if x.strip())
        except ValueError as exc:
            raise ConfigError(f"bad module descriptor {text!r}") from exc
        if not degrees or any(not 1 <= d < N for d in degrees):
            raise ConfigError(f"wedge degrees must lie in 1..{N - 1}")
        return cls(N, degrees)

    def __str__(self) -> str:
        return f"{self.N}:{','.join(str(d) for d in self.degrees)}"

    def build(self) -> WeightModule:
        return build_module(self.N, self.degrees)


@lru_cache(maxsize=None)
def build_module(N: int, degrees: tuple) -> WeightModule:
    V = vector_rep(N)
    return tensor([exterior_power(V, d) for d in degrees])


# ---------------------------------------------------------------------------
# Weyl group lifts
# ---------------------------------------------------------------------------


def simple_lift(V: WeightModule, i: int) -> RationalMatrix:
    """x_i = exp(-E_i) exp(F_i) exp(-E_i) for the simple root alpha_i (1-based)."""
    e = V.e(i - 1, i)
    f = V.e(i, i - 1)
    a = exp_nilpotent(-e)
    return a @ exp_nilpotent(f) @ a


@dataclass(frozen=True)
class GroupLift:
    w: WeylElement
    matrix: RationalMatrix
    inverse: RationalMatrix

    def conj(self, x: RationalMatrix) -> RationalMatrix:
        """w(X) = x_w X x_w^{-1}."""
        return self.matrix @ x @ self.inverse

    def conj_inv(self, x: RationalMatrix) -> RationalMatrix:
        """w^{-1}(X) = x_w^{-1} X x_w."""
        return self.inverse @ x @ self.matrix


def group_lift(V: WeightModule, w: WeylElement, word: Sequence[int] | None = None) -> GroupLift:
    """x_w as the product of simple lifts along a reduced word (left to right)."""
    word = w.word if word is None else tuple(word)
    m = RationalMatrix.identity(V.dim)
    for i in word:
        m = m @ simple_lift(V, i)
    return GroupLift(w, m, mat_inverse(m))


def weyl_action_weight_zero(V: WeightModule, w: WeylElement, lift: RationalMatrix | None = None) -> RationalMatrix:
    zero = (F(0),) * V.N
    idx = [a for a, wt in enumerate(V.weights) if wt == zero]
    if not idx:
        raise EmptyWeightSpace("V[0] is empty")
    m = group_lift(V, w).matrix if lift is None else lift
    return m.submatrix(idx, idx)


def torus_element(V: WeightModule, coords: Sequence) -> RationalMatrix:
    """The torus element acting on V[nu] by prod_k c_k^{gl weight_k}."""
    vals = []
    for w in V.gl_weights:
        v = F(1)
        for c, e in zip(coords, w):
            v *= F(c) ** int(e)
        vals.append(v)
    return RationalMatrix.diag(vals)
