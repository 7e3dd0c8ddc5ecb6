"""Root data, finite Weyl groups and the extended affine Weyl group.

Vectors live in an ambient rational space.  The invariant form is
``(x, y) = scale * dot(x, y)`` with ``scale`` chosen so that long roots have
squared length 2.  Type A_{N-1} uses the trace-zero hyperplane of Q^N, which
is exactly the Cartan subalgebra of sl_N with ``(e_ii, e_jj) = delta_ij``.

Words are stored left to right: ``word = (a, b, c)`` means ``s_a s_b s_c``.
The rightmost letter acts first, so the inversion sequence starts with
``alpha_{word[-1]}``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Sequence

from .errors import InvalidCartanType, NotInOStar, NotMinuscule
from .exact import RationalMatrix, mat_inverse

Vector = tuple  # tuple of Fraction

F = Fraction
HALF = F(1, 2)


def vec(*xs) -> Vector:
    return tuple(F(x) for x in xs)


def vadd(x: Vector, y: Vector) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vsub(x: Vector, y: Vector) -> Vector:
    return tuple(a - b for a, b in zip(x, y))


def vscale(c, x: Vector) -> Vector:
    c = F(c)
    return tuple(c * a for a in x)


def vneg(x: Vector) -> Vector:
    return tuple(-a for a in x)


def _unit(n: int, i: int, c=1) -> list:
    v = [F(0)] * n
    v[i] = F(c)
    return v


def _simple_roots(letter: str, r: int) -> tuple[list[Vector], Fraction]:
    if letter == "A":
        if r < 1:
            raise InvalidCartanType(f"A{r}")
        n = r + 1
        return [tuple(F(x) for x in vsub(_unit(n, i), _unit(n, i + 1))) for i in range(r)], F(1)
    if letter == "B":
        if r < 2:
            raise InvalidCartanType(f"B{r}")
        roots = [tuple(vsub(_unit(r, i), _unit(r, i + 1))) for i in range(r - 1)]
        roots.append(tuple(_unit(r, r - 1)))
        return roots, F(1)
    if letter == "C":
        if r < 2:
            raise InvalidCartanType(f"C{r}")
        roots = [tuple(vsub(_unit(r, i), _unit(r, i + 1))) for i in range(r - 1)]
        roots.append(tuple(_unit(r, r - 1, 2)))
        return roots, HALF
    if letter == "D":
        if r < 4:
            raise InvalidCartanType(f"D{r}")
        roots = [tuple(vsub(_unit(r, i), _unit(r, i + 1))) for i in range(r - 1)]
        roots.append(tuple(vadd(_unit(r, r - 2), _unit(r, r - 1))))
        return roots, F(1)
    if letter == "E":
        if r not in (6, 7, 8):
            raise InvalidCartanType(f"E{r}")
        e = [_unit(8, i) for i in range(8)]
        a1 = tuple(HALF * (e[0][k] + e[7][k] - sum(e[m][k] for m in range(1, 7))) for k in range(8))
        a2 = tuple(vadd(e[0], e[1]))
        rest = [tuple(vsub(e[m], e[m - 1])) for m in range(1, 7)]
        return ([a1, a2] + rest)[:r], F(1)
    if letter == "F":
        if r != 4:
            raise InvalidCartanType(f"F{r}")
        e = [_unit(4, i) for i in range(4)]
        return [
            tuple(vsub(e[1], e[2])),
            tuple(vsub(e[2], e[3])),
            tuple(e[3]),
            tuple(HALF * (e[0][k] - e[1][k] - e[2][k] - e[3][k]) for k in range(4)),
        ], F(1)
    if letter == "G":
        if r != 2:
            raise InvalidCartanType(f"G{r}")
        return [vec(1, -1, 0), vec(-2, 1, 1)], F(1, 3)
    raise InvalidCartanType(f"unknown type letter {letter!r}")


def parse_cartan_type(text: str, rank: int | None = None) -> tuple[str, int]:
    text = text.strip().upper()
    if not text or text[0] not in "ABCDEFG":
        raise InvalidCartanType(f"bad Cartan type {text!r}")
    letter, digits = text[0], text[1:].lstrip("_")
    if digits:
        if not digits.isdigit():
            raise InvalidCartanType(f"bad Cartan type {text!r}")
        r = int(digits)
        if rank is not None and rank != r:
            raise InvalidCartanType(f"type {text} conflicts with rank {rank}")
        return letter, r
    if rank is None:
        raise InvalidCartanType(f"rank missing for type {letter}")
    return letter, int(rank)


class RootSystem:
    """Cartan data of a simple Lie algebra in an explicit ambient realization."""

    def __init__(self, letter: str, rank: int):
        self.letter = letter
        self.rank = rank
        self.simple_roots, self.form_scale = _simple_roots(letter, rank)
        self.dim = len(self.simple_roots[0])
        self.name = f"{letter}{rank}"
        gram = RationalMatrix([[self.pair(a, b) for b in self.simple_roots] for a in self.simple_roots])
        ginv = mat_inverse(gram)
        r = rank
        self.dual_fundamental_weights = [
            tuple(sum((ginv[i, j] * self.simple_roots[j][k] for j in range(r)), F(0)) for k in range(self.dim))
            for i in range(r)
        ]
        self.fundamental_weights = [
            vscale(self.pair(a, a) / 2, w) for a, w in zip(self.simple_roots, self.dual_fundamental_weights)
        ]
        self.rho = tuple(sum(col, F(0)) for col in zip(*self.fundamental_weights))
        self.roots = self._generate_roots()
        pos = [a for a in self.roots if self.is_positive(a)]
        pos.sort(key=lambda a: (self.height(a), tuple(-c for c in self.coefficients(a))))
        self.positive_roots = pos
        self.theta = pos[-1]

    # form and coordinates -------------------------------------------------
    def pair(self, x: Vector, y: Vector) -> Fraction:
        return self.form_scale * sum((a * b for a, b in zip(x, y)), F(0))

    def coroot(self, a: Vector) -> Vector:
        return vscale(2 / self.pair(a, a), a)

    def coefficients(self, x: Vector) -> tuple:
        """Coordinates of ``x`` in the basis of simple roots."""
        return tuple(self.pair(x, w) for w in self.dual_fundamental_weights)

    def height(self, x: Vector) -> Fraction:
        return sum(self.coefficients(x), F(0))

    def is_positive(self, a: Vector) -> bool:
        cs = self.coefficients(a)
        return all(c >= 0 for c in cs) and any(c > 0 for c in cs)

    def is_root(self, a: Vector) -> bool:
        return tuple(a) in self._root_set

    def in_root_lattice_plus(self, x: Vector) -> bool:
        cs = self.coefficients(x)
        return all(c.denominator == 1 and c >= 0 for c in cs)

    def from_coefficients(self, cs: Sequence) -> Vector:
        out = [F(0)] * self.dim
        for c, a in zip(cs, self.simple_roots):
            for k in range(self.dim):
                out[k] += F(c) * a[k]
        return tuple(out)

    def reflect(self, a: Vector, x: Vector) -> Vector:
        c = self.pair(x, self.coroot(a))
        return vsub(x, vscale(c, a))

    def _generate_roots(self) -> list[Vector]:
        seen = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            nxt = []
            for x in frontier:
                for a in self.simple_roots:
                    y = self.reflect(a, x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        self._root_set = frozenset(seen)
        return sorted(seen, key=lambda a: (-self.height(a), a))

    @cached_property
    def negative_roots(self) -> list[Vector]:
        return [vneg(a) for a in self.positive_roots]

    # index sets -----------------------------------------------------------
    @cached_property
    def o_star(self) -> list[int]:
        """1-based indices i with omega_i^vee minuscule (equivalently theta has coefficient 1)."""
        cs = self.coefficients(self.theta)
        return [i + 1 for i, c in enumerate(cs) if c == 1]

    @cached_property
    def o_set(self) -> list[int]:
        return [0] + self.o_star

    def dual_fundamental(self, i: int) -> Vector:
        return self.dual_fundamental_weights[i - 1]

    def fundamental(self, i: int) -> Vector:
        return self.fundamental_weights[i - 1]

    def simple(self, i: int) -> Vector:
        return self.simple_roots[i - 1]

    def zero(self) -> Vector:
        return (F(0),) * self.dim

    def coxeter_m(self, i: int, j: int) -> int:
        if i == j:
            return 1
        a, b = self.simple(i), self.simple(j)
        prod = self.pair(a, self.coroot(b)) * self.pair(b, self.coroot(a))
        return {0: 2, 1: 3, 2: 4, 3: 6}[int(prod)]

    # Weyl group -----------------------------------------------------------
    @cached_property
    def _reflection_matrices(self) -> list[RationalMatrix]:
        mats = []
        n = self.dim
        for a in self.simple_roots:
            d = sum(x * x for x in a)
            mats.append(
                RationalMatrix(
                    [[(1 if r == c else 0) - 2 * a[r] * a[c] / d for c in range(n)] for r in range(n)]
                )
            )
        return mats

    def identity(self) -> "WeylElement":
        return WeylElement(self, RationalMatrix.identity(self.dim))

    def s(self, i: int) -> "WeylElement":
        return WeylElement(self, self._reflection_matrices[i - 1])

    def from_word(self, word: Iterable[int]) -> "WeylElement":
        m = RationalMatrix.identity(self.dim)
        for i in word:
            m = m @ self._reflection_matrices[i - 1]
        return WeylElement(self, m)

    def longest_element(self, indices: Iterable[int] | None = None) -> "WeylElement":
        """Longest element of the parabolic subgroup generated by ``indices`` (all by default)."""
        idx = sorted(indices) if indices is not None else list(range(1, self.rank + 1))
        w = self.identity()
        while True:
            for i in idx:
                if self.is_positive(w.act(self.simple(i))):
                    w = w * self.s(i)
                    break
            else:
                return w

    @cached_property
    def w0(self) -> "WeylElement":
        return self.longest_element()

    def elements(self) -> list["WeylElement"]:
        seen = {self.identity().matrix: self.identity()}
        frontier = [self.identity()]
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(1, self.rank + 1):
                    v = w * self.s(i)
                    if v.matrix not in seen:
                        seen[v.matrix] = v
                        nxt.append(v)
            frontier = nxt
        return sorted(seen.values(), key=lambda w: (w.length, w.word))

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSystem) and (self.letter, self.rank) == (other.letter, other.rank)

    def __hash__(self):
        return hash((self.letter, self.rank))


_CACHE: dict = {}


def build_root_system(letter: str, rank: int | None = None) -> RootSystem:
    letter, rank = parse_cartan_type(letter, rank)
    key = (letter, rank)
    if key not in _CACHE:
        _CACHE[key] = RootSystem(letter, rank)
    return _CACHE[key]


def is_minuscule(rs: RootSystem, i: int) -> bool:
    if not 1 <= i <= rs.rank:
        raise ValueError(f"index {i} out of range")
    w = rs.dual_fundamental(i)
    return all(rs.pair(w, a) in (0, 1) for a in rs.positive_roots)


class WeylElement:
    """Element of the finite Weyl group, stored as its action matrix."""

    __slots__ = ("rs", "matrix", "__dict__")

    def __init__(self, rs: RootSystem, matrix: RationalMatrix):
        self.rs = rs
        self.matrix = matrix

    def act(self, x: Vector) -> Vector:
        return tuple(self.matrix.apply(x))

    __call__ = act

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(self.rs, self.matrix @ other.matrix)

    def inverse(self) -> "WeylElement":
        # reflections are orthogonal for the standard dot product
        return WeylElement(self.rs, self.matrix.transpose())

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)

    def is_identity(self) -> bool:
        return self.matrix == RationalMatrix.identity(self.rs.dim)

    def reduced_word(self, tie_break: str = "min") -> tuple[int, ...]:
        """Greedy right-descent word; ``tie_break`` picks the smallest or largest descent."""
        order = range(1, self.rs.rank + 1)
        if tie_break == "max":
            order = reversed(order)
        order = list(order)
        w = self
        found = []
        while True:
            for i in order:
                if not self.rs.is_positive(w.act(self.rs.simple(i))):
                    found.append(i)
                    w = w * self.rs.s(i)
                    break
            else:
                break
        return tuple(reversed(found))

    @cached_property
    def word(self) -> tuple[int, ...]:
        return self.reduced_word()

    @cached_property
    def length(self) -> int:
        return sum(1 for a in self.rs.positive_roots if not self.rs.is_positive(self.act(a)))

    def inversion_sequence(self, word: Sequence[int] | None = None) -> list[Vector]:
        return inversion_sequence(self.rs, self.word if word is None else word)

    def __repr__(self) -> str:
        return f"WeylElement({self.rs.name}, word={self.word})"


def inversion_sequence(rs: RootSystem, word: Sequence[int]) -> list[Vector]:
    """alpha^1 = alpha_{i_1}, alpha^j = s_{i_1}...s_{i_{j-1}}(alpha_{i_j}) for w = s_{i_k}...s_{i_1}."""
    right_to_left = list(reversed(word))
    out = []
    prefix = rs.identity()
    for i in right_to_left:
        out.append(prefix.act(rs.simple(i)))
        prefix = prefix * rs.s(i)
    return out


def w_bracket(rs: RootSystem, i: int) -> WeylElement:
    """w_[i] = w_0 w_0^i for a minuscule dual fundamental weight."""
    if not is_minuscule(rs, i):
        raise NotMinuscule(f"omega_{i}^vee is not minuscule in {rs.name}")
    w0i = rs.longest_element([j for j in range(1, rs.rank + 1) if j != i])
    return rs.w0 * w0i


def dot_action(rs: RootSystem, w: WeylElement, lam: Vector) -> Vector:
    return vsub(w.act(vadd(lam, rs.rho)), rs.rho)


# ---------------------------------------------------------------------------
# affine roots and the extended affine Weyl group
# ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class AffineRoot:
    alpha: Vector
    level: int

    def is_positive(self, rs: RootSystem) -> bool:
        return self.level > 0 or (self.level == 0 and rs.is_positive(self.alpha))

    def label(self, rs: RootSystem) -> str:
        cs = rs.coefficients(self.alpha)
        return f"[{','.join(str(c) for c in cs)};{self.level}]"


def affine_simple_root(rs: RootSystem, j: int) -> AffineRoot:
    if j == 0:
        return AffineRoot(vneg(rs.theta), 1)
    return AffineRoot(rs.simple(j), 0)


@dataclass(frozen=True)
class AffineWeylElement:
    """(w, omega) acting by [z, xi] -> [w z, xi - (z, omega)], i.e. the product w t_omega."""

    rs: RootSystem = field(compare=False, repr=False)
    w: WeylElement
    omega: Vector

    def act(self, a: AffineRoot) -> AffineRoot:
        shift = self.rs.pair(a.alpha, self.omega)
        assert shift.denominator == 1
        return AffineRoot(self.w.act(a.alpha), a.level - int(shift))

    __call__ = act

    def __mul__(self, other: "AffineWeylElement") -> "AffineWeylElement":
        om = vadd(other.omega, other.w.inverse().act(self.omega))
        return AffineWeylElement(self.rs, self.w * other.w, om)

    def inverse(self) -> "AffineWeylElement":
        return AffineWeylElement(self.rs, self.w.inverse(), vneg(self.w.act(self.omega)))

    def __hash__(self):
        return hash((self.w.matrix, self.omega))

    def __eq__(self, other) -> bool:
        return isinstance(other, AffineWeylElement) and self.w == other.w and self.omega == other.omega

    def inversions(self) -> list[AffineRoot]:
        """Positive affine roots mapped to negative ones."""
        rs = self.rs
        out = []
        for a in rs.roots:
            j0 = 0 if rs.is_positive(a) else 1
            shift = rs.pair(a, self.omega)
            k = int(shift)
            for j in range(j0, k):
                out.append(AffineRoot(a, j))
            if k >= j0 and not rs.is_positive(self.w.act(a)):
                out.append(AffineRoot(a, k))
        return out

    @property
    def length(self) -> int:
        return len(self.inversions())

    def reduced_word(self, tie_break: str = "min") -> tuple[int, tuple[int, ...]]:
        """Return ``(i, word)`` with ``self = pi_i s_{word[0]} s_{word[1]} ...``."""
        rs = self.rs
        order = list(range(0, rs.rank + 1))
        if tie_break == "max":
            order.reverse()
        g = self
        found = []
        while True:
            for j in order:
                if not g.act(affine_simple_root(rs, j)).is_positive(rs):
                    found.append(j)
                    g = g * affine_s(rs, j)
                    break
            else:
                break
        for i in rs.o_set:
            if pi_element(rs, i) == g:
                return i, tuple(reversed(found))
        raise AssertionError("length-zero element not in Pi")

    def __repr__(self) -> str:
        return f"AffineWeylElement({self.rs.name}, w={self.w.word}, omega={self.rs.coefficients(self.omega)})"


def affine_from_finite(w: WeylElement) -> AffineWeylElement:
    return AffineWeylElement(w.rs, w, w.rs.zero())


def translation(rs: RootSystem, omega: Vector) -> AffineWeylElement:
    return AffineWeylElement(rs, rs.identity(), tuple(F(x) for x in omega))


def affine_s(rs: RootSystem, j: int) -> AffineWeylElement:
    if j == 0:
        th = rs.theta
        return AffineWeylElement(rs, reflection_element(rs, th), vneg(rs.coroot(th)))
    return affine_from_finite(rs.s(j))


def reflection_element(rs: RootSystem, a: Vector) -> WeylElement:
    n = rs.dim
    d = sum(x * x for x in a)
    m = RationalMatrix([[(1 if r == c else 0) - 2 * a[r] * a[c] / d for c in range(n)] for r in range(n)])
    return WeylElement(rs, m)


def pi_element(rs: RootSystem, i: int) -> AffineWeylElement:
    """pi_0 = 1 and pi_i = t_{omega_i^vee} w_[i]^{-1} for i in O*."""
    if i == 0:
        return affine_from_finite(rs.identity())
    if i not in rs.o_star:
        raise NotInOStar(f"{i} is not in O* for {rs.name}")
    return translation(rs, rs.dual_fundamental(i)) * affine_from_finite(w_bracket(rs, i).inverse())


def affine_from_word(rs: RootSystem, pi_index: int, word: Sequence[int]) -> AffineWeylElement:
    g = pi_element(rs, pi_index)
    for j in word:
        g = g * affine_s(rs, j)
    return g


def reduced_word(el: AffineWeylElement, tie_break: str = "min") -> tuple[int, tuple[int, ...]]:
    return el.reduced_word(tie_break)


def affine_inversion_sequence(rs: RootSystem, word: Sequence[int]) -> list[AffineRoot]:
    """tilde-alpha^1 = alpha_{j_1}, tilde-alpha^2 = s_{j_1}(alpha_{j_2}), ... for word read right to left."""
    out = []
    prefix = affine_from_finite(rs.identity())
    for j in reversed(word):
        out.append(prefix.act(affine_simple_root(rs, j)))
        prefix = prefix * affine_s(rs, j)
    return out


def a_tilde_set(el: AffineWeylElement, tie_break: str = "min") -> tuple[list[AffineRoot], Counter]:
    _, word = el.reduced_word(tie_break)
    seq = affine_inversion_sequence(el.rs, word)
    return seq, Counter(seq)


def useful_set(rs: RootSystem, i: int) -> Counter:
    """{[alpha, j] : alpha > 0, (omega_i^vee, alpha) > j >= 0}."""
    w = rs.dual_fundamental(i)
    out = Counter()
    for a in rs.positive_roots:
        for j in range(int(rs.pair(w, a))):
            out[AffineRoot(a, j)] += 1
    return out


def pi_action_on_simple(rs: RootSystem, i: int) -> tuple[int, ...]:
    """k(l) with pi_i(alpha_l) = alpha_{k(l)}, l = 0..r."""
    p = pi_element(rs, i)
    simples = {affine_simple_root(rs, j): j for j in range(rs.rank + 1)}
    out = []
    for l in range(rs.rank + 1):
        img = p.act(affine_simple_root(rs, l))
        if img not in simples:
            raise AssertionError(f"pi_{i} does not permute the affine simple roots")
        out.append(simples[img])
    return tuple(out)


def sequence_realizable(rs: RootSystem, seq: Sequence[AffineRoot]) -> tuple[int, ...] | None:
    """If ``seq`` is the inversion sequence of some reduced word, return that word (left to right)."""
    simples = {affine_simple_root(rs, j): j for j in range(rs.rank + 1)}
    prefix = affine_from_finite(rs.identity())
    js = []
    for a in seq:
        b = prefix.inverse().act(a)
        if b not in simples:
            return None
        js.append(simples[b])
        prefix = prefix * affine_s(rs, simples[b])
    return tuple(reversed(js))


def solve_level(rs: RootSystem, alpha: Vector, level: int, alternative: int = 0) -> Vector:
    """A dual weight omega with (omega, alpha) = -level.

    Uses an extended gcd over the simple-root coefficients of ``alpha``.
    ``alternative`` adds that multiple of an element orthogonal to ``alpha``
    (when the rank allows one), giving a second valid choice.
    """
    cs = [int(c) for c in rs.coefficients(alpha)]
    support = [k for k, c in enumerate(cs) if c]
    g, coeffs = _ext_gcd([cs[k] for k in support])
    if (-level) % g:
        from .errors import NoIntegerSolution

        raise NoIntegerSolution(f"no dual weight with pairing {-level}")
    mult = -level // g
    x = [0] * rs.rank
    for k, c in zip(support, coeffs):
        x[k] = c * mult
    if alternative:
        if len(support) >= 2:
            a, b = support[0], support[1]
            x[a] += alternative * cs[b]
            x[b] -= alternative * cs[a]
        else:
            others = [k for k in range(rs.rank) if k not in support]
            if others:
                x[others[0]] += alternative
    omega = rs.zero()
    for k, c in enumerate(x):
        if c:
            omega = vadd(omega, vscale(c, rs.dual_fundamental_weights[k]))
    assert rs.pair(omega, alpha) == -level
    return omega


def _ext_gcd(values: Sequence[int]) -> tuple[int, list[int]]:
    g, coeffs = values[0], [1]
    for v in values[1:]:
        a, b = g, v
        x0, x1, y0, y1 = 1, 0, 0, 1
        while b:
            q = a // b
            a, b = b, a - q * b
            x0, x1 = x1, x0 - q * x1
            y0, y1 = y1, y0 - q * y1
        coeffs = [c * x0 for c in coeffs] + [y0]
        g = a
    if g < 0:
        g, coeffs = -g, [-c for c in coeffs]
    assert g == gcd(*values) if len(values) > 1 else abs(values[0])
    return g, coeffs
