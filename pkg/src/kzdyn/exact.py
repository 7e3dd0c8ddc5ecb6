"""Exact rational matrices and matrices of Puiseux monomials.

Scalars are :class:`fractions.Fraction`.  Matrices are immutable; every
operation returns a new object.  Products skip zero entries, which matters
because almost every operator built by this package is sparse in the weight
basis.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import FractionalExponent, NonClearingDenominator, SingularMatrix

Rational = Fraction
ExponentVector = tuple  # tuple of Fraction, one per variable

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


class RationalMatrix:
    """Dense matrix of Fractions."""

    __slots__ = ("rows", "nrows", "ncols", "_hash")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(tuple(as_rational(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")
        self.rows = rows
        self.nrows = len(rows)
        self.ncols = ncols
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, ncols: int) -> "RationalMatrix":
        # trusted constructor: rows already tuples of Fractions
        m = object.__new__(cls)
        m.rows = rows
        m.nrows = len(rows)
        m.ncols = ncols
        m._hash = None
        return m

    # constructors ---------------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int | None = None) -> "RationalMatrix":
        ncols = nrows if ncols is None else ncols
        row = (ZERO,) * ncols
        return cls._raw(tuple(row for _ in range(nrows)), ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.diag([ONE] * n)

    @classmethod
    def diag(cls, values: Sequence) -> "RationalMatrix":
        n = len(values)
        vals = [as_rational(v) for v in values]
        rows = []
        for i in range(n):
            r = [ZERO] * n
            r[i] = vals[i]
            rows.append(tuple(r))
        return cls._raw(tuple(rows), n)

    @classmethod
    def from_entries(cls, nrows: int, ncols: int, entries: dict) -> "RationalMatrix":
        rows = [[ZERO] * ncols for _ in range(nrows)]
        for (i, j), v in entries.items():
            rows[i][j] = rows[i][j] + as_rational(v)
        return cls._raw(tuple(tuple(r) for r in rows), ncols)

    # basic protocol -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.shape, self.rows))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"RationalMatrix({self.nrows}x{self.ncols}: [{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    def nonzero(self) -> Iterator[tuple[int, int, Fraction]]:
        for i, r in enumerate(self.rows):
            for j, v in enumerate(r):
                if v:
                    yield i, j, v

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def is_diagonal(self) -> bool:
        return all(v == 0 for i, j, v in self.nonzero() if i != j) and self.is_square()

    def diagonal(self) -> list[Fraction]:
        return [self.rows[i][i] for i in range(min(self.nrows, self.ncols))]

    def trace(self) -> Fraction:
        return sum(self.diagonal(), ZERO)

    # arithmetic -----------------------------------------------------------
    def _check_same(self, other: "RationalMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same(other)
        return RationalMatrix._raw(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __sub__(self, other: "RationalMatrix") -> "RationalMatrix":
        self._check_same(other)
        return RationalMatrix._raw(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)),
            self.ncols,
        )

    def __neg__(self) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(tuple(-a for a in r) for r in self.rows), self.ncols)

    def scale(self, c) -> "RationalMatrix":
        c = as_rational(c)
        if c == 0:
            return RationalMatrix.zeros(self.nrows, self.ncols)
        return RationalMatrix._raw(tuple(tuple(c * a for a in r) for r in self.rows), self.ncols)

    def __mul__(self, c) -> "RationalMatrix":
        if isinstance(c, RationalMatrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        n = other.ncols
        bnz = [[(j, v) for j, v in enumerate(r) if v] for r in other.rows]
        out = []
        for r in self.rows:
            acc = [ZERO] * n
            for k, a in enumerate(r):
                if a:
                    for j, v in bnz[k]:
                        acc[j] += a * v
            out.append(tuple(acc))
        return RationalMatrix._raw(tuple(out), n)

    def __pow__(self, k: int) -> "RationalMatrix":
        if k < 0:
            return mat_inverse(self) ** (-k)
        result = RationalMatrix.identity(self.nrows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def apply(self, vec: Sequence) -> list[Fraction]:
        return [sum((a * as_rational(x) for a, x in zip(r, vec) if a), ZERO) for r in self.rows]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(zip(*self.rows)) if self.rows else (), self.nrows)

    @property
    def T(self) -> "RationalMatrix":
        return self.transpose()

    def scale_columns(self, values: Sequence) -> "RationalMatrix":
        vals = [as_rational(v) for v in values]
        return RationalMatrix._raw(
            tuple(tuple(a * c if a else ZERO for a, c in zip(r, vals)) for r in self.rows), self.ncols
        )

    def scale_rows(self, values: Sequence) -> "RationalMatrix":
        return RationalMatrix._raw(
            tuple(tuple(as_rational(c) * a for a in r) for r, c in zip(self.rows, values)), self.ncols
        )

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix._raw(tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx), len(col_idx))

    def commutator(self, other: "RationalMatrix") -> "RationalMatrix":
        return self @ other - other @ self

    def kron(self, other: "RationalMatrix") -> "RationalMatrix":
        rows = []
        for r in self.rows:
            for s in other.rows:
                rows.append(tuple(a * b for a in r for b in s))
        return RationalMatrix._raw(tuple(rows), self.ncols * other.ncols)


def mat_det(m: RationalMatrix) -> Fraction:
    """Determinant by fraction-free Bareiss elimination.

    Rows are first cleared of denominators so the elimination runs over the
    integers; the exact divisions of the Bareiss recurrence never leave Z.
    """
    if not m.is_square():
        raise ValueError("determinant of a non-square matrix")
    n = m.nrows
    if n == 0:
        return ONE
    scale = ONE
    a = []
    for r in m.rows:
        den = 1
        for x in r:
            den = den * x.denominator // _gcd(den, x.denominator)
        scale /= den
        a.append([int(x * den) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for p in range(k + 1, n):
                if a[p][k] != 0:
                    a[k], a[p] = a[p], a[k]
                    sign = -sign
                    break
            else:
                return ZERO
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] * scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def mat_inverse(m: RationalMatrix) -> RationalMatrix:
    """Gauss-Jordan inverse over Q."""
    if not m.is_square():
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    a = [list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(m.rows)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise SingularMatrix("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = ONE / a[col][col]
        a[col] = [x * inv for x in a[col]]
        pivot_row = a[col]
        nz = [(j, x) for j, x in enumerate(pivot_row) if x]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                row = a[r]
                for j, x in nz:
                    row[j] -= f * x
    return RationalMatrix._raw(tuple(tuple(r[n:]) for r in a), n)


def mat_rank(m: RationalMatrix) -> int:
    a = [list(r) for r in m.rows]
    rank = 0
    for col in range(m.ncols):
        piv = next((r for r in range(rank, m.nrows) if a[r][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(rank + 1, m.nrows):
            if a[r][col] != 0:
                f = a[r][col] / a[rank][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def first_difference(a: RationalMatrix, b: RationalMatrix):
    """Return ``(i, j, a_ij, b_ij)`` for the first differing entry, or None."""
    if a.shape != b.shape:
        return ("shape", a.shape, b.shape)
    for i, (r, s) in enumerate(zip(a.rows, b.rows)):
        if r != s:
            for j, (x, y) in enumerate(zip(r, s)):
                if x != y:
                    return (i, j, x, y)
    return None


# ---------------------------------------------------------------------------
# Puiseux matrices: entries are finite sums  sum_q c_q * prod_k z_k^{q_k}
# ---------------------------------------------------------------------------


def _add_poly(acc: dict, poly: dict, factor=ONE) -> None:
    for e, c in poly.items():
        v = acc.get(e, ZERO) + factor * c
        if v:
            acc[e] = v
        else:
            acc.pop(e, None)


class PuiseuxMatrix:
    """Matrix whose entries are rational combinations of monomials with rational exponents."""

    __slots__ = ("nrows", "ncols", "nvars", "entries")

    def __init__(self, nrows: int, ncols: int, nvars: int, entries: dict | None = None):
        self.nrows = nrows
        self.ncols = ncols
        self.nvars = nvars
        clean = {}
        for (i, j), poly in (entries or {}).items():
            p = {}
            for e, c in poly.items():
                e = tuple(as_rational(x) for x in e)
                if len(e) != nvars:
                    raise ValueError("exponent vector has wrong length")
                c = as_rational(c)
                if c:
                    v = p.get(e, ZERO) + c
                    if v:
                        p[e] = v
                    else:
                        p.pop(e)
            if p:
                clean[(i, j)] = p
        self.entries = clean

    @classmethod
    def from_rational(cls, m: RationalMatrix, nvars: int) -> "PuiseuxMatrix":
        zero_e = (ZERO,) * nvars
        return cls(m.nrows, m.ncols, nvars, {(i, j): {zero_e: v} for i, j, v in m.nonzero()})

    @classmethod
    def diagonal_monomials(cls, exponents: Sequence[Sequence], coefficients: Sequence | None = None) -> "PuiseuxMatrix":
        n = len(exponents)
        nvars = len(exponents[0]) if n else 0
        coefficients = coefficients or [ONE] * n
        return cls(n, n, nvars, {(i, i): {tuple(e): c} for i, (e, c) in enumerate(zip(exponents, coefficients))})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PuiseuxMatrix):
            return NotImplemented
        return self.shape == other.shape and self.nvars == other.nvars and self.entries == other.entries

    def __repr__(self) -> str:
        return f"PuiseuxMatrix({self.nrows}x{self.ncols}, nvars={self.nvars}, nnz={len(self.entries)})"

    def is_normalized(self) -> bool:
        return all(p and all(c != 0 for c in p.values()) for p in self.entries.values())

    def __add__(self, other: "PuiseuxMatrix") -> "PuiseuxMatrix":
        self._check(other)
        out = {k: dict(v) for k, v in self.entries.items()}
        for k, poly in other.entries.items():
            acc = out.setdefault(k, {})
            _add_poly(acc, poly)
            if not acc:
                del out[k]
        return self._make(self.nrows, self.ncols, out)

    def __neg__(self) -> "PuiseuxMatrix":
        return self._make(self.nrows, self.ncols, {k: {e: -c for e, c in p.items()} for k, p in self.entries.items()})

    def __sub__(self, other: "PuiseuxMatrix") -> "PuiseuxMatrix":
        return self + (-other)

    def __matmul__(self, other: "PuiseuxMatrix") -> "PuiseuxMatrix":
        if self.ncols != other.nrows or self.nvars != other.nvars:
            raise ValueError("incompatible Puiseux matrices")
        by_row: dict[int, list] = {}
        for (k, j), p in other.entries.items():
            by_row.setdefault(k, []).append((j, p))
        out: dict = {}
        for (i, k), p in self.entries.items():
            for j, q in by_row.get(k, ()):
                acc = out.setdefault((i, j), {})
                for e1, c1 in p.items():
                    for e2, c2 in q.items():
                        e = tuple(a + b for a, b in zip(e1, e2))
                        v = acc.get(e, ZERO) + c1 * c2
                        if v:
                            acc[e] = v
                        else:
                            acc.pop(e, None)
        out = {k: v for k, v in out.items() if v}
        return self._make(self.nrows, other.ncols, out)

    def _check(self, other: "PuiseuxMatrix") -> None:
        if self.shape != other.shape or self.nvars != other.nvars:
            raise ValueError("incompatible Puiseux matrices")

    def _make(self, nrows: int, ncols: int, entries: dict) -> "PuiseuxMatrix":
        m = object.__new__(PuiseuxMatrix)
        m.nrows, m.ncols, m.nvars, m.entries = nrows, ncols, self.nvars, entries
        return m

    def exponents(self) -> set:
        return {e for p in self.entries.values() for e in p}

    def substitute_power(self, d: int) -> "PuiseuxMatrix":
        """Substitute ``z_k = t_k**d``: every exponent is multiplied by ``d``."""
        if d <= 0:
            raise ValueError("d must be a positive integer")
        out = {}
        for k, p in self.entries.items():
            q = {}
            for e, c in p.items():
                ne = tuple(x * d for x in e)
                if any(x.denominator != 1 for x in ne):
                    raise NonClearingDenominator(f"exponent {e} not cleared by d={d}")
                q[ne] = c
            out[k] = q
        return self._make(self.nrows, self.ncols, out)

    def z_derivative(self, k: int) -> "PuiseuxMatrix":
        """Apply the Euler operator ``z_k d/dz_k`` entrywise."""
        out = {}
        for key, p in self.entries.items():
            q = {e: c * e[k] for e, c in p.items() if e[k] != 0}
            if q:
                out[key] = q
        return self._make(self.nrows, self.ncols, out)

    def evaluate(self, z: Sequence) -> RationalMatrix:
        return puiseux_eval(self, z)


def puiseux_substitute_power(m: PuiseuxMatrix, d: int) -> PuiseuxMatrix:
    return m.substitute_power(d)


def puiseux_eval(m: PuiseuxMatrix, z: Sequence) -> RationalMatrix:
    """Evaluate a Puiseux matrix with integer exponents at a rational point."""
    z = [as_rational(x) for x in z]
    if len(z) != m.nvars:
        raise ValueError("wrong number of variables")
    if any(x == 0 for x in z):
        raise ValueError("evaluation point has a zero coordinate")
    entries = {}
    for key, p in m.entries.items():
        total = ZERO
        for e, c in p.items():
            term = c
            for zk, q in zip(z, e):
                if q.denominator != 1:
                    raise FractionalExponent(f"exponent {q} is not an integer")
                if q:
                    term *= zk ** int(q)
            total += term
        entries[key] = total
    return RationalMatrix.from_entries(m.nrows, m.ncols, entries)


def cofactor_det(m: RationalMatrix) -> Fraction:
    """Laplace expansion; exponential, for cross-checking small matrices only."""
    n = m.nrows
    if n == 0:
        return ONE
    if n == 1:
        return m[0, 0]
    total = ZERO
    for j in range(n):
        a = m[0, j]
        if a:
            minor = m.submatrix(range(1, n), [c for c in range(n) if c != j])
            total += (-1) ** j * a * cofactor_det(minor)
    return total


def block_indices(labels: Sequence) -> dict:
    """Group positions by label, preserving first-seen order."""
    out: dict = {}
    for i, lab in enumerate(labels):
        out.setdefault(lab, []).append(i)
    return out


def preserves_blocks(m: RationalMatrix, labels: Sequence) -> bool:
    return all(labels[i] == labels[j] for i, j, _ in m.nonzero())
