"""Exact scalar and dense matrix arithmetic over F_p and Q.

Elements of F_p are plain ints in ``range(p)``; elements of Q are
``fractions.Fraction``.  Matrices are immutable and hashable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

MAX_PRIME = 97


class SingularMatrix(ArithmeticError):
    pass


class FieldMismatch(ValueError):
    pass


class NotNilpotent:
    """Sentinel returned by :func:`nilpotency_index` for non-nilpotent input."""

    def __repr__(self) -> str:
        return "NotNilpotent"


NOT_NILPOTENT = NotNilpotent()


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


@dataclass(frozen=True)
class Field:
    """F_p for a prime ``p`` (2 <= p <= 97), or Q when ``p is None``."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None and not (_is_prime(self.p) and self.p <= MAX_PRIME):
            raise ValueError(f"unsupported modulus {self.p}: need a prime <= {MAX_PRIME}")

    @classmethod
    def parse(cls, text: str | int) -> "Field":
        """Accept ``'F5'``, ``'5'``, ``5`` or ``'Q'``."""
        if isinstance(text, int):
            return cls(text)
        s = text.strip()
        if s.upper() in ("Q", "QQ"):
            return cls(None)
        if s[:1] in ("F", "f"):
            s = s[1:]
        return cls(int(s))

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    def characteristic(self) -> int:
        return self.p or 0

    @property
    def zero(self):
        return 0 if self.p else Fraction(0)

    @property
    def one(self):
        return 1 if self.p else Fraction(1)

    def __call__(self, x):
        """Coerce an int, Fraction or ``'a/b'`` string into the field."""
        if isinstance(x, str):
            x = Fraction(x)
        if self.p is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        return int(x) % self.p

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return 1 / x
        return pow(x, -1, self.p)

    def elements(self) -> list:
        if self.p is None:
            raise ValueError("Q is infinite")
        return list(range(self.p))

    def vectors(self, n: int) -> Iterator[tuple]:
        """All of F_p^n in lexicographic order."""
        return itertools.product(range(self.p), repeat=n)

    def __str__(self) -> str:
        return f"F{self.p}" if self.p else "Q"

    def to_json(self) -> dict:
        return {"kind": "Fp", "p": self.p} if self.p else {"kind": "Q"}

    @classmethod
    def from_json(cls, d: dict) -> "Field":
        if d["kind"] == "Q":
            return cls(None)
        if d["kind"] != "Fp":
            raise ValueError(f"unknown field kind {d['kind']!r}")
        return cls(int(d["p"]))

    def scalar_to_json(self, x):
        if self.p:
            return int(x)
        x = Fraction(x)
        return f"{x.numerator}/{x.denominator}"

    def scalar_from_json(self, x):
        if self.p:
            if isinstance(x, str):
                return self(Fraction(x))
            if not 0 <= x < self.p:
                raise ValueError(f"F{self.p} entry {x} out of range")
            return int(x)
        return Fraction(x)


QQ = Field(None)


class Matrix:
    """Immutable dense square (or rectangular) matrix over a :class:`Field`."""

    __slots__ = ("field", "rows", "_hash")

    def __init__(self, field: Field, rows: Iterable[Iterable]):
        self.field = field
        self.rows = tuple(tuple(field(x) for x in r) for r in rows)
        self._hash = None
        if self.rows and any(len(r) != len(self.rows[0]) for r in self.rows):
            raise ValueError("ragged matrix")

    @classmethod
    def _raw(cls, field: Field, rows: tuple) -> "Matrix":
        m = cls.__new__(cls)
        m.field = field
        m.rows = rows
        m._hash = None
        return m

    @classmethod
    def zero(cls, field: Field, n: int, m: int | None = None) -> "Matrix":
        z = field.zero
        return cls._raw(field, tuple((z,) * (n if m is None else m) for _ in range(n)))

    @classmethod
    def identity(cls, field: Field, n: int) -> "Matrix":
        o, z = field.one, field.zero
        return cls._raw(field, tuple(tuple(o if i == j else z for j in range(n)) for i in range(n)))

    @classmethod
    def unit(cls, field: Field, n: int, i: int, j: int) -> "Matrix":
        """Matrix unit E_{i,j}, 1-based indices as in the usual notation."""
        rows = [[0] * n for _ in range(n)]
        rows[i - 1][j - 1] = 1
        return cls(field, rows)

    @classmethod
    def diag_blocks(cls, blocks: Sequence["Matrix"]) -> "Matrix":
        field = blocks[0].field
        n = sum(b.nrows for b in blocks)
        rows = [[field.zero] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i, r in enumerate(b.rows):
                rows[off + i][off:off + len(r)] = r
            off += b.nrows
        return cls._raw(field, tuple(tuple(r) for r in rows))

    @classmethod
    def jordan_block(cls, field: Field, m: int) -> "Matrix":
        return cls(field, [[1 if j in (i, i + 1) else 0 for j in range(m)] for i in range(m)])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    @property
    def dim(self) -> int:
        if self.nrows != self.ncols:
            raise ValueError("not square")
        return self.nrows

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other) -> bool:
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.field, self.rows))
        return self._hash

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {[list(r) for r in self.rows]})"

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        p = self.field.p
        if p:
            rows = tuple(tuple((a + b) % p for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        else:
            rows = tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        return Matrix._raw(self.field, rows)

    def __neg__(self) -> "Matrix":
        p = self.field.p
        return Matrix._raw(self.field, tuple(tuple((-a % p) if p else -a for a in r) for r in self.rows))

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, c) -> "Matrix":
        c = self.field(c)
        p = self.field.p
        if p:
            return Matrix._raw(self.field, tuple(tuple(c * a % p for a in r) for r in self.rows))
        return Matrix._raw(self.field, tuple(tuple(c * a for a in r) for r in self.rows))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        p = self.field.p
        cols = list(zip(*other.rows))
        if p:
            rows = tuple(tuple(sum(a * b for a, b in zip(r, c)) % p for c in cols) for r in self.rows)
        else:
            rows = tuple(tuple(sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols) for r in self.rows)
        return Matrix._raw(self.field, rows)

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return inverse(self) ** (-k)
        result = Matrix.identity(self.field, self.dim)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(self.field, tuple(zip(*self.rows)))

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def row_vector_times(self, v: Sequence) -> tuple:
        """v @ self for a row vector v."""
        p = self.field.p
        out = []
        for j in range(self.ncols):
            s = sum(v[i] * self.rows[i][j] for i in range(self.nrows))
            out.append(s % p if p else s)
        return tuple(out)

    def submatrix(self, r0: int, r1: int, c0: int, c1: int) -> "Matrix":
        return Matrix._raw(self.field, tuple(r[c0:c1] for r in self.rows[r0:r1]))

    def to_json(self) -> dict:
        f = self.field
        return {"field": f.to_json(), "dim": self.nrows,
                "rows": [[f.scalar_to_json(x) for x in r] for r in self.rows]}

    @classmethod
    def from_json(cls, d: dict) -> "Matrix":
        f = Field.from_json(d["field"])
        rows = [[f.scalar_from_json(x) for x in r] for r in d["rows"]]
        if len(rows) != d["dim"] or any(len(r) != d["dim"] for r in rows):
            raise ValueError("dim does not match rows")
        return cls(f, rows)


# -- elimination ------------------------------------------------------------

def row_echelon(field: Field, rows: Sequence[Sequence]) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; pivot chosen as the first nonzero entry in column order."""
    p = field.p
    work = [list(r) for r in rows]
    pivots: list[int] = []
    ncols = len(work[0]) if work else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = field.inv(work[r][c])
        work[r] = [(x * inv) % p for x in work[r]] if p else [x * inv for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                if p:
                    work[i] = [(a - f * b) % p for a, b in zip(work[i], work[r])]
                else:
                    work[i] = [a - f * b for a, b in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank_of_rows(field: Field, rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(row_echelon(field, rows)[1])


def mat_rank(m: Matrix) -> int:
    return rank_of_rows(m.field, m.rows)


def inverse(m: Matrix) -> Matrix:
    n = m.dim
    f = m.field
    aug = [list(r) + [f.one if i == j else f.zero for j in range(n)] for i, r in enumerate(m.rows)]
    red, piv = row_echelon(f, aug)
    if len(piv) < n or piv[n - 1] != n - 1:
        raise SingularMatrix("matrix is singular")
    return Matrix._raw(f, tuple(tuple(r[n:]) for r in red))


mat_inverse = inverse


def left_null_space(field: Field, rows: Sequence[Sequence], ncols: int | None = None) -> list[tuple]:
    """Basis of {w : w @ M = 0} where M has the given rows."""
    if not rows:
        return []
    cols = [list(c) for c in zip(*rows)]
    return null_space(field, cols, len(rows))


def null_space(field: Field, rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of {x : M @ x = 0} (x a column), M given by rows with ``ncols`` columns."""
    p = field.p
    if not rows:
        return [tuple(field.one if i == j else field.zero for j in range(ncols)) for i in range(ncols)]
    red, piv = row_echelon(field, rows)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for fc in free:
        x = [field.zero] * ncols
        x[fc] = field.one
        for r, pc in zip(red, piv):
            x[pc] = (-r[fc]) % p if p else -r[fc]
        basis.append(tuple(x))
    return basis


def solve_left(field: Field, rows: Sequence[Sequence], target: Sequence):
    """Return some w with w @ M = target, or None."""
    n = len(rows)
    cols = [list(c) + [t] for c, t in zip(zip(*rows), target)]
    red, piv = row_echelon(field, cols)
    if n in piv:
        return None
    w = [field.zero] * n
    for r, pc in zip(red, piv):
        w[pc] = r[n]
    return tuple(w)


# -- polynomials ------------------------------------------------------------

def poly_trim(coeffs: Sequence) -> tuple:
    c = list(coeffs)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def charpoly(m: Matrix) -> tuple:
    """det(tI - m), ascending coefficients (Berkowitz, division free)."""
    f = m.field
    p = f.p
    n = m.dim
    a = m.rows

    def red(x):
        return x % p if p else x

    # Berkowitz: build the Toeplitz products for successive leading principal submatrices.
    vec = [f.one]
    for k in range(n):
        # submatrix of size k+1: a[0..k][0..k]; split into A (k x k), R (row), C (col), akk
        akk = a[k][k]
        R = [a[k][j] for j in range(k)]
        C = [a[i][k] for i in range(k)]
        Ak = [list(a[i][:k]) for i in range(k)]
        # column of the Toeplitz matrix: 1, -akk, -R C, -R A C, ...
        col = [f.one, red(-akk)]
        cur = C[:]
        for _ in range(k):
            s = red(sum(r * c for r, c in zip(R, cur)))
            col.append(red(-s))
            cur = [red(sum(Ak[i][j] * cur[j] for j in range(k))) for i in range(k)]
        new = []
        for i in range(k + 2):
            s = sum(col[i - j] * vec[j] for j in range(len(vec)) if 0 <= i - j < len(col))
            new.append(red(s))
        vec = new
    # vec is descending: t^n + ...
    return tuple(reversed(vec))


def poly_eval_matrix(coeffs: Sequence, m: Matrix) -> Matrix:
    """Horner evaluation of a polynomial (ascending coefficients) at a matrix."""
    n = m.dim
    result = Matrix.zero(m.field, n)
    I = Matrix.identity(m.field, n)
    for c in reversed(coeffs):
        result = result @ m + I.scale(c)
    return result


def min_poly_degree(m: Matrix) -> int:
    """Degree of the minimal polynomial: first k with I, m, ..., m^k dependent."""
    n = m.dim
    f = m.field
    powers = []
    cur = Matrix.identity(f, n)
    for k in range(n + 1):
        powers.append([x for r in cur.rows for x in r])
        if rank_of_rows(f, powers) < len(powers):
            return k
        cur = cur @ m
    return n  # unreachable by Cayley-Hamilton


def nilpotency_index(m: Matrix):
    """Least k >= 1 with m^k = 0, or ``NOT_NILPOTENT``."""
    n = m.dim
    cur = m
    for k in range(1, n + 1):
        if cur.is_zero():
            return k
        cur = cur @ m
    return NOT_NILPOTENT


def is_nilpotent(m: Matrix) -> bool:
    return nilpotency_index(m) is not NOT_NILPOTENT


def sqrt_mod(a: int, p: int) -> int | None:
    """Least square root of a in F_p, or None."""
    a %= p
    for x in range(p):
        if x * x % p == a:
            return x
    return None


def nth_root_mod(a: int, k: int, p: int) -> int | None:
    a %= p
    for x in range(p):
        if pow(x, k, p) == a:
            return x
    return None
