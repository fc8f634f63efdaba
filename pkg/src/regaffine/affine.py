"""Regular subgroups of AGL_n(F) with linear delta.

AGL_n(F) is realised as (n+1)x(n+1) matrices whose first column is
(1, 0, ..., 0)^T.  A regular subgroup with linear delta is stored as the
list D_1..D_n with D_i = delta(v_i); its elements are

    mu(v) = [[1, v], [0, I_n + sum_i v_i D_i]].

Vectors are row vectors throughout and act on the right.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .linalg import (
    Field,
    FieldMismatch,
    Matrix,
    SingularMatrix,
    inverse,
    left_null_space,
    mat_rank,
    nilpotency_index,
    null_space,
    rank_of_rows,
    solve_left,
)


class InfiniteField(ValueError):
    pass


class NotUnipotent(ValueError):
    pass


class NotCentral(ValueError):
    pass


class TrivialElement(ValueError):
    pass


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class LinearDeltaGroup:
    n: int
    field: Field
    delta: tuple[Matrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(self.delta))
        if len(self.delta) != self.n:
            raise ValueError(f"need {self.n} delta matrices, got {len(self.delta)}")
        for d in self.delta:
            if d.field != self.field:
                raise FieldMismatch(f"delta matrix over {d.field}, group over {self.field}")
            if d.nrows != self.n or d.ncols != self.n:
                raise ValueError("delta matrices must be n x n")

    @classmethod
    def from_rows(cls, field: Field, mats: Sequence[Sequence[Sequence]]) -> "LinearDeltaGroup":
        return cls(len(mats), field, tuple(Matrix(field, m) for m in mats))

    @classmethod
    def translations(cls, field: Field, n: int) -> "LinearDeltaGroup":
        return cls(n, field, (Matrix.zero(field, n),) * n)

    def vec(self, v: Sequence) -> tuple:
        if len(v) != self.n:
            raise ValueError(f"vector of length {len(v)} for n={self.n}")
        return tuple(self.field(x) for x in v)

    def delta_of(self, v: Sequence) -> Matrix:
        """delta(v) = sum v_i D_i."""
        f = self.field
        p = f.p
        n = self.n
        acc = [[f.zero] * n for _ in range(n)]
        for c, d in zip(v, self.delta):
            if not c:
                continue
            for i in range(n):
                row = d.rows[i]
                a = acc[i]
                for j in range(n):
                    if row[j]:
                        a[j] += c * row[j]
        if p:
            acc = [[x % p for x in r] for r in acc]
        return Matrix._raw(f, tuple(tuple(r) for r in acc))

    def product(self, v: Sequence, w: Sequence) -> tuple:
        """Coordinates of the algebra product v*w, i.e. v delta(w)."""
        return self.delta_of(w).row_vector_times(v)

    def elements(self) -> Iterator[Matrix]:
        if not self.field.is_finite:
            raise InfiniteField("element enumeration needs a finite field")
        for v in self.field.vectors(self.n):
            yield mu(self, v)

    def to_json(self) -> dict:
        return {"n": self.n, "field": self.field.to_json(), "delta": [d.to_json() for d in self.delta]}

    @classmethod
    def from_json(cls, d: dict) -> "LinearDeltaGroup":
        field = Field.from_json(d["field"])
        mats = tuple(Matrix.from_json(m) for m in d["delta"])
        return cls(int(d["n"]), field, mats)

    def key(self) -> tuple:
        return tuple(m.rows for m in self.delta)


def mu(g: LinearDeltaGroup, v: Sequence) -> Matrix:
    """The element of g with first row (1, v)."""
    if isinstance(v, Matrix):
        raise TypeError("mu expects a coordinate vector")
    v = g.vec(v)
    f = g.field
    d = g.delta_of(v)
    rows = [(f.one,) + v]
    for i in range(g.n):
        rows.append((f.zero,) + tuple(
            (d.rows[i][j] + (f.one if i == j else f.zero)) % f.p if f.p else d.rows[i][j] + (1 if i == j else 0)
            for j in range(g.n)))
    return Matrix._raw(f, tuple(rows))


def pi(r: Matrix) -> Matrix:
    """Linear part: the lower-right n x n block."""
    n1 = r.dim
    return r.submatrix(1, n1, 1, n1)


def is_affine(r: Matrix) -> bool:
    f = r.field
    if any(r.rows[i][0] != (f.one if i == 0 else f.zero) for i in range(r.dim)):
        return False
    return mat_rank(pi(r)) == r.dim - 1


def affine_diag(P: Matrix) -> Matrix:
    """diag(1, P), the embedding of GL_n into the stabiliser of (1,0,...,0)."""
    f = P.field
    return Matrix.diag_blocks([Matrix.identity(f, 1), P])


def first_row(r: Matrix) -> tuple:
    return r.rows[0][1:]


def check_group_condition(g: LinearDeltaGroup) -> bool:
    """delta(v_i delta(v_j)) == delta(v_i) delta(v_j) for all basis pairs.

    Both sides are bilinear in (v, w), so basis pairs suffice.
    """
    D = g.delta
    for i in range(g.n):
        for j in range(g.n):
            lhs = g.delta_of(D[j].rows[i])
            if lhs != D[i] @ D[j]:
                return False
    return True


def is_abelian(g: LinearDeltaGroup) -> bool:
    D = g.delta
    return all(D[j].rows[i] == D[i].rows[j] for i in range(g.n) for j in range(i + 1, g.n))


def is_regular_subset(elems: Sequence[Matrix]) -> bool:
    if not elems:
        return False
    f = elems[0].field
    if not f.is_finite:
        raise InfiniteField("regularity by enumeration requires F_p")
    n = elems[0].dim - 1
    if len(elems) != f.p ** n:
        return False
    if any(e.field != f or e.dim != n + 1 or not is_affine(e) for e in elems):
        return False
    return len({first_row(e) for e in elems}) == len(elems)


def is_closed_submonoid(elems: Sequence[Matrix]) -> bool:
    if not elems:
        return False
    s = set(elems)
    if Matrix.identity(elems[0].field, elems[0].dim) not in s:
        return False
    return all(a @ b in s for a in elems for b in elems)


def _x_matrices(g: LinearDeltaGroup) -> list[Matrix]:
    """X_i = mu(v_i) - I."""
    f = g.field
    I = Matrix.identity(f, g.n + 1)
    return [mu(g, [1 if j == i else 0 for j in range(g.n)]) - I for i in range(g.n)]


def is_unipotent_group(g: LinearDeltaGroup) -> bool:
    """(mu(v) - I)^(n+1) == 0 for every element.

    Over F_p every element is checked.  Over Q the associative algebra spanned
    by the X_i is shown nilpotent: its (n+1)-fold products must vanish.
    """
    f = g.field
    n1 = g.n + 1
    if f.is_finite:
        I = Matrix.identity(f, n1)
        return all(((e - I) ** n1).is_zero() for e in g.elements())
    X = _x_matrices(g)
    span = [x for x in X]
    for _ in range(g.n):
        prods = [s @ x for s in span for x in X]
        rows = [[a for r in m.rows for a in r] for m in prods]
        if rank_of_rows(f, rows) == 0:
            return True
        red = _span_basis(f, prods)
        span = red
    return all(m.is_zero() for m in span)


def _span_basis(f: Field, mats: Sequence[Matrix]) -> list[Matrix]:
    basis: list[Matrix] = []
    rows: list[list] = []
    for m in mats:
        flat = [a for r in m.rows for a in r]
        if rank_of_rows(f, rows + [flat]) > len(rows):
            rows.append(flat)
            basis.append(m)
    return basis


@dataclass(frozen=True)
class JordanType:
    partition: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "partition", tuple(self.partition))
        if any(a < b for a, b in zip(self.partition, self.partition[1:])) or any(x < 1 for x in self.partition):
            raise ValueError(f"not a partition: {self.partition}")

    @property
    def dim(self) -> int:
        return sum(self.partition)


def nilpotent_type(N: Matrix) -> tuple[int, ...]:
    """Block sizes of a nilpotent matrix, from the rank sequence of its powers."""
    n = N.dim
    ranks = [n]
    cur = N
    while ranks[-1]:
        ranks.append(mat_rank(cur))
        cur = cur @ N
        if len(ranks) > n + 1:
            raise NotUnipotent("matrix is not nilpotent")
    # number of blocks of size >= k is ranks[k-1] - ranks[k]
    at_least = [ranks[k - 1] - ranks[k] for k in range(1, len(ranks))]
    parts = []
    for k in range(len(at_least), 0, -1):
        exact = at_least[k - 1] - (at_least[k] if k < len(at_least) else 0)
        parts.extend([k] * exact)
    return tuple(parts)


def jordan_type(u: Matrix) -> JordanType:
    N = u - Matrix.identity(u.field, u.dim)
    if not isinstance(nilpotency_index(N), int):
        raise NotUnipotent("u - I is not nilpotent")
    return JordanType(nilpotent_type(N))


def jordan_matrix(field: Field, partition: Sequence[int]) -> Matrix:
    return Matrix.diag_blocks([Matrix.jordan_block(field, m) for m in partition])


def center_basis(g: LinearDeltaGroup) -> list[tuple]:
    """Basis of {v : v D_i == v_i delta(v) for all i}; mu of these spans Z(g)."""
    n = g.n
    f = g.field
    # unknown v; for each i the equation v D_i - row_i(delta(v)) = 0, linear in v.
    # column k of the system for block i: D_i[:, k] - (D_1[i,k], ..., D_n[i,k])
    eqs = []
    for i in range(n):
        for k in range(n):
            coeffs = []
            for j in range(n):
                c = g.delta[i].rows[j][k] - g.delta[j].rows[i][k]
                coeffs.append(c % f.p if f.p else c)
            eqs.append(coeffs)
    return null_space(f, eqs, n)


def center_elements(g: LinearDeltaGroup) -> list[tuple]:
    """All v with mu(v) central in g, enumerated over F_p."""
    f = g.field
    if not f.is_finite:
        raise InfiniteField("center enumeration needs F_p")
    basis = center_basis(g)
    p = f.p
    out = set()
    for coeffs in itertools.product(range(p), repeat=len(basis)):
        v = [0] * g.n
        for c, b in zip(coeffs, basis):
            for k in range(g.n):
                v[k] = (v[k] + c * b[k]) % p
        out.add(tuple(v))
    return sorted(out)


def center_elements_bruteforce(g: LinearDeltaGroup) -> list[tuple]:
    """Commutant of the generators mu(v_i), by testing every element."""
    gens = [mu(g, [1 if j == i else 0 for j in range(g.n)]) for i in range(g.n)]
    return [v for v in g.field.vectors(g.n)
            if all(mu(g, v) @ x == x @ mu(g, v) for x in gens)]


# -- conjugation -------------------------------------------------------------

def conjugate_affine(g: LinearDeltaGroup, P: Matrix) -> LinearDeltaGroup:
    """The group P^-1 g P for any P in AGL_n(F)."""
    if P.field != g.field:
        raise FieldMismatch("conjugator over a different field")
    if not is_affine(P):
        raise ValueError("conjugator is not in AGL_n(F)")
    Pinv = inverse(P)
    Y = [Pinv @ x @ P for x in _x_matrices(g)]
    W = Matrix(g.field, [y.rows[0][1:] for y in Y])
    E = [pi(y) for y in Y]
    Winv = inverse(W)
    f = g.field
    D = []
    for j in range(g.n):
        acc = Matrix.zero(f, g.n)
        for i in range(g.n):
            c = Winv.rows[j][i]
            if c:
                acc = acc + E[i].scale(c)
        D.append(acc)
    return LinearDeltaGroup(g.n, f, tuple(D))


def conjugate_by(g: LinearDeltaGroup, P: Matrix) -> LinearDeltaGroup:
    """delta'(w) = P^-1 delta(w P^-1) P, i.e. conjugation by diag(1, P)."""
    if P.field != g.field:
        raise FieldMismatch("conjugator over a different field")
    Pinv = inverse(P)
    D = tuple(Pinv @ g.delta_of(Pinv.rows[j]) @ P for j in range(g.n))
    return LinearDeltaGroup(g.n, g.field, D)


def _column_solve(A: Matrix, b: Sequence):
    """Some x with A x = b (x a column), or None."""
    return solve_left(A.field, A.T.rows, b)


def _jordan_chains(f: Field, N: Matrix, forced_bottom: Sequence | None = None) -> list[list[tuple]]:
    """Jordan chains for nilpotent N acting on columns; each chain bottom first.

    If ``forced_bottom`` is given the first chain has maximal length and ends
    in that vector; ValueError when this is impossible.
    """
    n = N.dim
    if n == 0:
        return []
    m = nilpotency_index(N)
    Nm1 = N ** (m - 1)
    if forced_bottom is not None:
        x = _column_solve(Nm1, forced_bottom)
        if x is None:
            raise ValueError("vector does not head a chain of maximal length")
        func = [f.one if i == 0 else f.zero for i in range(n)]
        if not _dot(func, forced_bottom, f):
            func = _nonzero_functional(forced_bottom, f)
    else:
        x = next(c for c in Matrix.identity(f, n).rows if any(_matvec(Nm1, c)))
        func = _nonzero_functional(_matvec(Nm1, x), f)
    chain_top_down = [tuple(x)]
    for _ in range(m - 1):
        chain_top_down.append(_matvec(N, chain_top_down[-1]))
    chain = list(reversed(chain_top_down))
    # invariant complement {y : func(N^i y) = 0, i < m}
    rows = []
    fn = list(func)
    for _ in range(m):
        rows.append(tuple(fn))
        fn = list(N.row_vector_times(fn))
    comp = null_space(f, rows, n)
    if not comp:
        return [chain]
    B = Matrix(f, comp).T  # columns = basis of complement
    # restricted operator: N B = B N_W
    NB = N @ B
    NW_cols = [solve_left(f, B.T.rows, col) for col in zip(*NB.rows)]
    NW = Matrix(f, NW_cols).T
    sub = _jordan_chains(f, NW)
    lifted = [[_matvec(B, c) for c in ch] for ch in sub]
    return [chain] + lifted


def _matvec(A: Matrix, x: Sequence) -> tuple:
    p = A.field.p
    out = tuple(sum(a * b for a, b in zip(r, x)) for r in A.rows)
    return tuple(v % p for v in out) if p else out


def _dot(a, b, f: Field):
    s = sum(x * y for x, y in zip(a, b))
    return s % f.p if f.p else s


def _nonzero_functional(v: Sequence, f: Field) -> tuple:
    k = next(i for i, x in enumerate(v) if x)
    return tuple(f.one if i == k else f.zero for i in range(len(v)))


def jordanize(z: Matrix) -> tuple[Matrix, Matrix]:
    """(P, J) with P in AGL_n(F), P^-1 z P = J a unipotent Jordan form with
    non-increasing blocks; raises ValueError if the first block cannot be
    anchored at e_0."""
    f = z.field
    n1 = z.dim
    N = z - Matrix.identity(f, n1)
    e0 = tuple(f.one if i == 0 else f.zero for i in range(n1))
    chains = _jordan_chains(f, N, forced_bottom=e0)
    first, rest = chains[0], sorted(chains[1:], key=len, reverse=True)
    if rest and len(rest[0]) > len(first):
        raise ValueError("e_0 does not head a block of maximal size")
    cols = [c for ch in [first] + rest for c in ch]
    P = Matrix(f, cols).T
    J = jordan_matrix(f, [len(ch) for ch in [first] + rest])
    return P, J


def jordanize_center(g: LinearDeltaGroup, v: Sequence) -> tuple[Matrix, LinearDeltaGroup]:
    """Conjugate g inside AGL_n(F) so the central element mu(v) becomes its
    Jordan form.  Returns (P, P^-1 g P)."""
    v = g.vec(v)
    if not any(v):
        raise TrivialElement("mu(0) is the identity")
    z = mu(g, v)
    for i in range(g.n):
        x = mu(g, [1 if j == i else 0 for j in range(g.n)])
        if z @ x != x @ z:
            raise NotCentral(f"mu({v}) is not central")
    P, J = jordanize(z)
    h = conjugate_affine(g, P)
    assert inverse(P) @ z @ P == J
    return P, h


def jordanize_bruteforce(z: Matrix, limit: int = 200_000) -> Matrix | None:
    """Search the (linear) space {P : z P = P J} for a nonsingular affine P.

    Independent check of :func:`jordanize` on tiny cases.
    """
    f = z.field
    if not f.is_finite:
        raise InfiniteField("brute force needs F_p")
    n1 = z.dim
    J = jordan_matrix(f, jordan_type(z).partition)
    # unknown P entries p_{ab}; equations (zP - PJ)_{ab} = 0 and first column = e0
    idx = {(a, b): a * n1 + b for a in range(n1) for b in range(n1)}
    eqs = []
    for a in range(n1):
        for b in range(n1):
            row = [0] * (n1 * n1)
            for c in range(n1):
                row[idx[(c, b)]] += z.rows[a][c]
                row[idx[(a, c)]] -= J.rows[c][b]
            eqs.append([x % f.p for x in row])
    for a in range(1, n1):
        row = [0] * (n1 * n1)
        row[idx[(a, 0)]] = 1
        eqs.append(row)
    basis = null_space(f, eqs, n1 * n1)
    count = 0
    for coeffs in itertools.product(range(f.p), repeat=len(basis)):
        count += 1
        if count > limit:
            return None
        flat = [sum(c * b[k] for c, b in zip(coeffs, basis)) % f.p for k in range(n1 * n1)]
        if flat[0] != 1:
            continue
        P = Matrix(f, [flat[a * n1:(a + 1) * n1] for a in range(n1)])
        if mat_rank(P) == n1:
            return P
    return None


# -- centralizers of Jordan forms -------------------------------------------------

def _check_blocks(blocks: Sequence[int], c: Matrix):
    if any(a < b for a, b in zip(blocks, blocks[1:])):
        raise ShapeMismatch("blocks must be non-increasing")
    if sum(blocks) != c.dim:
        raise ShapeMismatch(f"blocks sum to {sum(blocks)}, matrix has dim {c.dim}")


def centralizer_membership(blocks: JordanType | Sequence[int], c: Matrix) -> bool:
    """Does c commute with diag(J_m1, ..., J_mk)?"""
    if isinstance(blocks, JordanType):
        blocks = blocks.partition
    _check_blocks(blocks, c)
    J = jordan_matrix(c.field, blocks)
    return J @ c == c @ J


def block_toeplitz_shape(blocks: JordanType | Sequence[int], c: Matrix) -> bool:
    """Every block C_ij is upper-triangular Toeplitz, padded with zeros below
    (m_i > m_j) or to the left (m_i < m_j)."""
    if isinstance(blocks, JordanType):
        blocks = blocks.partition
    _check_blocks(blocks, c)
    offs = [0]
    for m in blocks:
        offs.append(offs[-1] + m)
    for i, mi in enumerate(blocks):
        for j, mj in enumerate(blocks):
            blk = [row[offs[j]:offs[j + 1]] for row in c.rows[offs[i]:offs[i + 1]]]
            k = min(mi, mj)
            # zero padding
            if mi > mj:
                if any(any(r) for r in blk[k:]):
                    return False
                sq = blk[:k]
            elif mi < mj:
                if any(any(r[:mj - k]) for r in blk):
                    return False
                sq = [r[mj - k:] for r in blk]
            else:
                sq = blk
            for a in range(k):
                for b in range(k):
                    if b < a and sq[a][b]:
                        return False
                    if b >= a and sq[a][b] != sq[0][b - a]:
                        return False
    return True


def fixed_space_dim(g: LinearDeltaGroup) -> int:
    """k(g): dim of {w : w D_i = 0 for all i}."""
    f = g.field
    n = g.n
    # w D_i = 0 for all i  <=>  w [D_1 | D_2 | ... | D_n] = 0
    big = [[x for d in g.delta for x in d.rows[r]] for r in range(n)]
    return len(left_null_space(f, big))
