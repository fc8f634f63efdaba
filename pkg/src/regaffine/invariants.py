"""Conjugacy invariants d, r, k of a linear-delta group and of its centre."""

from __future__ import annotations

import random
from dataclasses import dataclass, asdict
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .affine import (InfiniteField, LinearDeltaGroup, center_basis, center_elements,
                     fixed_space_dim, is_abelian, mu, nilpotent_type)
from .algebra import NilpotentAlgebra
from .linalg import Field, Matrix, inverse, left_null_space, nilpotency_index, rank_of_rows


@dataclass(frozen=True)
class InvariantProfile:
    d: int
    r: int
    k: int
    dZ: int
    rZ: int
    kZ: int
    abelian: bool
    n: int | None = None
    characteristic: int | None = None
    generic: bool = False  # True when d, r are sampled lower bounds (infinite field)

    def __post_init__(self):
        if self.n is not None:
            n = self.n
            if not (1 <= self.d <= n + 1 and 1 <= self.dZ <= n + 1):
                raise ValueError("d out of range")
            if not (0 <= self.r <= n and 0 <= self.rZ <= n and 0 <= self.k <= n and 0 <= self.kZ <= n):
                raise ValueError("r or k out of range")
        if self.abelian and not self.generic and (self.d, self.r, self.k) != (self.dZ, self.rZ, self.kZ):
            raise ValueError("abelian group must have equal group and centre invariants")

    def key(self) -> tuple:
        return (self.d, self.r, self.k, self.dZ, self.rZ, self.kZ, self.abelian)

    def to_json(self) -> dict:
        return {"d": self.d, "r": self.r, "k": self.k, "dZ": self.dZ, "rZ": self.rZ,
                "kZ": self.kZ, "abelian": self.abelian}

    @classmethod
    def from_json(cls, d: dict) -> "InvariantProfile":
        return cls(d["d"], d["r"], d["k"], d["dZ"], d["rZ"], d["kZ"], bool(d["abelian"]))


def _element_dr(g: LinearDeltaGroup, v: Sequence) -> tuple[int, int]:
    N = mu(g, v) - Matrix.identity(g.field, g.n + 1)
    return nilpotency_index(N), rank_of_rows(g.field, N.rows)


def _fixed_dim_of(g: LinearDeltaGroup, vectors: Sequence[Sequence]) -> int:
    """dim {w : w delta(v) = 0 for v in vectors} (common fixed rows of pi)."""
    n = g.n
    if not vectors:
        return n
    deltas = [g.delta_of(v) for v in vectors]
    # w D = 0 for every D  <=>  w [D_1 | D_2 | ...] = 0
    stacked = [tuple(x for D in deltas for x in D.rows[i]) for i in range(n)]
    return len(left_null_space(g.field, stacked))


def profile(g: LinearDeltaGroup) -> InvariantProfile:
    """Exact invariants by scanning every element and every central element."""
    f = g.field
    if not f.is_finite:
        raise InfiniteField("exact profile needs F_p; use generic_profile over Q")
    d = r = 0
    for v in f.vectors(g.n):
        dv, rv = _element_dr(g, v)
        d, r = max(d, dv), max(r, rv)
    zb = center_basis(g)
    dZ = rZ = 0
    for v in center_elements(g):
        dv, rv = _element_dr(g, v)
        dZ, rZ = max(dZ, dv), max(rZ, rv)
    return InvariantProfile(d, r, fixed_space_dim(g), dZ, rZ, _fixed_dim_of(g, zb),
                            is_abelian(g), g.n, f.characteristic())


def generic_profile(g: LinearDeltaGroup, samples: int = 3, seed: int = 0, bound: int = 7) -> InvariantProfile:
    """Lower bounds for d, r (group and centre) from random elements; k exact.

    Works over any field; over Q this is the only profile on offer.
    """
    rng = random.Random(seed)
    f = g.field
    d = r = dZ = rZ = 1
    zb = center_basis(g)
    for _ in range(samples):
        v = [f(rng.randint(-bound, bound)) for _ in range(g.n)]
        dv, rv = _element_dr(g, v)
        d, r = max(d, dv), max(r, rv)
        if zb:
            coeffs = [rng.randint(-bound, bound) for _ in zb]
            z = [f(sum(c * b[k] for c, b in zip(coeffs, zb))) for k in range(g.n)]
            dv, rv = _element_dr(g, z)
            dZ, rZ = max(dZ, dv), max(rZ, rv)
    return InvariantProfile(d, r, fixed_space_dim(g), dZ, rZ, _fixed_dim_of(g, zb),
                            is_abelian(g), g.n, f.characteristic(), generic=True)


def jordan_histogram(g: LinearDeltaGroup) -> tuple:
    """Sorted multiset of Jordan types of all elements (a conjugacy invariant)."""
    hist: dict = {}
    I = Matrix.identity(g.field, g.n + 1)
    for v in g.field.vectors(g.n):
        t = nilpotent_type(mu(g, v) - I)
        hist[t] = hist.get(t, 0) + 1
    return tuple(sorted(hist.items()))


CERTIFIED = "certified-indecomposable"
UNKNOWN = "unknown"


def is_indecomposable_certificate(g: LinearDeltaGroup) -> str:
    """k = 1 forces indecomposability; larger k decides nothing."""
    return CERTIFIED if fixed_space_dim(g) == 1 else UNKNOWN


def _rational_square(x: Fraction) -> bool:
    x = Fraction(x)
    if x < 0:
        return False
    return isqrt(x.numerator) ** 2 == x.numerator and isqrt(x.denominator) ** 2 == x.denominator


def square_class(alpha, field: Field) -> str:
    """'zero', 'square' or 'nonsquare' (Euler criterion over F_p)."""
    a = field(alpha)
    if not a:
        return "zero"
    if field.is_finite:
        p = field.p
        if p == 2:
            return "square"
        return "square" if pow(a, (p - 1) // 2, p) == 1 else "nonsquare"
    return "square" if _rational_square(a) else "nonsquare"


def square_class_rep(alpha, field: Field) -> int:
    """Least 1 <= c < p with alpha/c a square."""
    if not field.is_finite:
        raise InfiniteField("square class representatives are only tabulated over F_p")
    a = field(alpha)
    if not a:
        raise ValueError("zero has no square class")
    for c in range(1, field.p):
        if square_class(a * field.inv(c), field) == "square":
            return c
    raise AssertionError("unreachable")


def square_transversal(field: Field) -> list[int]:
    """Least representatives of F_p^* modulo squares: [1] or [1, least non-residue]."""
    return sorted({square_class_rep(a, field) for a in range(1, field.p)})


def cosquare(A: Matrix) -> Matrix:
    """A^{-T} A."""
    return inverse(A.T) @ A


def top_form(a: NilpotentAlgebra) -> Matrix:
    """Bilinear form J/J^2 x J/J^2 -> J^2 when dim J^2 = 1 and J^3 = 0.

    The complement of J^2 is spanned by the first standard vectors independent
    modulo J^2; entries are coordinates along the spanning vector of J^2.
    """
    f = a.field
    sq = a.square_basis()
    if len(sq) != 1:
        raise ValueError(f"top_form needs dim J^2 = 1, got {len(sq)}")
    w = sq[0]
    piv = next(i for i, x in enumerate(w) if x)
    comp = []
    rows = [w]
    for i in range(a.n):
        e = tuple(1 if k == i else 0 for k in range(a.n))
        if rank_of_rows(f, rows + [e]) > len(rows):
            rows.append(e)
            comp.append(e)
    winv = f.inv(w[piv])
    M = [[f(a.mul(x, y)[piv] * winv) for y in comp] for x in comp]
    return Matrix(f, M)
