"""Nilpotent algebras J(A) of split local algebras A = F.1 + J(A).

An algebra is given by structure constants c[i][j][k]:
v_i * v_j = sum_k c[i][j][k] v_k.  For a linear-delta group the product is
v * w = v delta(w), so c[i][j][.] is row i of D_j.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .affine import LinearDeltaGroup, check_group_condition
from .linalg import Field, Matrix, inverse, mat_rank, rank_of_rows, row_echelon, solve_left


class NotAGroup(ValueError):
    pass


class NotAssociative(ValueError):
    pass


class NotNilpotentAlgebra(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class NilpotentAlgebra:
    """Finite-dimensional associative algebra by structure constants."""

    __slots__ = ("n", "field", "c", "_right")

    def __init__(self, n: int, field: Field, c):
        self.n = n
        self.field = field
        self.c = tuple(tuple(tuple(field(x) for x in cij) for cij in ci) for ci in c)
        if len(self.c) != n or any(len(ci) != n or any(len(cij) != n for cij in ci) for ci in self.c):
            raise ValueError("structure constants must be n x n x n")
        self._right = None

    def __eq__(self, other) -> bool:
        return isinstance(other, NilpotentAlgebra) and (self.n, self.field, self.c) == (other.n, other.field, other.c)

    def __hash__(self) -> int:
        return hash((self.n, self.field, self.c))

    def __repr__(self) -> str:
        return f"NilpotentAlgebra(n={self.n}, field={self.field})"

    def right_mult(self, j: int) -> Matrix:
        """Matrix of x -> x * v_j."""
        if self._right is None:
            self._right = tuple(Matrix(self.field, [self.c[i][jj] for i in range(self.n)]) for jj in range(self.n))
        return self._right[j]

    def mul(self, x: Sequence, y: Sequence) -> tuple:
        f = self.field
        p = f.p
        n = self.n
        out = [f.zero] * n
        c = self.c
        for i in range(n):
            xi = x[i]
            if not xi:
                continue
            ci = c[i]
            for j in range(n):
                yj = y[j]
                if not yj:
                    continue
                s = xi * yj
                cij = ci[j]
                for k in range(n):
                    if cij[k]:
                        out[k] += s * cij[k]
        if p:
            return tuple(v % p for v in out)
        return tuple(out)

    def is_associative(self) -> bool:
        n = self.n
        e = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
        return all(self.mul(self.mul(e[i], e[j]), e[k]) == self.mul(e[i], self.mul(e[j], e[k]))
                   for i in range(n) for j in range(n) for k in range(n))

    def is_commutative(self) -> bool:
        return all(self.c[i][j] == self.c[j][i] for i in range(self.n) for j in range(self.n))

    def power_dims(self) -> list[int]:
        """[dim J, dim J^2, dim J^3, ...] down to 0 (or until it stabilises)."""
        n = self.n
        f = self.field
        basis = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
        dims = [n]
        cur = basis
        while cur:
            prods = [self.mul(x, e) for x in cur for e in basis]
            red, _ = row_echelon(f, prods) if prods else ([], [])
            nxt = [tuple(r) for r in red]
            if len(nxt) == dims[-1]:
                break  # not nilpotent
            dims.append(len(nxt))
            cur = nxt
        return dims

    def is_nilpotent(self) -> bool:
        return self.power_dims()[-1] == 0

    def square_basis(self) -> list[tuple]:
        """Basis of J^2."""
        n = self.n
        e = [tuple(1 if i == k else 0 for i in range(n)) for k in range(n)]
        prods = [self.mul(x, y) for x in e for y in e]
        red, _ = row_echelon(self.field, prods)
        return [tuple(r) for r in red]

    def to_json(self) -> dict:
        f = self.field
        return {"n": self.n, "field": f.to_json(),
                "c": [[[f.scalar_to_json(x) for x in cij] for cij in ci] for ci in self.c]}

    @classmethod
    def from_json(cls, d: dict) -> "NilpotentAlgebra":
        f = Field.from_json(d["field"])
        c = [[[f.scalar_from_json(x) for x in cij] for cij in ci] for ci in d["c"]]
        return cls(int(d["n"]), f, c)


def from_delta(g: LinearDeltaGroup) -> NilpotentAlgebra:
    if not check_group_condition(g):
        raise NotAGroup("delta list violates the group condition")
    c = [[g.delta[j].rows[i] for j in range(g.n)] for i in range(g.n)]
    return NilpotentAlgebra(g.n, g.field, c)


def to_delta(a: NilpotentAlgebra) -> LinearDeltaGroup:
    if not a.is_associative():
        raise NotAssociative("structure constants are not associative")
    if not a.is_nilpotent():
        raise NotNilpotentAlgebra("algebra is not nilpotent")
    return LinearDeltaGroup(a.n, a.field, tuple(a.right_mult(j) for j in range(a.n)))


def transport(a: NilpotentAlgebra, P: Matrix) -> NilpotentAlgebra:
    """The algebra b with c_b(v_i P, v_j P) = c_a(v_i, v_j) P."""
    f = a.field
    n = a.n
    Pinv = inverse(P)
    # b(x, y) = a(x P^-1, y P^-1) P
    rows = Pinv.rows
    c = []
    for i in range(n):
        ci = []
        for j in range(n):
            ci.append(P.row_vector_times(a.mul(rows[i], rows[j])))
        c.append(ci)
    return NilpotentAlgebra(n, f, c)


def is_isomorphism(a: NilpotentAlgebra, b: NilpotentAlgebra, P: Matrix) -> bool:
    """c_b(v_i P, v_j P) == c_a(v_i, v_j) P for all i, j, and P nonsingular."""
    if mat_rank(P) != a.n:
        return False
    rows = P.rows
    return all(b.mul(rows[i], rows[j]) == P.row_vector_times(a.mul(_e(a.n, i), _e(a.n, j)))
               for i in range(a.n) for j in range(a.n))


def _e(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


# -- polynomials and presentations ---------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*([^+-]+)")


def parse_polynomial(text: str, names: Sequence[str], commutative: bool = True) -> list[dict]:
    """Parse ``"t1^3 - 2 t2^2"`` into ``{monomial: coeff}``.

    Monomials are words (tuples of generator indices); for commutative input
    they are sorted.  ``"<t1,t2>^2"`` expands into all monomials of that
    degree and yields one polynomial each, hence the list return.
    """
    text = text.strip()
    m = re.fullmatch(r"<([^>]*)>\^(\d+)", text.replace(" ", ""))
    if m:
        gens = [names.index(x) for x in m.group(1).split(",")]
        deg = int(m.group(2))
        if commutative:
            words = itertools.combinations_with_replacement(sorted(gens), deg)
        else:
            words = itertools.product(gens, repeat=deg)
        return [{tuple(w): Fraction(1)} for w in words]
    poly: dict = {}
    if text.startswith(("+", "-")):
        body = text
    else:
        body = "+" + text
    for sign, term in re.findall(r"([+-])\s*([^+-]+)", body):
        coeff = Fraction(1)
        word: list[int] = []
        for tok in re.split(r"[\s*]+", term.strip()):
            if not tok:
                continue
            if re.fullmatch(r"\d+(/\d+)?", tok):
                coeff *= Fraction(tok)
                continue
            base, _, exp = tok.partition("^")
            if base not in names:
                raise ValueError(f"unknown generator {base!r} in {text!r}")
            word.extend([names.index(base)] * (int(exp) if exp else 1))
        if not word:
            raise ValueError(f"constant term in relation {text!r}")
        if sign == "-":
            coeff = -coeff
        key = tuple(sorted(word)) if commutative else tuple(word)
        poly[key] = poly.get(key, 0) + coeff
    return [{k: v for k, v in poly.items() if v}]


@dataclass
class PresentationCheck:
    """Generator images (coordinate vectors in J) and relations as strings."""

    gens: dict
    relations: list
    commutative: bool = True

    def to_json(self, field: Field) -> dict:
        return {"gens": {k: [field.scalar_to_json(field(x)) for x in v] for k, v in self.gens.items()},
                "relations": list(self.relations), "commutative": self.commutative}

    @classmethod
    def from_json(cls, d: dict, field: Field) -> "PresentationCheck":
        gens = {k: tuple(field.scalar_from_json(x) for x in v) for k, v in d["gens"].items()}
        return cls(gens, list(d["relations"]), d.get("commutative", True))


@dataclass
class PresentationReport:
    relations_vanish: bool
    images_commute: bool
    generates: bool
    span_dim: int
    quotient_dim: int
    n: int
    truncated_monomials: int = 0
    failures: list = dc_field(default_factory=list)

    @property
    def kernel_equal(self) -> bool:
        return self.quotient_dim == self.n

    @property
    def ok(self) -> bool:
        return self.relations_vanish and self.images_commute and self.generates and self.kernel_equal

    def __bool__(self) -> bool:
        return self.ok


def _eval_word(a: NilpotentAlgebra, images: Sequence[tuple], word: Sequence[int]) -> tuple | None:
    """Product of images along a word; None when longer than n (zero by nilpotency)."""
    if len(word) > a.n:
        return None
    x = images[word[0]]
    for w in word[1:]:
        x = a.mul(x, images[w])
    return x


def _words(s: int, max_deg: int, commutative: bool):
    for d in range(1, max_deg + 1):
        if commutative:
            yield from itertools.combinations_with_replacement(range(s), d)
        else:
            yield from itertools.product(range(s), repeat=d)


def quotient_dim(field: Field, s: int, rels: Sequence[dict], max_deg: int, commutative: bool = True) -> int:
    """dim of m / (I + m^(max_deg+1)), m the augmentation ideal of F[t] or F<t>."""
    mons = list(_words(s, max_deg, commutative))
    index = {w: i for i, w in enumerate(mons)}
    rows = []
    mults = [()] + mons
    for rel in rels:
        mindeg = min(len(w) for w in rel)
        for u in mults:
            if len(u) + mindeg > max_deg:
                continue
            rights = [()] if commutative else [w for w in mults if len(u) + len(w) + mindeg <= max_deg]
            for w in rights:
                row = [field.zero] * len(mons)
                for word, coeff in rel.items():
                    full = tuple(sorted(u + word)) if commutative else u + word + w
                    if len(full) <= max_deg:
                        k = index[full]
                        row[k] = field(row[k] + field(coeff))
                if any(row):
                    rows.append(row)
    return len(mons) - rank_of_rows(field, rows)


def check_presentation(a: NilpotentAlgebra, pc: PresentationCheck) -> PresentationReport:
    f = a.field
    names = list(pc.gens)
    images = [tuple(f(x) for x in pc.gens[k]) for k in names]
    s = len(names)
    rels = [r for text in pc.relations for r in parse_polynomial(text, names, pc.commutative)]
    zero = (f.zero,) * a.n
    truncated = 0
    failures = []
    vanish = True
    for rel in rels:
        acc = [f.zero] * a.n
        for word, coeff in rel.items():
            val = _eval_word(a, images, word)
            if val is None:
                truncated += 1
                continue
            acc = [f(x + f(coeff) * y) for x, y in zip(acc, val)]
        if tuple(acc) != zero:
            vanish = False
            failures.append(rel)
    commute = True
    if pc.commutative:
        commute = all(a.mul(x, y) == a.mul(y, x) for x in images for y in images)
    vals = [_eval_word(a, images, w) for w in _words(s, a.n, pc.commutative)]
    span = rank_of_rows(f, [v for v in vals if v is not None])
    qdim = quotient_dim(f, s, rels, a.n + 1, pc.commutative)
    return PresentationReport(vanish, commute, span == a.n, span, qdim, a.n, truncated, failures)


def eval_presentation(a: NilpotentAlgebra, pc: PresentationCheck) -> bool:
    """Relations vanish, the images generate J, and F[t]/<relations> has dim n+1."""
    return check_presentation(a, pc).ok


def quotient_algebra(field: Field, names: Sequence[str], relations: Sequence[str],
                     basis: Sequence[str] | None = None, max_deg: int = 12) -> NilpotentAlgebra:
    """J(A) for A = F[t]/<relations>, A assumed split local and finite dimensional.

    ``basis`` optionally names the monomials (e.g. ``["t1", "t1^2", "t2"]``)
    used as coordinates, otherwise the normal-form monomials are used.
    """
    s = len(names)
    rels = [r for text in relations for r in parse_polynomial(text, names, True)]
    # find N with m^N contained in I + m^(N+1)
    for N in range(2, max_deg + 1):
        total = quotient_dim(field, s, rels, N)
        lower = quotient_dim(field, s, rels, N - 1)
        if total == lower:
            break
    else:
        raise NotNilpotentAlgebra("quotient does not look finite dimensional")
    D = N - 1  # m^N is inside I; work modulo m^N
    mons = list(_words(s, D, True))
    # columns ordered so that high-degree monomials become pivots first
    order = sorted(mons, key=lambda w: (-len(w), _exps(w, s)))
    col = {w: i for i, w in enumerate(order)}
    rows = []
    for rel in rels:
        mindeg = min(len(w) for w in rel)
        for u in [()] + mons:
            if len(u) + mindeg > D:
                continue
            row = [field.zero] * len(order)
            for word, coeff in rel.items():
                full = tuple(sorted(u + word))
                if len(full) <= D:
                    row[col[full]] = field(row[col[full]] + field(coeff))
            if any(row):
                rows.append(row)
    red, piv = row_echelon(field, rows) if rows else ([], [])
    free = [order[i] for i in range(len(order)) if i not in set(piv)]

    def normal(vec):
        vec = list(vec)
        for r, pc in zip(red, piv):
            if vec[pc]:
                c = vec[pc]
                vec = [field(x - c * y) for x, y in zip(vec, r)]
        return vec

    def mono_vec(w):
        v = [field.zero] * len(order)
        if len(w) <= D:
            v[col[tuple(sorted(w))]] = field.one
        return normal(v)

    if basis is None:
        basis_words = sorted(free, key=lambda w: (len(w), [-e for e in _exps(w, s)]))
        coords = [[field.one if col[w] == i else field.zero for i in range(len(order))] for w in basis_words]
    else:
        basis_words = [parse_polynomial(b, names, True)[0] for b in basis]
        basis_words = [next(iter(b)) for b in basis_words]
        coords = [mono_vec(w) for w in basis_words]
    n = len(free)
    if len(basis_words) != n:
        raise ValueError(f"quotient has dimension {n}, basis lists {len(basis_words)}")
    free_idx = [col[w] for w in free]
    Bmat = [[v[i] for i in free_idx] for v in coords]
    Binv = inverse(Matrix(field, Bmat))

    def to_coords(vec):
        nv = normal(vec)
        return Binv.row_vector_times([nv[i] for i in free_idx])

    c = []
    for i, wi in enumerate(basis_words):
        ci = []
        for j, wj in enumerate(basis_words):
            ci.append(to_coords(mono_vec(wi + wj)))
        c.append(ci)
    return NilpotentAlgebra(n, field, c)


def _exps(w, s):
    return tuple(-w.count(i) for i in range(s))


# -- invariants used for pruning -------------------------------------------------

def element_signature(a: NilpotentAlgebra, x: Sequence) -> tuple:
    """(nilpotency index of x, rank of y -> yx, rank of y -> xy); conjugation invariant."""
    n = a.n
    f = a.field
    k, cur = 1, tuple(x)
    while any(cur):
        cur = a.mul(cur, x)
        k += 1
        if k > n + 1:
            break
    e = [_e(n, i) for i in range(n)]
    right = rank_of_rows(f, [a.mul(ei, x) for ei in e])
    left = rank_of_rows(f, [a.mul(x, ei) for ei in e])
    return (k, right, left)


def fingerprint(a: NilpotentAlgebra) -> tuple:
    """Isomorphism invariant: power dimensions plus the histogram of element
    signatures over all of J (F_p only)."""
    f = a.field
    if not f.is_finite:
        raise ValueError("fingerprint needs F_p")
    hist: dict = {}
    for x in f.vectors(a.n):
        sig = element_signature(a, x)
        hist[sig] = hist.get(sig, 0) + 1
    return (tuple(a.power_dims()), a.is_commutative(), tuple(sorted(hist.items())))


# -- brute-force isomorphism ------------------------------------------------------

@dataclass
class _WordPlan:
    gens: list            # generator vectors in a
    basis_words: list     # words spanning J(a), independent
    checks: list          # (level, basis word index, generator, coefficient vector over basis words)
    T: Matrix             # rows: standard basis vectors expressed in basis words
    level_of_word: list


def _word_plan(a: NilpotentAlgebra) -> _WordPlan:
    f = a.field
    n = a.n
    sq = a.square_basis()
    gens = []
    rows = list(sq)
    for i in range(n):
        e = _e(n, i)
        if rank_of_rows(f, rows + [e]) > len(rows):
            rows.append(e)
            gens.append(tuple(f(x) for x in e))
    s = len(gens)
    # basis words by BFS, shorter and lower-generator words first
    basis_words: list = []
    basis_vecs: list = []
    frontier = [(g,) for g in range(s)]
    while frontier and len(basis_words) < n:
        nxt = []
        for w in frontier:
            v = _eval_word(a, gens, w)
            if v is None or not any(v):
                continue
            if rank_of_rows(f, basis_vecs + [v]) > len(basis_vecs):
                basis_words.append(w)
                basis_vecs.append(v)
                nxt.extend(w + (g,) for g in range(s))
        frontier = nxt
    if len(basis_words) != n:
        raise NotNilpotentAlgebra("generators do not span")
    level_of_word = [max(w) for w in basis_words]
    checks = []
    for bi, w in enumerate(basis_words):
        for g in range(s):
            v = a.mul(basis_vecs[bi], gens[g])
            coeffs = solve_left(f, basis_vecs, v)
            used = [level_of_word[k] for k, c in enumerate(coeffs) if c]
            level = max([level_of_word[bi], g] + used)
            checks.append((level, bi, g, coeffs))
    T = inverse(Matrix(f, basis_vecs))
    return _WordPlan(gens, basis_words, checks, T, level_of_word)


def are_isomorphic_bruteforce(a: NilpotentAlgebra, b: NilpotentAlgebra, budget: int = 5_000_000) -> Matrix | None:
    """An invertible P with c_b(v_i P, v_j P) = c_a(v_i, v_j) P, or None.

    Searches over images of a minimal generating set of a (a basis of J/J^2
    lifted to standard vectors), extending to basis words by multiplication
    and pruning as soon as a product relation among already-placed words
    fails.  Deterministic: candidates are tried in lexicographic order.
    """
    if a.n != b.n or a.field != b.field:
        return None
    f = a.field
    if not f.is_finite:
        raise ValueError("brute force needs F_p")
    if a == b:
        return Matrix.identity(f, a.n)
    if a.power_dims() != b.power_dims() or a.is_commutative() != b.is_commutative():
        return None
    plan = _word_plan(a)
    s = len(plan.gens)
    n = a.n
    sq_b = b.square_basis()
    sigs = [element_signature(a, g) for g in plan.gens]
    pool = []
    for x in f.vectors(n):
        if any(x) and rank_of_rows(f, sq_b + [x]) > len(sq_b):
            pool.append((x, element_signature(b, x)))
    cands = [[x for x, sg in pool if sg == sigs[g]] for g in range(s)]
    checks_at = [[c for c in plan.checks if c[0] == lvl] for lvl in range(s)]
    words_at = [[i for i, l in enumerate(plan.level_of_word) if l == lvl] for lvl in range(s)]
    counter = [0]

    images: list = [None] * s
    word_img: list = [None] * len(plan.basis_words)

    def image_of(w):
        x = images[w[0]]
        for g in w[1:]:
            x = b.mul(x, images[g])
        return x

    def rec(level: int):
        if level == s:
            return True
        chosen = [images[g] for g in range(level)]
        for y in cands[level]:
            counter[0] += 1
            if counter[0] > budget:
                raise BudgetExceeded(f"isomorphism search exceeded {budget} candidates")
            if rank_of_rows(f, sq_b + chosen + [y]) < len(sq_b) + level + 1:
                continue
            images[level] = y
            for wi in words_at[level]:
                word_img[wi] = image_of(plan.basis_words[wi])
            ok = True
            for _, bi, g, coeffs in checks_at[level]:
                lhs = b.mul(word_img[bi], images[g])
                rhs = [f.zero] * n
                for k, c in enumerate(coeffs):
                    if c:
                        rhs = [f(r + c * x) for r, x in zip(rhs, word_img[k])]
                if lhs != tuple(rhs):
                    ok = False
                    break
            if ok and rec(level + 1):
                return True
        images[level] = None
        return False

    if not rec(0):
        return None
    W = Matrix(f, word_img)
    if mat_rank(W) != n:
        return None
    P = plan.T @ W
    assert is_isomorphism(a, b, P)
    return P


def are_isomorphic(a: NilpotentAlgebra, b: NilpotentAlgebra, budget: int = 5_000_000) -> bool:
    return are_isomorphic_bruteforce(a, b, budget) is not None


def hom_from_generator_images(a: NilpotentAlgebra, b: NilpotentAlgebra, images: Sequence[Sequence]) -> Matrix | None:
    """Given images of the standard generators chosen by the search plan of a,
    return P if they define an isomorphism."""
    plan = _word_plan(a)
    f = a.field
    imgs = [tuple(f(x) for x in y) for y in images]
    word_img = []
    for w in plan.basis_words:
        x = imgs[w[0]]
        for g in w[1:]:
            x = b.mul(x, imgs[g])
        word_img.append(x)
    W = Matrix(f, word_img)
    if mat_rank(W) != a.n:
        return None
    P = plan.T @ W
    return P if is_isomorphism(a, b, P) else None
