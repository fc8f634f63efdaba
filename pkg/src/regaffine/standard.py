"""Constructors for the named regular subgroups.

Every group is a :class:`LinearDeltaGroup`; the D-matrices are the matrices
delta(v_i) read off from the displayed mu(x_1, ..., x_n), with the variable
x_i attached to the basis vector v_i.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .affine import LinearDeltaGroup
from .linalg import Field, Matrix


class BadPartition(ValueError):
    pass


class BadLabel(ValueError):
    pass


class CharMismatch(ValueError):
    pass


class BadParams(ValueError):
    pass


class IndexOutOfRange(IndexError):
    pass


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]
    sharp: bool = False

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts or any(x < 1 for x in parts):
            raise BadPartition(f"bad parts {parts}")
        if self.sharp:
            # (1+n1, n2, n3, ...): 1+n1 >= n2 > 1, tail non-increasing
            if len(parts) < 2 or not parts[0] >= parts[1] > 1:
                raise BadPartition(f"sharp partition needs parts[0] >= parts[1] > 1: {parts}")
            tail = parts[2:]
        else:
            # (1+n1, n2, ...) with n1 >= n2 >= ... >= 1
            if parts[0] < 2:
                raise BadPartition(f"{parts} is (1^k)")
            if len(parts) > 1 and parts[0] - 1 < parts[1]:
                raise BadPartition(f"S_lambda needs parts[0] > parts[1]: {parts}")
            tail = parts[1:]
        if any(a < b for a, b in zip(tail, tail[1:])):
            raise BadPartition(f"parts not non-increasing: {parts}")

    @property
    def n(self) -> int:
        return sum(self.parts) - 1


def toeplitz_generator(m: int, i: int, field: Field | None = None) -> Matrix:
    """(J_m - I)^i, the i-th superdiagonal shift."""
    if not 1 <= i <= m - 1:
        raise IndexOutOfRange(f"need 1 <= i <= {m - 1}, got {i}")
    field = field or Field(None)
    return Matrix(field, [[1 if b - a == i else 0 for b in range(m)] for a in range(m)])


def _embed(field: Field, n: int, entries: dict) -> Matrix:
    rows = [[0] * n for _ in range(n)]
    for (i, j), c in entries.items():
        rows[i - 1][j - 1] = (rows[i - 1][j - 1] + c)
    return Matrix(field, rows)


def _shift_entries(coords: Sequence[int], power: int) -> dict:
    """E_{c_a, c_{a+power}} summed over a: the shift N^power on the given coordinates."""
    return {(coords[a], coords[a + power]): 1 for a in range(len(coords) - power)}


def _jordan_centralizer_deltas(coords: Sequence[int]) -> list[tuple[int, dict]]:
    """delta for S_(1+m) placed on coordinates c_1..c_m: v_{c_i} -> N^i."""
    out = []
    for i, c in enumerate(coords, start=1):
        out.append((c, _shift_entries(coords, i) if i < len(coords) else {}))
    return out


def _group(field: Field, n: int, deltas: dict) -> LinearDeltaGroup:
    return LinearDeltaGroup(n, field, tuple(_embed(field, n, deltas.get(i, {})) for i in range(1, n + 1)))


def s_lambda(parts: Partition | Sequence[int], field: Field) -> LinearDeltaGroup:
    """S_lambda = S_(1+n_1) x S_(1+n_2) x ... for lambda = (1+n_1, n_2, ..., n_s)."""
    lam = parts if isinstance(parts, Partition) else Partition(tuple(parts))
    if lam.sharp:
        raise BadPartition("use s_sharp for sharp partitions")
    dims = [lam.parts[0] - 1] + list(lam.parts[1:])
    n = sum(dims)
    deltas: dict = {}
    start = 1
    for m in dims:
        coords = list(range(start, start + m))
        for c, ent in _jordan_centralizer_deltas(coords):
            deltas[c] = ent
        start += m
    return _group(field, n, deltas)


def s_sharp(parts: Partition | Sequence[int], field: Field) -> LinearDeltaGroup:
    """S#_mu: S#_(1+n_1, n_2) x prod_{j>=3} S_(1+n_j)."""
    mu_ = parts if isinstance(parts, Partition) else Partition(tuple(parts), sharp=True)
    if not mu_.sharp:
        mu_ = Partition(mu_.parts, sharp=True)
    n1, n2 = mu_.parts[0] - 1, mu_.parts[1]
    dims = [n1, n2] + list(mu_.parts[2:])
    n = sum(dims)
    deltas: dict = {}
    u = list(range(1, n1 + 1))
    v = list(range(n1 + 1, n1 + n2 + 1))
    last_v = v[-1]
    for i, c in enumerate(u, start=1):
        ent = dict(_shift_entries(u, i)) if i < n1 else {}
        # w (x) D u^T: last column of the top-right block holds (u_{n1}, ..., u_1)
        ent[(u[n1 - i], last_v)] = 1
        deltas[c] = ent
    for c, ent in _jordan_centralizer_deltas(v):
        deltas[c] = ent
    start = n1 + n2 + 1
    for m in dims[2:]:
        coords = list(range(start, start + m))
        for c, ent in _jordan_centralizer_deltas(coords):
            deltas[c] = ent
        start += m
    return _group(field, n, deltas)


def r_alpha(n: int, alpha, field: Field) -> LinearDeltaGroup:
    """R_alpha in AGL_n: C(J_n) on coordinates (1..n-2, n) plus delta(v_{n-1}) = alpha E_{n-1,n}."""
    if n < 2:
        raise BadParams("R_alpha needs n >= 2")
    coords = list(range(1, n - 1)) + [n]
    deltas: dict = {}
    for i, c in enumerate(coords[:-1], start=1):
        deltas[c] = _shift_entries(coords, i)
    deltas[n - 1] = {(n - 1, n): field(alpha)}
    return _group(field, n, deltas)


def r_ab(alpha, beta, field: Field) -> LinearDeltaGroup:
    """R(alpha, beta) in AGL_4, centralising diag(J_3, J_2)."""
    a, b = field(alpha), field(beta)
    return _group(field, 4, {1: {(1, 2): 1, (3, 4): 1}, 3: {(1, 4): 1, (3, 4): a, (3, 2): b}})


def r_abg(alpha, beta, gamma, field: Field) -> LinearDeltaGroup:
    """R(alpha, beta, gamma) in AGL_4, centralising diag(J_3, J_1, J_1)."""
    a, b, c = field(alpha), field(beta), field(gamma)
    return _group(field, 4, {1: {(1, 2): 1}, 3: {(3, 2): a, (4, 2): b}, 4: {(3, 2): b, (4, 2): c}})


def r_221(alpha, field: Field) -> LinearDeltaGroup:
    """R(alpha) in AGL_4, centralising diag(J_2, J_2, J_1); conjugate to U1^3 x S_(1)."""
    a = field(alpha)
    return _group(field, 4, {1: {(2, 3): 1}, 2: {(1, 3): 1, (4, 3): a}, 4: {(2, 3): a}})


def v_group(a2, a3, b2, b3, field: Field) -> LinearDeltaGroup:
    """V(a2, a3, b2, b3) in AGL_3; abelian iff a3 == b2."""
    return _group(field, 3, {2: {(2, 1): field(a2), (3, 1): field(b2)},
                             3: {(2, 1): field(a3), (3, 1): field(b3)}})


def u13(field: Field) -> LinearDeltaGroup:
    return _group(field, 3, {1: {(2, 3): 1}, 2: {(1, 3): 1}})


def u14(field: Field) -> LinearDeltaGroup:
    return r_ab(0, 0, field)


def u24(field: Field) -> LinearDeltaGroup:
    return _group(field, 4, {1: {(1, 4): 1}, 2: {(3, 4): 1}, 3: {(2, 4): 1}})


def n1_group(field: Field) -> LinearDeltaGroup:
    return _group(field, 3, {1: {(2, 3): 1}})


def n2_group(field: Field) -> LinearDeltaGroup:
    return _group(field, 3, {1: {(2, 3): 1}, 2: {(1, 3): -1}})


def n3_group(lam, field: Field) -> LinearDeltaGroup:
    lam = field(lam)
    if not lam:
        raise BadParams("N3 needs lambda != 0")
    return _group(field, 3, {1: {(1, 3): 1}, 2: {(1, 3): 1, (2, 3): lam}})


# -- Hegedus' non-linear example ------------------------------------------------

def hegedus_matrices(n: int, p: int) -> tuple[Matrix, Matrix]:
    """(A, J) of size n-1 over F_p."""
    f = Field(p)
    A3 = [[1, 2, -2], [0, 1, -2], [0, 0, 1]]
    J3 = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]
    I = Matrix.identity(f, n - 4) if n > 4 else None
    A = Matrix(f, A3)
    J = Matrix(f, J3)
    if I is not None:
        A = Matrix.diag_blocks([A, I])
        J = Matrix.diag_blocks([J, I])
    return A, J


def hegedus(n: int, p: int) -> list[Matrix]:
    """The p^n matrices [[1, v, h + vJv^T/2], [0, A^h, A^h J v^T], [0, 0, 1]]."""
    if n < 4 or p % 2 == 0 or p < 3:
        raise BadParams("need n >= 4 and p an odd prime")
    f = Field(p)
    A, J = hegedus_matrices(n, p)
    half = f.inv(2)
    powers = [A ** h for h in range(p)]
    out = []
    for h in range(p):
        Ah = powers[h]
        AhJ = Ah @ J
        for v in f.vectors(n - 1):
            vJv = sum(v[i] * J.rows[i][j] * v[j] for i in range(n - 1) for j in range(n - 1))
            col = [sum(AhJ.rows[i][j] * v[j] for j in range(n - 1)) for i in range(n - 1)]
            rows = [[1, *v, h + vJv * half]]
            for i in range(n - 1):
                rows.append([0, *Ah.rows[i], col[i]])
            rows.append([0] * n + [1])
            out.append(Matrix(f, rows))
    return out


# -- labels ---------------------------------------------------------------------

_FAMILY_ARITY = {
    "S": None, "S#": None, "R": 1, "U1^3": 0, "U1^4": 0, "U2^4": 0, "N1": 0, "N2": 0,
    "N3": 1, "R2": 2, "R3": 3, "R221": 1, "U1^3xS(1)": 0, "Tr": 0, "V": 4,
}


@dataclass(frozen=True)
class RepLabel:
    """A named representative.

    ``name`` is one of S, S#, R (=R_alpha), U1^3, U1^4, U2^4, N1, N2, N3,
    R2 (=R(a,b)), R3 (=R(a,b,c)), R221 (=R(alpha) of the J2J2J1 case),
    U1^3xS(1), Tr, V.  For S and S# ``params`` holds the partition.
    """

    name: str
    params: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "params", tuple(self.params))
        if self.name not in _FAMILY_ARITY:
            raise BadLabel(f"unknown family {self.name!r}")
        arity = _FAMILY_ARITY[self.name]
        if arity is not None and len(self.params) != arity:
            raise BadLabel(f"{self.name} takes {arity} parameters, got {len(self.params)}")

    def __str__(self) -> str:
        ps = ",".join(_fmt(x) for x in self.params)
        if self.name in ("S", "S#", "V"):
            return f"{self.name}({ps})"
        if self.name in ("R2", "R3"):
            return f"R({ps})"
        if self.name == "R":
            return f"R[a={ps}]"
        if self.name == "N3":
            return f"N3[l={ps}]"
        if self.name == "R221":
            return f"R221[a={ps}]"
        return self.name

    @classmethod
    def parse(cls, s: str) -> "RepLabel":
        s = s.strip().replace(" ", "")
        if s.lower() in ("tr", "translations"):
            return cls("Tr")
        if s in ("U1^3", "U1^4", "U2^4", "N1", "N2", "U1^3xS(1)"):
            return cls(s)
        m = re.fullmatch(r"(S#?|V|R)\(([^()]*)\)", s)
        if m:
            name, body = m.groups()
            vals = tuple(_num(x) for x in body.split(",")) if body else ()
            if name == "R":
                name = {2: "R2", 3: "R3"}.get(len(vals))
                if name is None:
                    raise BadLabel(f"R(...) takes 2 or 3 parameters: {s}")
            return cls(name, vals)
        m = re.fullmatch(r"(R|N3|R221)\[(?:a|l)=([^\]]+)\]", s)
        if m:
            return cls(m.group(1), (_num(m.group(2)),))
        raise BadLabel(f"cannot parse label {s!r}")

    def build(self, n: int | None, field: Field) -> LinearDeltaGroup:
        return representative(self, n, field)


def _num(x: str):
    x = x.strip()
    fr = Fraction(x)
    return fr.numerator if fr.denominator == 1 else fr


def _fmt(x) -> str:
    return str(x)


def _need_char(field: Field, ok: bool, what: str):
    if not ok:
        raise CharMismatch(f"{what} is not available in characteristic {field.characteristic()}")


def representative(label: RepLabel | str, n: int | None, field: Field) -> LinearDeltaGroup:
    """Build the group for a label; ``n`` is checked when given."""
    if isinstance(label, str):
        label = RepLabel.parse(label)
    name, ps = label.name, label.params
    char = field.characteristic()
    if name == "S":
        g = s_lambda(Partition(ps), field)
    elif name == "S#":
        g = s_sharp(Partition(ps, sharp=True), field)
    elif name == "Tr":
        if n is None:
            raise BadLabel("Tr needs n")
        g = LinearDeltaGroup.translations(field, n)
    elif name == "R":
        if n is None:
            raise BadLabel("R[a=...] needs n")
        g = r_alpha(n, ps[0], field)
    elif name == "U1^3":
        _need_char(field, char == 2, "U1^3")
        g = u13(field)
    elif name == "U1^3xS(1)":
        _need_char(field, char == 2, "U1^3 x S(1)")
        g = r_221(0, field)
    elif name == "U1^4":
        g = u14(field)
    elif name == "U2^4":
        g = u24(field)
    elif name == "N1":
        g = n1_group(field)
    elif name == "N2":
        _need_char(field, char != 2, "N2")
        g = n2_group(field)
    elif name == "N3":
        g = n3_group(ps[0], field)
    elif name == "R2":
        g = r_ab(*ps, field)
    elif name == "R3":
        g = r_abg(*ps, field)
    elif name == "R221":
        g = r_221(ps[0], field)
    elif name == "V":
        g = v_group(*ps, field)
    else:  # pragma: no cover - guarded by RepLabel
        raise BadLabel(name)
    if n is not None and g.n != n:
        raise BadLabel(f"{label} lives in AGL_{g.n}, not AGL_{n}")
    return g


# -- rendering ------------------------------------------------------------------

def render(g: LinearDeltaGroup) -> str:
    """mu(x_1, ..., x_n) with entries written as linear forms, one row per line."""
    n = g.n
    f = g.field
    cells = [["1"] + [f"x{i}" for i in range(1, n + 1)]]
    for r in range(n):
        row = ["0"]
        for c in range(n):
            terms = []
            if r == c:
                terms.append("1")
            for k, d in enumerate(g.delta, start=1):
                a = d.rows[r][c]
                if a:
                    terms.append(_term(a, f"x{k}", f))
            row.append("+".join(terms).replace("+-", "-") if terms else "0")
        cells.append(row)
    w = max(len(x) for r in cells for x in r)
    return "\n".join(" ".join(x.rjust(w) for x in r) for r in cells)


def _term(a, var: str, f: Field) -> str:
    if f.p:
        if a == 1:
            return var
        if a == f.p - 1:
            return "-" + var
        return f"{a}{var}"
    if a == 1:
        return var
    if a == -1:
        return "-" + var
    return f"{a}{var}"
