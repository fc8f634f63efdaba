"""Generator assignments and kernels for every table row, instantiated over F_p.

Each case pairs a group with a PresentationCheck; ``check_presentation`` then
confirms relations vanish, the images generate J, and the quotient by the
stated kernel has the right dimension (so the kernel is exactly as stated).
Parameterised assignments are instantiated for every parameter value over
F_p for which the required roots exist.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .affine import LinearDeltaGroup
from .algebra import PresentationCheck, PresentationReport, check_presentation, from_delta
from .invariants import square_class_rep
from .linalg import Field, nth_root_mod, sqrt_mod
from .standard import (Partition, n1_group, n2_group, n3_group, r_221, r_ab, r_abg, r_alpha,
                       s_lambda, s_sharp, u13, u14, u24)


@dataclass
class PresentationCase:
    name: str          # table row or assignment, e.g. "S(3,2) Psilam" or "eq:32-1 (1,2)"
    group: LinearDeltaGroup
    check: PresentationCheck

    def run(self) -> PresentationReport:
        return check_presentation(from_delta(self.group), self.check)


def _vec(field: Field, n: int, terms: dict) -> tuple:
    """Coordinates of sum c X_i for terms {i: c} (1-based)."""
    v = [field.zero] * n
    for i, c in terms.items():
        v[i - 1] = field(v[i - 1] + field(c))
    return tuple(v)


def _gens(field: Field, n: int, *assignments: dict) -> dict:
    return {f"t{i}": _vec(field, n, a) for i, a in enumerate(assignments, start=1)}


def _block_starts(dims) -> list[int]:
    starts, s = [], 1
    for m in dims:
        starts.append(s)
        s += m
    return starts


def _pairwise_products(s: int) -> list[str]:
    return [f"t{i} t{j}" for i in range(1, s + 1) for j in range(i + 1, s + 1)]


def psi_lambda(parts, field: Field) -> PresentationCase:
    """S_lambda with t_i -> X of the first coordinate of block i."""
    lam = Partition(tuple(parts))
    dims = [lam.parts[0] - 1] + list(lam.parts[1:])
    g = s_lambda(lam, field)
    starts = _block_starts(dims)
    gens = _gens(field, g.n, *({st: 1} for st in starts))
    rels = [f"t{i}^{m + 1}" for i, m in enumerate(dims, start=1)] + _pairwise_products(len(dims))
    return PresentationCase(f"S{tuple(parts)} Psilam", g, PresentationCheck(gens, rels))


def psi_mu(parts, field: Field) -> PresentationCase:
    """S#_mu with t_i -> X of the first coordinate of block i."""
    mu_ = Partition(tuple(parts), sharp=True)
    n1, n2 = mu_.parts[0] - 1, mu_.parts[1]
    dims = [n1, n2] + list(mu_.parts[2:])
    g = s_sharp(mu_, field)
    starts = _block_starts(dims)
    gens = _gens(field, g.n, *({st: 1} for st in starts))
    rels = [f"t1^{n1 + 1} - t2^{n2}"] + [f"t{i}^{dims[i - 1] + 1}" for i in range(3, len(dims) + 1)]
    rels += _pairwise_products(len(dims))
    return PresentationCase(f"S#{tuple(parts)} Psimu", g, PresentationCheck(gens, rels))


def eq_u0(n: int, field: Field) -> PresentationCase:
    # kernel <t1^n, t2^2, t1 t2>
    g = r_alpha(n, 0, field)
    gens = _gens(field, n, {1: 1}, {n - 1: 1})
    return PresentationCase(f"R_0 n={n} eq:U0", g, PresentationCheck(gens, [f"t1^{n}", "t2^2", "t1 t2"]))


def eq_ualpha(n: int, alpha: int, field: Field) -> PresentationCase | None:
    if n % 2 == 1:
        return None
    a = field(alpha)
    g = r_alpha(n, a, field)
    gens = _gens(field, n, {1: a}, {n - 1: field(a ** ((n - 2) // 2))})
    rels = [f"t1^{n - 1} - t2^2", "t1 t2"]
    return PresentationCase(f"R_{alpha} n={n} eq:Ualpha", g, PresentationCheck(gens, rels))


def eq_ualpha_odd(n: int, alpha: int, field: Field) -> PresentationCase | None:
    if n % 2 == 0:
        return None
    a = field(alpha)
    lam = square_class_rep(a, field)
    eps = sqrt_mod(a * field.inv(lam), field.p)
    g = r_alpha(n, a, field)
    gens = _gens(field, n, {1: a}, {n - 1: field(lam ** ((n - 3) // 2) * eps ** (n - 2))})
    rels = [f"t1^{n - 1} - {lam} t2^2", "t1 t2"]
    return PresentationCase(f"R_{alpha} n={n} eq:Ualpha-odd", g, PresentationCheck(gens, rels))


def eq_22(field: Field) -> PresentationCase:
    g = u13(field)
    return PresentationCase("U1^3 eq:22", g, PresentationCheck(_gens(field, 3, {1: 1}, {2: 1}), ["t1^2", "t2^2"]))


_K32 = ["t1^3", "t2^3", "t1 t2"]
_K32B = ["t1^3", "t1^2 t2", "t2^2"]


def eq_32(alpha: int, beta: int, field: Field) -> PresentationCase | None:
    """R(alpha, beta) with the assignment matching char F and alpha^2 + 4 beta."""
    f = field
    a, b = f(alpha), f(beta)
    g = r_ab(a, b, f)
    disc = f(a * a + 4 * b)
    if f.p != 2:
        if disc:
            s = sqrt_mod(disc, f.p)
            if s is None:
                return None
            gens = _gens(f, 4, {1: a + s, 3: -2}, {1: a - s, 3: -2})
            return PresentationCase(f"R({alpha},{beta}) eq:32-1", g, PresentationCheck(gens, _K32))
        gens = _gens(f, 4, {1: 1}, {1: a, 3: -2})
        return PresentationCase(f"R({alpha},{beta}) eq:32-3", g, PresentationCheck(gens, _K32B))
    if disc:
        r = next((x for x in range(f.p) if f(x * x + a * x + b) == 0), None)
        if r is None:
            return None
        gens = _gens(f, 4, {1: r, 3: 1}, {1: r + a, 3: 1})
        return PresentationCase(f"R({alpha},{beta}) eq:32-2", g, PresentationCheck(gens, _K32))
    gens = _gens(f, 4, {1: 1}, {1: sqrt_mod(b, f.p), 3: 1})
    return PresentationCase(f"R({alpha},{beta}) eq:32-4", g, PresentationCheck(gens, _K32B))


_KK1 = ["t1^2 - t2 t3", "t2^2", "t3^2", "t1 t2", "t1 t3"]
_KK2 = ["t1^2 - t2^2", "t3^2", "t1 t2", "t1 t3", "t2 t3"]


def eq_k(alpha: int, beta: int, gamma: int, field: Field) -> PresentationCase | None:
    """R(alpha, beta, gamma) with the assignment for its Delta = beta^2 - alpha gamma."""
    f = field
    a, b, c = f(alpha), f(beta), f(gamma)
    g = r_abg(a, b, c, f)
    delta = f(b * b - a * c)
    tag = f"R({alpha},{beta},{gamma})"
    if delta:
        if f.p != 2:
            sd = sqrt_mod(delta, f.p)
            if sd is None:
                return None
            inv2d = f.inv(f(2 * delta))
            if a:
                gens = _gens(f, 4, {1: 1}, {3: (b + sd) * inv2d, 4: -a * inv2d}, {3: (-b + sd) * f.inv(a), 4: 1})
            else:
                gens = _gens(f, 4, {1: b}, {3: -c * f.inv(2), 4: b}, {3: 1})
            return PresentationCase(f"{tag} eq:k1-3", g, PresentationCheck(gens, _KK1))
        q = nth_root_mod(delta, 4, f.p)
        sa, sc = sqrt_mod(a, f.p), sqrt_mod(c, f.p)
        if q is None or sa is None or sc is None:
            return None
        qi = f.inv(q)
        gens = _gens(f, 4, {1: q, 3: sc * qi, 4: sa * qi}, {1: sa, 3: 1}, {1: sc, 4: 1})
        return PresentationCase(f"{tag} eq:k1-2", g, PresentationCheck(gens, _KK1))
    if not (a or b or c):
        return None
    if a:
        sa = sqrt_mod(a, f.p)
        if sa is None:
            return None
        gens = _gens(f, 4, {1: 1}, {3: -(b * sa + 1) * f.inv(sa), 4: a}, {3: -b, 4: a})
    else:
        sc = sqrt_mod(c, f.p)
        if sc is None:
            return None
        gens = _gens(f, 4, {1: sc}, {4: 1}, {3: 1})
    return PresentationCase(f"{tag} eq:k2-1", g, PresentationCheck(gens, _KK2))


def eq_221(alpha: int, field: Field) -> PresentationCase:
    a = field(alpha)
    g = r_221(a, field)
    gens = _gens(field, 4, {1: 1}, {2: 1}, {1: a, 4: 1})
    rels = ["t1^2", "t2^2", "t3^2", "t1 t3", "t2 t3"]
    return PresentationCase(f"R221({alpha}) eq:221", g, PresentationCheck(gens, rels))


def nonabelian_cases(field: Field) -> list[PresentationCase]:
    """Word-mode presentations of the non-abelian algebras in AGL_3."""
    f = field
    gens = _gens(f, 3, {1: 1}, {2: 1})
    out = [PresentationCase("N1 A1", n1_group(f), PresentationCheck(gens, ["t1^2", "t2^2", "t1 t2"], False))]
    if f.p != 2:
        out.append(PresentationCase("N2 A2", n2_group(f),
                                    PresentationCheck(gens, ["t1^2", "t2^2", "t1 t2 + t2 t1"], False)))
    for lam in range(1, f.p):
        out.append(PresentationCase(f"N3[l={lam}] A3", n3_group(lam, f),
                                    PresentationCheck(gens, [f"t2^2 - {lam} t1^2", "t2 t1", "t1^2 - t1 t2"], False)))
    return out


def table_rows(field: Field) -> list[PresentationCase]:
    """One case per row of the four tables valid in char F (first parameter choice)."""
    f = field
    p = f.p
    rows = [psi_lambda((3,), f), psi_lambda((2, 1), f),
            psi_lambda((4,), f), eq_u0(3, f), psi_lambda((3, 1), f)]
    # S(3,1) row also read through its Psilam generators against the eq:U0 kernel
    c = psi_lambda((3, 1), f)
    rows.append(PresentationCase("S(3,1) table kernel", c.group,
                                 PresentationCheck(c.check.gens, ["t1^3", "t2^2", "t1 t2"])))
    rows += [eq_ualpha_odd(3, lam, f) for lam in sorted({square_class_rep(a, f) for a in range(1, p)})]
    if p == 2:
        rows.append(eq_22(f))
    rows.append(psi_lambda((2, 1, 1), f))
    rows += [psi_lambda((5,), f), psi_mu((3, 2), f)]
    u14_case = eq_32(0, 0, f)
    rows.append(PresentationCase("U1^4 " + u14_case.name.split()[-1], u14(f), u14_case.check))
    rows.append(_u24_case(f))
    rows += [psi_lambda((4, 1), f), psi_lambda((3, 2), f), psi_lambda((3, 1, 1), f), psi_mu((2, 2, 1), f)]
    if p == 2:
        rows.append(eq_221(0, f))
    rows.append(psi_lambda((2, 1, 1, 1), f))
    return [r for r in rows if r is not None]


def _u24_case(f: Field) -> PresentationCase:
    # t_i -> X_i: X1^2 = X2 X3 = X_4 and every other product of generators vanishes
    gens = _gens(f, 4, {1: 1}, {2: 1}, {3: 1})
    return PresentationCase("U2^4 table kernel", u24(f), PresentationCheck(gens, _KK1))


def all_cases(field: Field) -> list[PresentationCase]:
    """Table rows plus every parameter instance of the assignment equations over F_p."""
    f = field
    p = f.p
    out = table_rows(f) + nonabelian_cases(f)
    for parts in [(3,), (4,), (5,), (6,), (3, 1), (4, 1), (3, 2), (3, 1, 1), (4, 2), (2, 1, 1, 1)]:
        out.append(psi_lambda(parts, f))
    for parts in [(2, 2), (3, 2), (2, 2, 1), (3, 3), (4, 2)]:
        out.append(psi_mu(parts, f))
    for n in (3, 4, 5):
        out.append(eq_u0(n, f))
    for n in (3, 4, 5):
        for alpha in range(1, p):
            out.append(eq_ualpha(n, alpha, f) or eq_ualpha_odd(n, alpha, f))
    for a, b in itertools.product(range(p), repeat=2):
        out.append(eq_32(a, b, f))
    for a, b, c in itertools.product(range(p), repeat=3):
        out.append(eq_k(a, b, c, f))
    if p == 2:
        out.append(eq_22(f))
        out += [eq_221(a, f) for a in range(p)]
    return [c for c in out if c is not None]
