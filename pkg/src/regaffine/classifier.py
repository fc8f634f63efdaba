"""Decision tree from a linear-delta group (n <= 4) to a named representative."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .affine import LinearDeltaGroup, check_group_condition, is_abelian
from .algebra import NotAGroup, are_isomorphic_bruteforce, fingerprint, from_delta
from .invariants import (InvariantProfile, profile, square_class, square_class_rep, square_transversal,
                         top_form)
from .linalg import Field
from .standard import CharMismatch, RepLabel, representative


class OutOfScope(ValueError):
    pass


class Unclassified(RuntimeError):
    pass


@dataclass(frozen=True)
class ClassReport:
    label: RepLabel
    profile: InvariantProfile | None
    caveat: str | None = None

    def to_json(self) -> dict:
        return {"label": str(self.label),
                "profile": self.profile.to_json() if self.profile else None,
                "caveat": self.caveat}

    @classmethod
    def from_json(cls, d: dict) -> "ClassReport":
        prof = InvariantProfile.from_json(d["profile"]) if d.get("profile") else None
        return cls(RepLabel.parse(d["label"]), prof, d.get("caveat"))


N4_CAVEAT = "F_p has quadratic extensions: table completeness is not guaranteed"


def catalog_labels(n: int, field: Field) -> list[str]:
    char = field.characteristic()
    if n == 1:
        return ["S(2)"]
    if n == 2:
        return ["S(3)", "S(2,1)"]
    if n == 3:
        trans = square_transversal(field) if field.is_finite else [1]
        labels = ["S(4)", "S(3,1)"] + [f"R[a={a}]" for a in trans]
        if char == 2:
            labels.append("U1^3")
        labels.append("S(2,1,1)")
        labels.append("N1")
        if char != 2:
            labels.append("N2")
        lams = range(1, field.p) if field.is_finite else [1]
        labels += [f"N3[l={l}]" for l in lams]
        return labels
    if n == 4:
        labels = ["S(5)", "S#(3,2)", "U1^4", "U2^4", "S(4,1)", "S(3,2)", "S(3,1,1)", "S#(2,2,1)"]
        if char == 2:
            labels.append("U1^3xS(1)")
        labels.append("S(2,1,1,1)")
        return labels
    raise OutOfScope(f"no table for n={n}")


def table_catalog(n: int, field: Field) -> list[ClassReport]:
    """Table representatives valid for (n, char F), with their profiles over F_p."""
    out = []
    for s in catalog_labels(n, field):
        g = representative(s, n, field)
        prof = profile(g) if field.is_finite else None
        caveat = None
        if n == 4 and field.is_finite:
            caveat = N4_CAVEAT
        elif not field.is_finite and s in ("R[a=1]", "N3[l=1]"):
            caveat = "parameter family over Q: one entry shown per family"
        out.append(ClassReport(RepLabel.parse(s), prof, caveat))
    return out


@lru_cache(maxsize=None)
def _catalog_fingerprints(n: int, field: Field) -> tuple:
    return tuple((s, fingerprint(from_delta(representative(s, n, field))))
                 for s in catalog_labels(n, field))


def _oracle_match(g: LinearDeltaGroup, label: str) -> bool:
    rep = representative(label, g.n, g.field)
    return are_isomorphic_bruteforce(from_delta(g), from_delta(rep)) is not None


def _tree_n3(g: LinearDeltaGroup, prof: InvariantProfile) -> str:
    f = g.field
    if prof.dZ == 4:
        return "S(4)"
    if prof.dZ == 3:
        if prof.k == 2:
            return "S(3,1)"
        # symmetric form on J/J^2; its determinant's square class is the parameter
        M = top_form(from_delta(g))
        det = f(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
        return f"R[a={square_class_rep(det, f)}]"
    if prof.rZ == 2:
        return "U1^3"
    if prof.abelian:
        return "S(2,1,1)"
    if prof.k == 2:
        return "N1"
    if prof.d == 2:
        return "N2"
    M = top_form(from_delta(g))
    det = f(M[0, 0] * M[1, 1] - M[0, 1] * M[1, 0])
    skew = f(M[0, 1] - M[1, 0])
    lam = f(det * f.inv(f(skew * skew)))
    return f"N3[l={lam}]"


def _disc_r2(a, b, f: Field):
    return f(a * a + 4 * b)


def _disc_r3(a, b, c, f: Field):
    return f(b * b - a * c)


def _family_caveat(name: str, ps, disc, f: Field) -> str:
    note = f"outside-table-hypothesis: disc={disc}"
    if name == "R2":
        a, b = ps
        if not any(f(t * t + a * t + b) == 0 for t in range(f.p)):
            note += f"; t^2+{a}t+{b} has no root in F{f.p}"
    else:
        note += f"; square class {square_class(disc, f)}"
    return note


def _family_search(g: LinearDeltaGroup) -> ClassReport | None:
    """Look for a member of the R(a,b), R(a,b,c) families isomorphic to g."""
    f = g.field
    alg = from_delta(g)
    fp = fingerprint(alg)
    prof = profile(g)
    fams = [("R2", 2, _disc_r2), ("R3", 3, _disc_r3)]
    for name, arity, disc in fams:
        for ps in itertools.product(range(f.p), repeat=arity):
            lab = RepLabel(name, ps)
            try:
                rep = representative(lab, 4, f)
            except (CharMismatch, ValueError):
                continue
            if not check_group_condition(rep):
                continue
            ra = from_delta(rep)
            if fingerprint(ra) != fp:
                continue
            if are_isomorphic_bruteforce(alg, ra) is not None:
                return ClassReport(lab, prof, _family_caveat(name, ps, disc(*ps, f), f))
    return None


def classify(g: LinearDeltaGroup, verify: bool = True) -> ClassReport:
    """Label of the table representative conjugate to g.

    n <= 3 follows the invariant decision tree (dZ, k, rZ, d, then the
    determinant / cosquare parameter).  n = 4 abelian narrows the table by
    profile and element-signature fingerprint and confirms with the
    isomorphism oracle; groups outside the tables are matched against the
    R(a,b) and R(a,b,c) families and reported with a caveat.
    """
    if not check_group_condition(g):
        raise NotAGroup("delta list violates the group condition")
    n, f = g.n, g.field
    if not f.is_finite:
        raise OutOfScope("classification is implemented over F_p only")
    if n > 4:
        raise OutOfScope(f"n={n} > 4")
    if n == 4 and not is_abelian(g):
        raise OutOfScope("non-abelian groups in AGL_4 are not classified")
    prof = profile(g)
    if n == 1:
        label = "S(2)"
    elif n == 2:
        label = "S(3)" if prof.dZ == 3 else "S(2,1)"
    elif n == 3:
        label = _tree_n3(g, prof)
    else:
        fp = fingerprint(from_delta(g))
        cands = [s for s, cfp in _catalog_fingerprints(n, f) if cfp == fp]
        label = next((s for s in cands if _oracle_match(g, s)), None)
        if label is None:
            rep = _family_search(g)
            if rep is None:
                raise Unclassified("no table or family representative matches")
            return rep
        return ClassReport(RepLabel.parse(label), prof, None)
    if verify and not _oracle_match(g, label):
        raise Unclassified(f"decision tree chose {label} but the oracle disagrees")
    return ClassReport(RepLabel.parse(label), prof, None)
