"""Exhaustive census of linear-delta regular subgroups over tiny prime fields.

Candidates are lists of strictly upper triangular D_1..D_n (every unipotent
group is conjugate into that shape).  Survivors of the group condition are
bucketed into orbits of GL_n(F_p) acting by D'_j = sum_i (P^-1)_{ji} P^-1 D_i P.
"""

from __future__ import annotations

import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import numpy as np

from .affine import LinearDeltaGroup
from .algebra import BudgetExceeded, are_isomorphic_bruteforce, from_delta
from .classifier import ClassReport, OutOfScope, Unclassified, catalog_labels, classify
from .linalg import Field, Matrix
from .standard import representative

MAX_CANDIDATES = 10 ** 8


def _upper_positions(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


@lru_cache(maxsize=None)
def _strict_upper(n: int, p: int) -> np.ndarray:
    """All strictly upper triangular n x n matrices over F_p, shape (p^m, n, n)."""
    pos = _upper_positions(n)
    vals = np.array(list(itertools.product(range(p), repeat=len(pos))), dtype=np.int64).reshape(-1, len(pos))
    out = np.zeros((vals.shape[0], n, n), dtype=np.int64)
    for c, (i, j) in enumerate(pos):
        out[:, i, j] = vals[:, c]
    return out


def _level_filter(X: np.ndarray, i: int, fixed: dict, p: int, abelian_only: bool) -> np.ndarray:
    """Mask over candidates X for D_i, given D_k (k > i) in ``fixed``.

    Checks the group condition on pairs (i, i), (i, b), (b, i) for b > i:
    D_a D_b = sum_k (D_b)[a, k] D_k.
    """
    n = X.shape[1]
    later = sorted(fixed)
    ok = np.ones(X.shape[0], dtype=bool)

    def combo(coeffs):  # coeffs: (C, n) indexed by k; only k > i contribute
        acc = np.zeros((coeffs.shape[0], n, n), dtype=np.int64)
        for k in later:
            acc += coeffs[:, k, None, None] * fixed[k][None]
        return acc

    ok &= np.all((np.einsum("cab,cbd->cad", X, X) - combo(X[:, i, :])) % p == 0, axis=(1, 2))
    for b in later:
        Fb = fixed[b]
        lhs = np.einsum("cab,bd->cad", X, Fb)
        rhs = sum((Fb[i, k] * fixed[k] for k in later), np.zeros((n, n), dtype=np.int64))
        ok &= np.all((lhs - rhs[None]) % p == 0, axis=(1, 2))
        lhs = np.einsum("ab,cbd->cad", Fb, X)
        ok &= np.all((lhs - combo(X[:, b, :])) % p == 0, axis=(1, 2))
        if abelian_only:
            ok &= np.all((X[:, b, :] - Fb[i][None]) % p == 0, axis=1)
    return ok


def _extend(n: int, p: int, fixed: dict, i: int, abelian_only: bool, out: list):
    if i < 0:
        out.append(tuple(fixed[k] for k in range(n)))
        return
    X = _strict_upper(n, p)
    mask = _level_filter(X, i, fixed, p, abelian_only)
    for cand in X[mask]:
        fixed[i] = cand
        _extend(n, p, fixed, i - 1, abelian_only, out)
        del fixed[i]


def _branch(args) -> list[tuple]:
    n, p, last_index, abelian_only = args
    X = _strict_upper(n, p)
    last = X[last_index]
    if not np.all((last @ last) % p == 0):
        return []
    out: list = []
    _extend(n, p, {n - 1: last}, n - 2, abelian_only, out)
    return [tuple(tuple(int(x) for x in D.flatten()) for D in dl) for dl in out]


def _check_budget(n: int, p: int):
    if p not in (2, 3):
        raise BudgetExceeded(f"census is limited to p in (2, 3), got p={p}")
    if n < 1 or n > 4:
        raise BudgetExceeded(f"census is limited to 1 <= n <= 4, got n={n}")
    total = p ** (n * n * (n - 1) // 2)
    if total > MAX_CANDIDATES:
        raise BudgetExceeded(f"{total} candidates for n={n}, p={p} exceeds {MAX_CANDIDATES}")


def enumerate_groups(n: int, p: int, abelian_only: bool = False, jobs: int = 1) -> list[LinearDeltaGroup]:
    """Every strictly upper triangular D-list over F_p satisfying the group condition."""
    _check_budget(n, p)
    f = Field(p)
    if n == 1:
        return [LinearDeltaGroup.translations(f, 1)]
    tasks = [(n, p, idx, abelian_only) for idx in range(_strict_upper(n, p).shape[0])]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            chunks = list(ex.map(_branch, tasks, chunksize=4))
    else:
        chunks = [_branch(t) for t in tasks]
    flat = sorted(dl for chunk in chunks for dl in chunk)
    return [_group_from_flat(f, n, dl) for dl in flat]


def _group_from_flat(f: Field, n: int, dl) -> LinearDeltaGroup:
    return LinearDeltaGroup(n, f, tuple(Matrix(f, [D[r * n:(r + 1) * n] for r in range(n)]) for D in dl))


# -- orbits -------------------------------------------------------------------

@lru_cache(maxsize=None)
def gl_group(n: int, p: int) -> tuple[np.ndarray, np.ndarray]:
    """All of GL_n(F_p) and the matching inverses, shape (|GL|, n, n) each."""
    allm = np.array(list(itertools.product(range(p), repeat=n * n)), dtype=np.int64).reshape(-1, n, n)
    det = np.rint(np.linalg.det(allm.astype(float))).astype(np.int64)
    keep = det % p != 0
    P = allm[keep]
    det = det[keep]
    # adjugate = det * inverse, exact after rounding for these tiny entries
    adj = np.rint(np.linalg.inv(P.astype(float)) * det[:, None, None]).astype(np.int64)
    dinv = np.array([pow(int(d) % p, -1, p) for d in det], dtype=np.int64)
    Q = (adj * dinv[:, None, None]) % p
    assert np.all(np.einsum("gab,gbc->gac", P, Q) % p == np.eye(n, dtype=np.int64))
    return P, Q


def orbit(dlist: np.ndarray, p: int) -> np.ndarray:
    """Distinct images of a D-list (shape (n, n, n)) under GL_n(F_p), rows sorted."""
    n = dlist.shape[0]
    P, Q = gl_group(n, p)
    T = np.einsum("gab,ibc,gcd->giad", Q, dlist, P) % p
    D2 = np.einsum("gji,giad->gjad", Q, T) % p
    flat = D2.reshape(D2.shape[0], -1)
    return np.unique(flat, axis=0)


@dataclass
class CensusClass:
    canonical: LinearDeltaGroup
    size: int
    report: ClassReport | None
    abelian: bool
    note: str | None = None

    def to_json(self) -> dict:
        return {"canonical": self.canonical.to_json(), "size": self.size,
                "report": self.report.to_json() if self.report else None,
                "abelian": self.abelian, "note": self.note}

    @classmethod
    def from_json(cls, d: dict) -> "CensusClass":
        rep = ClassReport.from_json(d["report"]) if d.get("report") else None
        return cls(LinearDeltaGroup.from_json(d["canonical"]), d["size"], rep, d["abelian"], d.get("note"))


@dataclass
class CensusReport:
    n: int
    p: int
    abelian_only: bool
    total_groups: int
    classes: list = dc_field(default_factory=list)

    @property
    def abelian_count(self) -> int:
        return sum(1 for c in self.classes if c.abelian)

    @property
    def nonabelian_count(self) -> int:
        return len(self.classes) - self.abelian_count

    def labels(self) -> list[str]:
        return [str(c.report.label) if c.report else "?" for c in self.classes]

    def to_json(self) -> dict:
        return {"n": self.n, "p": self.p, "abelian_only": self.abelian_only,
                "total_groups": self.total_groups, "class_count": len(self.classes),
                "abelian_count": self.abelian_count, "nonabelian_count": self.nonabelian_count,
                "classes": [c.to_json() for c in self.classes]}

    @classmethod
    def from_json(cls, d: dict) -> "CensusReport":
        return cls(d["n"], d["p"], d["abelian_only"], d["total_groups"],
                   [CensusClass.from_json(c) for c in d["classes"]])

    def summary(self) -> dict:
        return {"n": self.n, "p": self.p, "abelian_only": self.abelian_only,
                "total_groups": self.total_groups, "classes": len(self.classes),
                "abelian": self.abelian_count, "nonabelian": self.nonabelian_count,
                "labels": sorted(self.labels())}


def _to_array(g: LinearDeltaGroup) -> np.ndarray:
    return np.array([D.rows for D in g.delta], dtype=np.int64)


def bucket_conjugacy(groups: list[LinearDeltaGroup], p: int, classify_classes: bool = True) -> CensusReport:
    """Partition groups into GL_n(F_p) orbits; canonical = lexicographically least D-list."""
    if not groups:
        raise ValueError("no groups to bucket")
    n = groups[0].n
    if any(g.n != n or g.field.p != p for g in groups):
        raise ValueError("all groups must share n and p")
    f = Field(p)
    index = {tuple(_to_array(g).flatten().tolist()): g for g in groups}
    seen: set = set()
    classes = []
    for key in sorted(index):
        if key in seen:
            continue
        orb = orbit(np.array(key, dtype=np.int64).reshape(n, n, n), p)
        members = [k for k in map(lambda r: tuple(r.tolist()), orb) if k in index]
        seen.update(members)
        canon = _group_from_flat(f, n, [orb[0][i * n * n:(i + 1) * n * n].tolist() for i in range(n)])
        abelian = all(canon.delta[j].rows[i] == canon.delta[i].rows[j] for i in range(n) for j in range(n))
        report, note = None, None
        if classify_classes:
            try:
                report = classify(canon)
            except (OutOfScope, Unclassified) as exc:
                note = f"unclassified: {exc}"
        classes.append(CensusClass(canon, len(members), report, abelian, note))
    classes.sort(key=lambda c: tuple(x for D in c.canonical.delta for r in D.rows for x in r))
    report = CensusReport(n, p, False, sum(c.size for c in classes), classes)
    assert report.total_groups == len(groups)
    return report


def run_census(n: int, p: int, abelian_only: bool = False, jobs: int = 1) -> CensusReport:
    groups = enumerate_groups(n, p, abelian_only, jobs)
    rep = bucket_conjugacy(groups, p)
    rep.abelian_only = abelian_only
    return rep


# -- cross-checking --------------------------------------------------------------

@dataclass(frozen=True)
class Discrepancy:
    kind: str      # unmatched-class | multi-match | missing-label | duplicate-label | extra
    detail: str

    @property
    def is_failure(self) -> bool:
        return self.kind != "extra"


def cross_check(report: CensusReport, catalog: list[str] | None = None) -> list[Discrepancy]:
    """Match census classes against catalog labels with the isomorphism oracle.

    Classes that match no catalog label but carry a caveated family label
    (outside the tables' field hypothesis) come back as kind "extra".
    """
    f = Field(report.p)
    n = report.n
    if catalog is None:
        catalog = catalog_labels(n, f)
    if report.abelian_only:
        catalog = [s for s in catalog if _label_abelian(s, n, f)]
    reps = {s: from_delta(representative(s, n, f)) for s in catalog}
    hits: dict = {s: [] for s in catalog}
    out = []
    for ci, cls in enumerate(report.classes):
        alg = from_delta(cls.canonical)
        matched = [s for s, ra in reps.items() if are_isomorphic_bruteforce(alg, ra) is not None]
        for s in matched:
            hits[s].append(ci)
        if not matched:
            if cls.report is not None and cls.report.caveat:
                out.append(Discrepancy("extra", f"class {ci}: {cls.report.label} ({cls.report.caveat})"))
            else:
                label = cls.report.label if cls.report else "?"
                out.append(Discrepancy("unmatched-class", f"class {ci} ({label}) matches no catalog label"))
        elif len(matched) > 1:
            out.append(Discrepancy("multi-match", f"class {ci} matches {matched}"))
    for s, cis in hits.items():
        if not cis:
            out.append(Discrepancy("missing-label", f"{s} matches no census class"))
        elif len(cis) > 1:
            out.append(Discrepancy("duplicate-label", f"{s} matches classes {cis}"))
    return out


def _label_abelian(s: str, n: int, f: Field) -> bool:
    g = representative(s, n, f)
    return all(g.delta[j].rows[i] == g.delta[i].rows[j] for i in range(n) for j in range(n))


# -- fixtures ---------------------------------------------------------------------

FIXTURE_CASES = [(1, 2, False), (1, 3, False), (2, 2, False), (2, 3, False),
                 (3, 2, False), (3, 3, False), (4, 2, True)]


def fixture_name(n: int, p: int, abelian_only: bool) -> str:
    return f"census_n{n}_p{p}{'_abelian' if abelian_only else ''}.json"


def fixture_dir() -> Path:
    return Path(str(resources.files("regaffine") / "fixtures"))


def load_fixture(n: int, p: int, abelian_only: bool) -> dict | None:
    path = fixture_dir() / fixture_name(n, p, abelian_only)
    if not path.exists():
        return None
    return json.loads(path.read_text())


def compare_to_fixture(report: CensusReport, fixture: dict) -> list[str]:
    got = report.summary()
    return [f"{k}: census {got[k]!r} != fixture {fixture[k]!r}"
            for k in ("total_groups", "classes", "abelian", "nonabelian", "labels") if got[k] != fixture.get(k)]
