import re

import pytest

from regaffine.algebra import PresentationCheck, check_presentation, from_delta
from regaffine.linalg import Field
from regaffine.presentations import all_cases, table_rows

TAGS = {"Psilam", "Psimu", "eq:U0", "eq:Ualpha", "eq:Ualpha-odd", "eq:22", "eq:32-1", "eq:32-2",
        "eq:32-3", "eq:32-4", "eq:k1-3", "eq:k1-2", "eq:k2-1", "eq:221"}


def tags_of(cases):
    return {m for c in cases for m in re.findall(r"Psilam|Psimu|eq:[A-Za-z0-9-]+", c.name)}


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_every_case_holds(p):
    bad = []
    for case in all_cases(Field(p)):
        rep = case.run()
        if not (rep.relations_vanish and rep.generates and rep.kernel_equal):
            bad.append((case.name, rep))
    assert bad == []


def test_all_assignment_tags_exercised():
    seen = set()
    for p in (2, 3, 5):
        seen |= tags_of(all_cases(Field(p)))
    assert TAGS <= seen, TAGS - seen


@pytest.mark.parametrize("p", [2, 3, 5])
def test_table_rows_cover_abelian_catalog(p):
    f = Field(p)
    rows = table_rows(f)
    # 2 + 5 + 5 + 6 rows in char 2 (with U1^3 and U1^3 x S(1)); odd p adds one R_lambda row
    names = " ".join(c.name for c in rows)
    for must in ["S(3,)", "S(2, 1)", "S(4,)", "S(2, 1, 1)", "S(5,)", "S#(3, 2)", "U1^4", "U2^4",
                 "S(4, 1)", "S(3, 2)", "S(3, 1, 1)", "S#(2, 2, 1)", "S(2, 1, 1, 1)", "R_1"]:
        assert must in names, must
    if p == 2:
        assert "U1^3" in names and "eq:221" in names
    else:
        assert "R_2" in names


@pytest.mark.parametrize("p", [2, 3, 5])
def test_dropping_a_relation_breaks_kernel_equality(p):
    for case in table_rows(Field(p)):
        rels = case.check.relations
        if len(rels) < 2 or any(r.startswith("<") for r in rels):
            continue
        weaker = PresentationCheck(case.check.gens, rels[:-1], case.check.commutative)
        rep = check_presentation(from_delta(case.group), weaker)
        assert not rep.kernel_equal, case.name


@pytest.mark.parametrize("p", [2, 3, 5])
def test_zero_generator_is_detected(p):
    f = Field(p)
    for case in table_rows(f):
        g = case.group
        name0 = next(iter(case.check.gens))
        moved = dict(case.check.gens, **{name0: (f.zero,) * g.n})
        rep = check_presentation(from_delta(g), PresentationCheck(moved, case.check.relations,
                                                                 case.check.commutative))
        assert not rep.generates and not rep.ok, case.name
