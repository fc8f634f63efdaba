import itertools

import pytest
from hypothesis import given, settings, strategies as st

from regaffine.affine import LinearDeltaGroup, conjugate_by, is_abelian
from regaffine.algebra import NotAGroup, are_isomorphic_bruteforce, from_delta
from regaffine.classifier import (ClassReport, OutOfScope, catalog_labels, classify, table_catalog)
from regaffine.invariants import profile
from regaffine.linalg import QQ, Field, Matrix
from regaffine.standard import RepLabel, r_ab, representative, s_lambda, v_group

from conftest import catalog_groups, nonsingular

F2, F3, F5, F7 = Field(2), Field(3), Field(5), Field(7)


class TestExamples:
    def test_s4(self):
        assert str(classify(s_lambda((4,), F3)).label) == "S(4)"

    def test_v_group_lambda(self):
        assert str(classify(v_group(1, 1, 0, 2, F5)).label) == "N3[l=2]"

    def test_r10_is_s32(self):
        rep = classify(r_ab(1, 0, F7))
        assert str(rep.label) == "S(3,2)" and rep.caveat is None

    def test_catalog_n2(self):
        assert {str(r.label) for r in table_catalog(2, F5)} == {"S(3)", "S(2,1)"}

    def test_catalog_n3_f2(self):
        labels = catalog_labels(3, F2)
        abelian = {s for s in labels if is_abelian(representative(s, 3, F2))}
        assert abelian == {"S(4)", "S(3,1)", "R[a=1]", "U1^3", "S(2,1,1)"}
        assert set(labels) - abelian == {"N1", "N3[l=1]"}

    def test_catalog_n3_f3_square_classes(self):
        assert {s for s in catalog_labels(3, F3) if s.startswith("R[")} == {"R[a=1]", "R[a=2]"}

    def test_catalog_n4_caveat(self):
        assert all(r.caveat for r in table_catalog(4, F3))

    def test_out_of_scope(self):
        with pytest.raises(OutOfScope):
            classify(s_lambda((6,), F2))
        with pytest.raises(OutOfScope):
            classify(s_lambda((4,), QQ))
        nonab = LinearDeltaGroup(4, F3, (Matrix.unit(F3, 4, 2, 3),) + (Matrix.zero(F3, 4),) * 3)
        assert not is_abelian(nonab)
        with pytest.raises(OutOfScope):
            classify(nonab)

    def test_not_a_group(self):
        bad = LinearDeltaGroup(2, F3, (Matrix.unit(F3, 2, 2, 1), Matrix.zero(F3, 2)))
        with pytest.raises(NotAGroup):
            classify(bad)

    def test_outside_table_family_has_caveat(self):
        # t^2 + t + 1 is irreducible over F_2, so R(1,1) is not conjugate to a listed representative
        rep = classify(r_ab(1, 1, F2))
        assert str(rep.label) == "R(1,1)"
        assert rep.caveat and rep.caveat.startswith("outside-table-hypothesis")
        for s in catalog_labels(4, F2):
            assert are_isomorphic_bruteforce(from_delta(r_ab(1, 1, F2)),
                                             from_delta(representative(s, 4, F2))) is None

    def test_report_json(self):
        rep = classify(v_group(1, 1, 0, 2, F5))
        back = ClassReport.from_json(rep.to_json())
        assert back.to_json() == rep.to_json() and back.label == rep.label
        assert set(rep.to_json()) == {"label", "profile", "caveat"}


CASES = [(n, p, s) for p in (2, 3, 5) for n in (1, 2, 3, 4) for s in catalog_labels(n, Field(p))]


@pytest.mark.parametrize("n,p,label", CASES, ids=[f"{s}-n{n}-F{p}" for n, p, s in CASES])
def test_classify_representative_returns_own_label(n, p, label):
    rep = classify(representative(label, n, Field(p)))
    assert str(rep.label) == label
    assert rep.caveat is None


@pytest.mark.parametrize("n,p", [(n, p) for p in (2, 3, 5) for n in (2, 3, 4)])
def test_catalog_entries_pairwise_distinct(n, p):
    f = Field(p)
    entries = catalog_groups(n, p)
    for (s, g), (t, h) in itertools.combinations(entries, 2):
        if profile(g).key() != profile(h).key():
            continue
        assert are_isomorphic_bruteforce(from_delta(g), from_delta(h)) is None, (s, t)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_nonabelian_catalog_count(p):
    f = Field(p)
    nonab = [s for s in catalog_labels(3, f) if not is_abelian(representative(s, 3, f))]
    assert len(nonab) == (p if p == 2 else p + 1)


@settings(max_examples=30)
@given(st.sampled_from([(n, p) for p in (2, 3, 5) for n in (2, 3)] + [(4, 2), (4, 3)]), st.data())
def test_classify_conjugation_invariant(case, data):
    n, p = case
    f = Field(p)
    label, g = data.draw(st.sampled_from(catalog_groups(n, p)))
    P = data.draw(nonsingular(f, n))
    assert classify(conjugate_by(g, P)).label == RepLabel.parse(label)


@pytest.mark.parametrize("a", [1, 2, 3, 4])
def test_r_alpha_square_class_normalised(a):
    rep = classify(representative(f"R[a={a}]", 3, F5))
    assert str(rep.label) == ("R[a=1]" if a in (1, 4) else "R[a=2]")
