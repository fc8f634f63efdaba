import itertools
import random

import pytest
from hypothesis import given, strategies as st

from regaffine.affine import LinearDeltaGroup, check_group_condition, conjugate_by
from regaffine.algebra import (BudgetExceeded, NilpotentAlgebra, NotAGroup, NotAssociative,
                               NotNilpotentAlgebra, PresentationCheck, are_isomorphic_bruteforce,
                               check_presentation, eval_presentation, fingerprint, from_delta,
                               is_isomorphism, parse_polynomial, quotient_algebra, quotient_dim, to_delta,
                               transport)
from regaffine.linalg import QQ, Field, Matrix, mat_rank
from regaffine.standard import n2_group, r_alpha, representative, s_lambda, u13

from conftest import catalog_group, census_groups, enumerated_group, nonsingular

F2, F3, F5 = Field(2), Field(3), Field(5)


def e(n, i):
    return tuple(1 if k == i else 0 for k in range(n))


def gl(n, p):
    f = Field(p)
    for entries in itertools.product(range(p), repeat=n * n):
        m = Matrix(f, [entries[i * n:(i + 1) * n] for i in range(n)])
        if mat_rank(m) == n:
            yield m


def isomorphic_exhaustive(a, b):
    return any(is_isomorphism(a, b, P) for P in gl(a.n, a.field.p))


REM_A = ["x^2", "y^2", "x z", "y z", "x y + z^2"]
REM_B = ["x y", "x z", "y z", "x^2 + y^2", "x^2 + z^2"]


class TestExamples:
    def test_translations_zero_algebra(self):
        a = from_delta(LinearDeltaGroup.translations(F3, 3))
        assert all(not any(a.mul(e(3, i), e(3, j))) for i in range(3) for j in range(3))
        assert to_delta(a) == LinearDeltaGroup.translations(F3, 3)

    def test_s3_products(self):
        a = from_delta(s_lambda((3,), F5))
        assert a.mul(e(2, 0), e(2, 0)) == (0, 1)
        assert [a.mul(e(2, i), e(2, j)) for i, j in [(0, 1), (1, 0), (1, 1)]] == [(0, 0)] * 3

    def test_n2_products(self):
        # printed N2 matrix: v2 v1 = v3 and v1 v2 = -v3, squares zero
        f = F5
        a = from_delta(n2_group(f))
        v1, v2, v3 = e(3, 0), e(3, 1), e(3, 2)
        assert a.mul(v2, v1) == v3
        assert a.mul(v1, v2) == tuple(f(-x) for x in v3)
        assert not any(a.mul(v1, v1)) and not any(a.mul(v2, v2))

    def test_poonen_delta(self):
        for f in (F3, F5, QQ):
            a = quotient_algebra(f, ["t1", "t2", "t3"],
                                 ["t1^2 + t2^2", "t1^2 + t3^2", "t1 t2", "t1 t3", "t2 t3"],
                                 basis=["t1", "t1^2", "t2", "t3"])
            g = to_delta(a)
            assert g.delta[0] == Matrix.unit(f, 4, 1, 2)
            assert g.delta[1].is_zero()
            assert g.delta[2] == Matrix.unit(f, 4, 3, 2).scale(-1)
            assert g.delta[3] == Matrix.unit(f, 4, 4, 2).scale(-1)

    def test_presentation_s4(self):
        a = from_delta(s_lambda((4,), F3))
        assert eval_presentation(a, PresentationCheck({"t1": e(3, 0)}, ["t1^4"]))

    def test_presentation_u13(self):
        a = from_delta(u13(F2))
        assert eval_presentation(a, PresentationCheck({"t1": e(3, 0), "t2": e(3, 1)}, ["t1^2", "t2^2"]))

    def test_presentation_s3_wrong_relation(self):
        a = from_delta(s_lambda((3,), F3))
        rep = check_presentation(a, PresentationCheck({"t1": e(2, 0)}, ["t1^2"]))
        assert not rep.relations_vanish and not rep.ok

    def test_presentation_missing_relation_fails_kernel_equality(self):
        a = from_delta(s_lambda((3, 1), F3))
        rep = check_presentation(a, PresentationCheck({"t1": e(3, 0), "t2": e(3, 2)}, ["t1^3", "t2^2"]))
        assert rep.relations_vanish and rep.generates and not rep.kernel_equal

    def test_oracle_reflexive(self):
        a = from_delta(representative("S(3,2)", 4, F3))
        P = are_isomorphic_bruteforce(a, a)
        assert P is not None and is_isomorphism(a, a, P)

    def test_oracle_rem_pair_f2(self):
        names = ["x", "y", "z"]
        a = quotient_algebra(F2, names, REM_A)
        b = quotient_algebra(F2, names, REM_B)
        assert a.n == b.n == 4  # dim A = 5 counts the unit
        P = are_isomorphic_bruteforce(a, b)
        assert P is not None and is_isomorphism(a, b, P)

    def test_oracle_r1_r2_f3(self):
        a = from_delta(r_alpha(3, 1, F3))
        b = from_delta(r_alpha(3, 2, F3))
        assert are_isomorphic_bruteforce(a, b) is None
        assert not isomorphic_exhaustive(a, b)

    def test_budget(self):
        a = from_delta(representative("S(3,1,1)", 4, F5))
        moved = transport(a, Matrix(F5, [[1, 2, 0, 0], [0, 1, 3, 0], [0, 0, 1, 4], [1, 0, 0, 1]]))
        with pytest.raises(BudgetExceeded):
            are_isomorphic_bruteforce(a, moved, budget=1)
        assert are_isomorphic_bruteforce(a, moved) is not None
        other = from_delta(representative("S(2,1,1,1)", 4, F5))
        assert are_isomorphic_bruteforce(a, other) is None

    def test_errors(self):
        bad = LinearDeltaGroup(2, F3, (Matrix.unit(F3, 2, 2, 1), Matrix.zero(F3, 2)))
        with pytest.raises(NotAGroup):
            from_delta(bad)
        # x*x = x is associative but not nilpotent
        with pytest.raises(NotNilpotentAlgebra):
            to_delta(NilpotentAlgebra(1, F3, [[(1,)]]))
        nonassoc = NilpotentAlgebra(2, F3, [[(0, 1), (0, 0)], [(1, 0), (0, 0)]])
        with pytest.raises(NotAssociative):
            to_delta(nonassoc)

    def test_parse_polynomial(self):
        assert parse_polynomial("t1^2 - 2 t2 t1", ["t1", "t2"]) == [{(0, 0): 1, (0, 1): -2}]
        assert parse_polynomial("t2 t1", ["t1", "t2"], commutative=False) == [{(1, 0): 1}]
        assert len(parse_polynomial("<t1,t2>^2", ["t1", "t2"])) == 3
        with pytest.raises(ValueError):
            parse_polynomial("t9", ["t1"])

    def test_quotient_dim(self):
        # F[t1,t2]/<t1^3, t2^2, t1 t2> has augmentation ideal of dim 3
        rels = [r for s in ["t1^3", "t2^2", "t1 t2"] for r in parse_polynomial(s, ["t1", "t2"])]
        assert quotient_dim(F3, 2, rels, 5) == 3

    def test_json_roundtrip(self):
        a = from_delta(representative("U2^4", 4, F5))
        assert NilpotentAlgebra.from_json(a.to_json()) == a
        pc = PresentationCheck({"t1": (1, 0, 2)}, ["t1^3"])
        assert PresentationCheck.from_json(pc.to_json(F5), F5) == pc


@given(enumerated_group())
def test_from_delta_associative_and_nilpotent(g):
    a = from_delta(g)
    assert a.is_associative()
    assert a.is_nilpotent()
    assert len(a.power_dims()) <= g.n + 1


@given(enumerated_group())
def test_round_trips_on_enumerated(g):
    assert to_delta(from_delta(g)) == g
    a = from_delta(g)
    assert from_delta(to_delta(a)) == a
    assert check_group_condition(to_delta(a))


@given(catalog_group(ns=(1, 2, 3, 4)))
def test_round_trips_on_catalog(item):
    _, g = item
    assert to_delta(from_delta(g)) == g


@given(st.data())
def test_oracle_agrees_with_exhaustive_gl(data):
    n, p = data.draw(st.sampled_from([(2, 2), (2, 3), (3, 2)]))
    groups = census_groups(n, p)
    a = from_delta(data.draw(st.sampled_from(groups)))
    b = from_delta(data.draw(st.sampled_from(groups)))
    P = are_isomorphic_bruteforce(a, b)
    assert (P is not None) == isomorphic_exhaustive(a, b)
    if P is not None:
        assert is_isomorphism(a, b, P)


@given(catalog_group(primes=(2, 3, 5)), st.data())
def test_oracle_finds_transported_copy(item, data):
    _, g = item
    a = from_delta(g)
    P = data.draw(nonsingular(g.field, g.n))
    b = transport(a, P)
    Q = are_isomorphic_bruteforce(a, b)
    assert Q is not None and is_isomorphism(a, b, Q)
    # the witness conjugates the delta-groups
    assert conjugate_by(to_delta(a), Q) == to_delta(b)
    # symmetry
    assert are_isomorphic_bruteforce(b, a) is not None


@given(catalog_group(primes=(2, 3)), catalog_group(primes=(2, 3)))
def test_oracle_symmetric(x, y):
    (_, g), (_, h) = x, y
    if g.n != h.n or g.field != h.field:
        return
    a, b = from_delta(g), from_delta(h)
    assert (are_isomorphic_bruteforce(a, b) is None) == (are_isomorphic_bruteforce(b, a) is None)


@given(catalog_group(primes=(2, 3, 5)), st.data())
def test_fingerprint_invariant(item, data):
    _, g = item
    a = from_delta(g)
    P = data.draw(nonsingular(g.field, g.n))
    assert fingerprint(transport(a, P)) == fingerprint(a)


@given(st.data())
def test_presentation_invariant_under_isomorphism(data):
    f = data.draw(st.sampled_from([F2, F3, F5]))
    label, parts, rels = data.draw(st.sampled_from([
        ("S(4)", [0], ["t1^4"]),
        ("S(3,1)", [0, 2], ["t1^3", "t2^2", "t1 t2"]),
        ("S(2,1,1)", [0, 1, 2], ["<t1,t2,t3>^2"]),
    ]))
    g = representative(label, 3, f)
    a = from_delta(g)
    names = [f"t{i + 1}" for i in range(len(parts))]
    pc = PresentationCheck({k: e(3, i) for k, i in zip(names, parts)}, rels)
    before = eval_presentation(a, pc)
    P = data.draw(nonsingular(f, 3))
    b = transport(a, P)
    moved = PresentationCheck({k: P.row_vector_times(v) for k, v in pc.gens.items()}, rels)
    assert before and eval_presentation(b, moved) == before
