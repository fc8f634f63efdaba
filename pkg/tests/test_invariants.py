from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from regaffine.affine import (InfiniteField, LinearDeltaGroup, center_elements_bruteforce, conjugate_by,
                              mu, pi)
from regaffine.algebra import from_delta
from regaffine.invariants import (CERTIFIED, UNKNOWN, InvariantProfile, cosquare, generic_profile,
                                  is_indecomposable_certificate, jordan_histogram, profile, square_class,
                                  square_class_rep, square_transversal, top_form)
from regaffine.linalg import QQ, Field, Matrix, charpoly, inverse, min_poly_degree, rank_of_rows
from regaffine.standard import r_alpha, representative, s_lambda, s_sharp, v_group

from conftest import ALL_FIELDS, catalog_group, nonsingular

F2, F3, F5, F7 = Field(2), Field(3), Field(5), Field(7)


def profile_bruteforce(g: LinearDeltaGroup):
    """d, r, k and their centre versions from element enumeration only.

    d uses the minimal polynomial degree of h - I, the centre is the full
    commutant, and k counts row vectors fixed by every pi(h).
    """
    f = g.field
    n = g.n
    I1 = Matrix.identity(f, n + 1)
    elems = {v: mu(g, v) for v in f.vectors(n)}
    centre = [v for v, a in elems.items() if all(a @ b == b @ a for b in elems.values())]

    def dr(vs):
        d = max(min_poly_degree(elems[v] - I1) for v in vs)
        r = max(rank_of_rows(f, (elems[v] - I1).rows) for v in vs)
        return d, r

    def k_of(vs):
        pis = [pi(elems[v]) for v in vs]
        fixed = [w for w in f.vectors(n) if all(P.row_vector_times(w) == w for P in pis)]
        size = len(fixed)
        k = 0
        while f.p ** k < size:
            k += 1
        assert f.p ** k == size
        return k

    d, r = dr(elems)
    dZ, rZ = dr(centre)
    abelian = len(centre) == len(elems)
    return (d, r, k_of(elems), dZ, rZ, k_of(centre), abelian)


class TestExamples:
    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_translations(self, n):
        pr = profile(LinearDeltaGroup.translations(F3, n))
        assert (pr.d, pr.r, pr.k) == (2, 1, n)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_single_block_centre(self, n):
        assert profile(s_lambda((n + 1,), F3)).dZ == n + 1

    def test_r_alpha_k(self):
        assert profile(r_alpha(3, 0, F5)).k == 2
        for a in (1, 2, 3, 4):
            assert profile(r_alpha(3, a, F5)).k == 1

    def test_certificates(self):
        assert is_indecomposable_certificate(s_lambda((5,), F3)) == CERTIFIED
        assert is_indecomposable_certificate(s_lambda((3, 2), F3)) == UNKNOWN
        assert is_indecomposable_certificate(representative("U1^4", 4, F3)) == UNKNOWN

    def test_square_class(self):
        assert square_class(0, F5) == "zero"
        assert square_class(4, F5) == "square"
        assert square_class(2, F3) == "nonsquare"
        assert square_class(Fraction(9, 4), QQ) == "square"
        assert square_class(-1, QQ) == "nonsquare"
        assert square_transversal(F7) == [1, 3]
        assert square_transversal(F2) == [1]
        assert square_class_rep(4, F7) == 1

    def test_cosquare_symmetric_is_identity(self):
        A = Matrix(F7, [[1, 2], [2, 5]])
        assert cosquare(A) == Matrix.identity(F7, 2)

    @pytest.mark.parametrize("beta", [1, 2, 3, 4])
    def test_cosquare_charpoly(self, beta):
        f = F5
        B = Matrix(f, [[1, 1], [0, beta]])
        assert charpoly(cosquare(B)) == (1, f(f.inv(beta) - 2), 1)

    def test_top_form_of_v_group(self):
        M = top_form(from_delta(v_group(1, 1, 0, 2, F5)))
        assert M == Matrix(F5, [[1, 1], [0, 2]])

    def test_profile_needs_finite_field(self):
        with pytest.raises(InfiniteField):
            profile(s_lambda((3,), QQ))

    def test_generic_profile_over_q(self):
        pr = generic_profile(s_lambda((4,), QQ))
        assert pr.generic and pr.d == 4 and pr.k == 1 and pr.dZ == 4

    def test_profile_json(self):
        pr = profile(representative("N3[l=2]", 3, F5))
        assert set(pr.to_json()) == {"d", "r", "k", "dZ", "rZ", "kZ", "abelian"}
        assert InvariantProfile.from_json(pr.to_json()).key() == pr.key()
        assert pr.key() == (3, 2, 1, 2, 1, 3, False)

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            InvariantProfile(9, 1, 1, 2, 1, 1, False, n=3)


@given(catalog_group(primes=(2, 3, 5), ns=(1, 2, 3)))
def test_profile_matches_bruteforce(item):
    _, g = item
    assert profile(g).key() == profile_bruteforce(g)


@settings(max_examples=25)
@given(st.sampled_from(ALL_FIELDS), st.sampled_from(["S(4)", "S(3,1)", "N1", "N3[l=1]", "S(2,1,1)",
                                                      "S(3)", "S(2,1)"]), st.data())
def test_profile_conjugation_invariant(f, label, data):
    n = 2 if label in ("S(3)", "S(2,1)") else 3
    g = representative(label, n, f)
    P = data.draw(nonsingular(f, n))
    h = conjugate_by(g, P)
    if f.is_finite and f.p ** n <= 125:
        assert profile(h).key() == profile(g).key()
        assert jordan_histogram(h) == jordan_histogram(g)
    else:
        # large or infinite fields: k is exact from the D-matrices, d and r are sampled
        a, b = generic_profile(g), generic_profile(h)
        assert (a.k, a.kZ, a.abelian) == (b.k, b.kZ, b.abelian)


@given(catalog_group(ns=(1, 2, 3, 4)))
def test_abelian_centre_profile_equals_group_profile(item):
    _, g = item
    pr = profile(g)
    if pr.abelian:
        assert (pr.d, pr.r, pr.k) == (pr.dZ, pr.rZ, pr.kZ)
    assert pr.dZ <= pr.d and pr.rZ <= pr.r and pr.kZ >= pr.k


@given(st.data())
def test_cosquare_congruence_invariance(data):
    f = F5
    B = data.draw(nonsingular(f, 2))
    P = data.draw(nonsingular(f, 2))
    assert charpoly(cosquare(P @ B @ P.T)) == charpoly(cosquare(B))
    # and the cosquares are conjugate by P^T
    Q = P.T
    assert cosquare(P @ B @ P.T) == inverse(Q) @ cosquare(B) @ Q


@given(st.sampled_from([3, 5, 7, 11, 13]), st.data())
def test_square_class_multiplicative(p, data):
    f = Field(p)
    a = data.draw(st.integers(1, p - 1))
    b = data.draw(st.integers(1, p - 1))
    sq = {x * x % p for x in range(1, p)}
    assert (square_class(a, f) == "square") == (a in sq)
    same = square_class(a, f) == square_class(b, f)
    assert (square_class(a * b % p, f) == "square") == same
