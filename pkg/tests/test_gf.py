import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cycldpc.gf import (
    GF2,
    PRIMITIVE_GF2,
    ZERO,
    BinaryMatrix,
    FieldError,
    Poly,
    build_field,
    cyclotomic_coset,
    extension_degree,
    fourier_transform,
    gf2_rank,
    minimal_polynomial,
    poly_divmod,
    poly_gcd,
    poly_lcm,
    rank_and_nullspace,
    root_of_unity,
    subfield,
)
from oracles import gf2m_elements, poly_divmod_gf2, rank_gf2


def P(*coeffs, field=GF2):
    return Poly(field, coeffs)


def bits(mask):
    return [(mask >> i) & 1 for i in range(mask.bit_length())]


class TestFields:
    def test_gf4_alpha_cubed_is_one(self):
        F = build_field(2, 2, [1, 1, 1])
        assert F.q == 4
        assert F.alpha ** 3 == F.element(0)
        assert F.alpha.multiplicative_order() == 3

    def test_gf16_defining_relation(self):
        F = build_field(2, 4, [1, 1, 0, 0, 1])
        a = F.alpha
        assert a ** 15 == F.element(0)
        assert a ** 4 == a + F.element(0)

    def test_gf257(self):
        F = build_field(257, 1)
        assert F.alpha.multiplicative_order() == 256
        assert len(set(F.exp.tolist())) == 256

    @pytest.mark.parametrize("s", range(1, 17))
    def test_default_table_is_primitive(self, s):
        poly = PRIMITIVE_GF2[s]
        els = gf2m_elements(poly, s)
        assert len(set(els)) == (1 << s) - 1

    @pytest.mark.parametrize("s", range(2, 11))
    def test_default_table_is_smallest(self, s):
        # no smaller monic degree-s mask generates the whole group
        for mask in range(1 << s, PRIMITIVE_GF2[s]):
            if mask & 1 == 0:
                continue
            assert len(set(gf2m_elements(mask, s))) < (1 << s) - 1

    def test_tables_inverse(self):
        F = build_field(2, 8)
        nz = np.arange(1, 256)
        assert np.array_equal(F.exp[F.log[nz]], nz)
        assert F.log[0] == ZERO

    def test_gf9_arithmetic(self):
        F = build_field(3, 2, [2, 2, 1])
        for a in range(1, 9):
            x = F.from_code(a)
            assert x * x.inverse() == F.element(0)
            assert (x - x).is_zero

    def test_reducible_rejected(self):
        with pytest.raises(FieldError, match="reducible"):
            build_field(2, 4, [1, 0, 1, 0, 1])

    def test_non_primitive_rejected(self):
        with pytest.raises(FieldError, match="not primitive"):
            build_field(2, 4, [1, 1, 1, 1, 1])

    def test_composite_p_rejected(self):
        with pytest.raises(FieldError):
            build_field(4, 1)

    def test_subfield_embedding(self):
        F = build_field(2, 4)
        K = subfield(F, 2)
        codes = np.arange(4)
        back = K.restrict(K.embed(codes))
        assert np.array_equal(back, codes)
        e = K.embed(np.array([2, 3]))
        assert np.array_equal(F.mul(e[:1], e[:1]), K.embed(K.mul(np.array([2]), np.array([2]))))

    def test_extension_degree(self):
        assert extension_degree(2, 15) == 4
        assert extension_degree(2, 23) == 11
        with pytest.raises(FieldError):
            extension_degree(2, 6)

    def test_cyclotomic_coset(self):
        assert cyclotomic_coset(3, 2, 15) == [3, 6, 12, 9]
        assert root_of_unity(build_field(2, 4), 5).multiplicative_order() == 5


class TestPoly:
    def test_divmod_x7(self):
        q, r = poly_divmod(P(1, 0, 0, 0, 0, 0, 0, 1), P(1, 1, 0, 1))
        assert q == P(1, 1, 1, 0, 1) and r.is_zero()
        oq, orr = poly_divmod_gf2(0b10000001, 0b1011)
        assert q == Poly(GF2, bits(oq)) and orr == 0

    def test_divmod_self(self):
        a = P(1, 0, 1, 1)
        q, r = divmod(a, a)
        assert q == P(1) and r.is_zero()

    def test_divmod_x3(self):
        q, r = poly_divmod(P(1, 0, 0, 1), P(1, 1))
        assert q == P(1, 1, 1) and r.is_zero()

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            poly_divmod(P(1, 1), Poly(GF2, []))

    def test_gcd_lcm_examples(self):
        assert poly_gcd(P(1, 0, 1), P(1, 0, 0, 1)) == P(1, 1)
        assert poly_gcd(P(1, 1, 1), Poly(GF2, [])) == P(1, 1, 1)
        assert poly_lcm([P(1, 1), P(1, 1, 1)]) == P(1, 0, 0, 1)
        with pytest.raises(ValueError):
            poly_lcm([])

    def test_gcd_over_gf4_is_monic(self):
        F = build_field(2, 2)
        g = poly_gcd(Poly(F, [2, 2]), Poly(F, [3, 0, 3]))
        assert g.lead == 1

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(st.integers(0, 3), min_size=1, max_size=8),
        st.lists(st.integers(0, 3), min_size=1, max_size=8),
        st.sampled_from([2, 4]),
    )
    def test_gcd_lcm_properties(self, a, b, q):
        F = GF2 if q == 2 else build_field(2, 2)
        a = Poly(F, [x % q for x in a])
        b = Poly(F, [x % q for x in b])
        if a.is_zero() or b.is_zero():
            return
        g = poly_gcd(a, b)
        assert (a % g).is_zero() and (b % g).is_zero()
        l = poly_lcm([a, b])
        assert (l % a).is_zero() and (l % b).is_zero()
        assert g * l == (a * b).monic()

    @settings(max_examples=60, deadline=None)
    @given(st.lists(st.integers(0, 1), min_size=1, max_size=12), st.lists(st.integers(0, 1), min_size=1, max_size=6))
    def test_divmod_matches_long_division(self, a, b):
        a_, b_ = Poly(GF2, a), Poly(GF2, b)
        if b_.is_zero():
            return
        q, r = poly_divmod(a_, b_)
        oq, orr = poly_divmod_gf2(int("".join(map(str, a[::-1])), 2), int("".join(map(str, b[::-1])), 2))
        assert q == Poly(GF2, bits(oq)) and r == Poly(GF2, bits(orr))
        assert q * b_ + r == a_

    def test_degree_of_product(self):
        a, b = P(1, 1, 0, 1), P(0, 1, 1)
        assert (a * b).degree == a.degree + b.degree


class TestMinimalPolynomial:
    def test_examples(self):
        F = build_field(2, 4, [1, 1, 0, 0, 1])
        assert minimal_polynomial(F.alpha) == P(1, 1, 0, 0, 1)
        assert minimal_polynomial(F.element(0)) == P(1, 1)
        assert minimal_polynomial(F.alpha ** 3) == P(1, 1, 1, 1, 1)

    def test_alpha3_against_coset_product(self):
        F = build_field(2, 4, [1, 1, 0, 0, 1])
        prod = Poly.from_roots(F, F.alpha_pow(np.array([3, 6, 12, 9])))
        assert np.array_equal(prod.coeffs, minimal_polynomial(F.alpha ** 3).coeffs)

    @pytest.mark.parametrize("e", range(1, 63))
    def test_roots_are_the_conjugates(self, e):
        F = build_field(2, 6)
        mp = minimal_polynomial(F.element(e))
        roots = {r for r in range(63) if Poly(F, mp.coeffs)(F.alpha_pow(r)) == 0}
        assert roots == set(cyclotomic_coset(e, 2, 63))

    def test_over_gf4(self):
        F = build_field(2, 4)
        K = subfield(F, 2)
        mp = minimal_polynomial(F.alpha, K)
        assert mp.degree == 2
        assert Poly(F, K.embed(mp.coeffs))(F.alpha_pow(1)) == 0


class TestBinaryLinearAlgebra:
    def test_identity_and_ones(self):
        r, N = rank_and_nullspace(np.eye(4, dtype=np.uint8))
        assert r == 4 and N.shape[0] == 0
        r, N = rank_and_nullspace(np.ones((3, 3), dtype=np.uint8))
        assert r == 1 and N.shape[0] == 2

    def test_eg15_rank(self, H15):
        r, N = rank_and_nullspace(H15)
        assert r == 8 and N.shape == (7, 15)
        assert not np.any((H15.astype(int) @ N.T.astype(int)) % 2)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 40), st.integers(1, 90), st.integers(0, 2**32 - 1))
    def test_rank_matches_oracle(self, m, n, seed):
        M = np.random.default_rng(seed).integers(0, 2, (m, n), dtype=np.uint8)
        r = gf2_rank(M)
        assert r == rank_gf2(M)
        r2, N = rank_and_nullspace(M)
        assert r2 == r and N.shape[0] == n - r
        assert not np.any((M.astype(int) @ N.T.astype(int)) % 2)

    def test_pack_round_trip(self):
        M = np.random.default_rng(1).integers(0, 2, (5, 130), dtype=np.uint8)
        B = BinaryMatrix.from_dense(M)
        assert np.array_equal(B.to_dense(), M)
        assert np.array_equal(B.row_weights(), M.sum(axis=1))


class TestFourier:
    def test_delta(self):
        F = build_field(2, 4)
        v = np.zeros(15, dtype=np.int64)
        v[0] = 1
        assert np.all(fourier_transform(v, F.alpha) == 1)

    def test_all_ones(self):
        F = build_field(2, 4)
        V = fourier_transform(np.ones(15, dtype=np.int64), F.alpha)
        assert V[0] == 1 and not V[1:].any()

    def test_eg15_spectrum(self, H15):
        F = build_field(2, 4)
        assert np.count_nonzero(fourier_transform(H15[0], F.alpha)) == 8

    def test_order_mismatch(self):
        F = build_field(2, 4)
        with pytest.raises(ValueError):
            fourier_transform(np.ones(7, dtype=np.int64), F.alpha)

    @pytest.mark.parametrize("s", [2, 3, 4, 5, 6])
    def test_spectrum_counts_rank(self, s):
        F = build_field(2, s)
        rng = np.random.default_rng(s)
        n = F.order
        from cycldpc.circulant import circulant_dense

        for _ in range(10):
            w = rng.integers(0, 2, n)
            assert np.count_nonzero(fourier_transform(w, F.alpha)) == rank_gf2(circulant_dense(w))


@pytest.mark.parametrize("e", [-1, -2, -15, 1, 7])
def test_negative_powers_are_not_zero(e):
    F = build_field(2, 4)
    for a in range(1, 16):
        x = F.from_code(a)
        assert not (x ** e).is_zero
        assert x ** e * x ** (-e) == F.element(0)


@pytest.mark.parametrize("d,s", [(2, 4), (2, 6), (3, 6), (2, 8), (4, 8)])
def test_field_embedding_is_homomorphism(d, s):
    from cycldpc.gf import field_embedding

    K, F = build_field(2, d), build_field(2, s)
    emb = field_embedding(K, F)
    a = np.repeat(np.arange(K.q), K.q)
    b = np.tile(np.arange(K.q), K.q)
    assert np.array_equal(emb[K.mul(a, b)], F.mul(emb[a], emb[b]))
    assert np.array_equal(emb[K.add(a, b)], F.add(emb[a], emb[b]))
    assert len(set(emb.tolist())) == K.q


def test_default_odd_extension_fields():
    assert build_field(3, 2).poly == (2, 1, 1)
    assert build_field(3, 3).poly == (1, 2, 0, 1)
    F = build_field(5, 2)
    assert len(set(F.exp.tolist())) == 24
