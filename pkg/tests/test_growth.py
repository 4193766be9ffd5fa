import numpy as np
import pytest

from conftest import random_nontrivial_word, random_word
from twistgrowth.errors import BlockerNotFound, InvalidInput, PreconditionNotSatisfied
from twistgrowth.growth import (
    GrowthTable,
    TWord,
    estimate_degree,
    find_cancellation_blocker,
    growth_table,
    instantiate,
    is_cyclically_t_reduced,
    iterated_product,
    iterated_product_table,
    lower_bound_constants,
    partial_iterated_product,
    t_decompose,
    twistor_set,
    verify_quadratic_iterated,
)
from twistgrowth.twist import FreeAutomorphism, induced_automorphism
from twistgrowth.words import Basis, Word, cyclic_length, power, primitive_root

B2 = Basis(["a", "b"])
B3 = Basis(["a", "b", "c"])


@pytest.fixture(scope="module")
def phi(loop):
    _, tw, ident = loop
    return induced_automorphism(ident, tw)


class TestGrowthTable:
    def test_identity_constant(self):
        table = growth_table(lambda w: w, B2.word("a b"), 20)
        assert all(v == 2 for _, v in table.values)

    def test_loop_linear(self, loop, phi):
        table = growth_table(phi, loop[2].basis.word("t"), 50)
        assert [v for _, v in table.values] == [k + 1 for k in range(51)]

    def test_fixed_word_constant(self, phi, loop):
        table = growth_table(phi, loop[2].basis.word("a b"), 20)
        assert all(v == 2 for _, v in table.values)

    def test_short_table_rejected(self):
        with pytest.raises(InvalidInput):
            growth_table(lambda w: w, B2.word("a"), 0)


class TestEstimateDegree:
    def make(self, f, n=64):
        return GrowthTable("synthetic", tuple((k, f(k)) for k in range(n + 1)))

    def test_linear(self):
        d, lo, hi, ok = estimate_degree(self.make(lambda k: k + 1))
        assert d == 1 and ok

    def test_quadratic(self):
        d, lo, hi, ok = estimate_degree(self.make(lambda k: k * (k - 1) // 2))
        assert d == 2 and ok

    def test_constant(self):
        d, lo, hi, ok = estimate_degree(self.make(lambda k: 7))
        assert d == 0 and ok

    def test_zero(self):
        d, lo, hi, ok = estimate_degree(self.make(lambda k: 0))
        assert d == 0 and ok

    def test_cubic(self):
        d, _, _, ok = estimate_degree(self.make(lambda k: k**3 + 5 * k))
        assert d == 3 and ok

    def test_noisy_quadratic(self):
        # oscillation below the 5% plateau tolerance of the leading scale
        d, _, _, ok = estimate_degree(self.make(lambda k: 100 * k * k + (k % 3)))
        assert d == 2 and ok

    def test_oscillation_above_tolerance_is_not_flattened(self):
        # purely periodic data never plateaus; the estimate falls back and
        # cannot claim a clean bracket
        d, _, _, ok = estimate_degree(self.make(lambda k: k * k + 40 * (k % 2)))
        assert not ok

    def test_too_short(self):
        with pytest.raises(InvalidInput):
            estimate_degree(self.make(lambda k: k, n=10))


class TestIteratedProducts:
    def test_k_zero_empty(self, phi, loop):
        assert iterated_product(phi, loop[2].basis.word("t"), 0).is_identity

    def test_k_one(self, phi, loop):
        t = loop[2].basis.word("t")
        assert iterated_product(phi, t, 1) == t

    def test_inverse_stable_letter(self, phi, loop):
        F3 = loop[2].basis
        w = iterated_product(phi, F3.word("t^-1"), 3)
        assert w == F3.word("t^-1 a^-1 t^-1 a^-2 t^-1")
        assert len(w) == 6

    def test_recurrence(self, phi, loop, rng):
        F3 = loop[2].basis
        for _ in range(20):
            w = random_word(rng, F3, 4)
            k = int(rng.integers(1, 8))
            lhs = iterated_product(phi, w, k)
            prev = iterated_product(phi, w, k - 1)
            assert lhs == prev * phi.iterate(w, k - 1)

    def test_partial_product(self, phi, loop):
        F3 = loop[2].basis
        t = F3.word("t")
        assert partial_iterated_product(phi, t, 2, 4) == (
            phi.iterate(t, 2) * phi.iterate(t, 3) * phi.iterate(t, 4)
        )

    def test_loop_closed_form(self, phi, loop):
        table = iterated_product_table(phi, loop[2].basis.word("t"), 60)
        assert [v for _, v in table.values] == [k + k * (k - 1) // 2 for k in range(61)]


class TestTWord:
    def test_vertex_element_trivial(self, loop):
        _, tw, ident = loop
        td = t_decompose(tw, ident, ident.basis.word("a"))
        assert td.q == 0
        assert td.pieces[0] == ident.basis.word("a")

    def test_stable_letter(self, loop):
        _, tw, ident = loop
        td = t_decompose(tw, ident, ident.basis.word("t"))
        assert td.q == 1
        assert td.pieces[0] == ident.basis.word("t")
        assert td.bases[0] == ident.basis.word("a")

    def test_conjugated_vertex_word(self, loop):
        _, tw, ident = loop
        td = t_decompose(tw, ident, ident.basis.word("t b t^-1"))
        assert td.q == 2
        assert [str(y) for y in td.bases] == ["a", "a^-1"]
        assert not td.is_cyclically_t_reduced()

    def test_instantiate(self, loop):
        _, tw, ident = loop
        F3 = ident.basis
        td = t_decompose(tw, ident, F3.word("t"))
        assert instantiate(td, [0]) == F3.word("t")
        assert instantiate(td, [5]) == F3.word("t a^5")
        with pytest.raises(InvalidInput):
            instantiate(td, [1, 2])

    def test_identity_verified_against_iteration(self, loop, rng):
        _, tw, ident = loop
        phi = induced_automorphism(ident, tw)
        F3 = ident.basis
        for _ in range(40):
            w = random_word(rng, F3, 6)
            td = t_decompose(tw, ident, w)
            img = w
            for n in range(1, 5):
                img = phi(img)
                assert td.instantiate([n] * td.q) == img

    def test_twistor_set(self, loop):
        _, tw, ident = loop
        assert [str(y) for y in twistor_set(tw, ident)] == ["a"]

    def test_requires_efficiency(self, loop):
        from twistgrowth.fixtures import loop_twist

        _, _, ident = loop
        with pytest.raises(PreconditionNotSatisfied):
            t_decompose(loop_twist(0), ident, ident.basis.word("t"))

    def test_cyclically_t_reduced_detection(self):
        # w_q w_0 conjugates y_1 into y_q^-1  (the a^-1 / a pattern)
        a = B2.word("a")
        tw = TWord([B2.identity(), B2.word("b"), B2.identity()], [a, a.inverse()])
        assert tw.is_t_reduced()
        assert not tw.is_cyclically_t_reduced()

    def test_upper_bound(self, loop, rng):
        _, tw, ident = loop
        phi = induced_automorphism(ident, tw)
        F3 = ident.basis
        for _ in range(15):
            w = random_nontrivial_word(rng, F3, 5)
            td = t_decompose(tw, ident, w)
            for k in (1, 4, 9, 16):
                assert len(iterated_product(phi, w, k)) <= td.length_upper_bound(k)


class TestVerifyQuadratic:
    def test_loop_stable_letter(self, loop):
        _, tw, ident = loop
        assert verify_quadratic_iterated(tw, ident, ident.basis.word("t"), 160)

    def test_inverse_direction(self, loop):
        _, tw, ident = loop
        assert verify_quadratic_iterated(tw, ident, ident.basis.word("t^-1"), 160)

    def test_zero_word_rejected(self, loop):
        _, tw, ident = loop
        with pytest.raises(PreconditionNotSatisfied):
            verify_quadratic_iterated(tw, ident, ident.basis.word("a"), 64)

    def test_non_reduced_rejected(self, loop):
        _, tw, ident = loop
        with pytest.raises(PreconditionNotSatisfied):
            verify_quadratic_iterated(tw, ident, ident.basis.word("t b t^-1"), 64)


class TestBlocker:
    def test_no_cancellation_family(self):
        fam = [power(B2.word("b"), i) for i in range(1, 33)]
        v, C, surviving = find_cancellation_blocker(fam, [B2.word("a"), B2.word("b")])
        assert (str(v), C) == ("a", 0)
        assert len(surviving) == 32

    def test_power_suffix_family(self):
        # families ending in a-powers are blocked by b
        fam = [power(B2.word("a"), -i) for i in range(1, 33)]
        v, C, surviving = find_cancellation_blocker(fam, [B2.word("a"), B2.word("b")])
        assert str(v) == "b" and C == 0

    def test_alternating_suffix_family(self):
        fam = []
        for i in range(1, 33):
            tail = B3.word(f"a^{-i}") if i % 2 else B3.word(f"b^{-i}")
            fam.append(B3.word("c") * tail)
        v, C, surviving = find_cancellation_blocker(fam, [B3.word("a"), B3.word("b")])
        assert len(surviving) >= len(fam) // 2
        for i in surviving:
            w = fam[i]
            from twistgrowth.words import cancellation

            assert cancellation(w, v) + cancellation(w * v, w.inverse()) <= C

    def test_rank_certificate_required(self):
        with pytest.raises(PreconditionNotSatisfied):
            find_cancellation_blocker([B2.word("a")], [B2.word("a"), B2.word("a^2")])


def _valid_random_triplet(rng, basis, max_len=6):
    while True:
        X = random_nontrivial_word(rng, basis, max_len)
        b = random_word(rng, basis, max_len)
        Y = random_nontrivial_word(rng, basis, max_len)
        conj = b * Y * b.inverse()
        if primitive_root(X.inverse())[0] != primitive_root(conj)[0]:
            return X, b, Y


class TestLowerBoundConstants:
    def test_product_triplet_inequality(self):
        X = B3.word("a b")
        b = B3.word("c")
        N0, K = lower_bound_constants([(X, b, X)], n_max=30)
        for n1 in range(0, 31):
            for n2 in range(0, 31):
                w = power(X, n1) * b * power(X, n2)
                assert len(w) >= n1 * cyclic_length(X) + n2 * cyclic_length(X) + K

    def test_identity_b_same_word(self):
        N0, K = lower_bound_constants([(B3.word("a"), B3.identity(), B3.word("a"))], n_max=10)
        assert (N0, K) == (0, 0)

    def test_invalid_triplet_rejected(self):
        with pytest.raises(PreconditionNotSatisfied):
            lower_bound_constants([(B2.word("a^-1"), B2.identity(), B2.word("a"))])

    def test_inequality_beyond_calibration(self, rng):
        # constants calibrated at n_max stay valid for 3x the range
        for _ in range(12):
            X, b, Y = _valid_random_triplet(rng, B3, 4)
            _, K = lower_bound_constants([(X, b, Y)], n_max=10)
            nX, nY = cyclic_length(X), cyclic_length(Y)
            for n1 in (0, 1, 7, 15, 30):
                left = power(X, n1) * b
                for n2 in (0, 1, 7, 15, 30):
                    assert len(left * power(Y, n2)) >= n1 * nX + n2 * nY + K

    def test_cyclic_length_negative_control(self):
        # X = a^-1, Y = a in F2: the plain-length bound holds but the
        # cyclic-length analogue fails badly
        X, b, Y = B2.word("a^-1"), B2.word("b"), B2.word("a")
        _, K = lower_bound_constants([(X, b, Y)], n_max=20)
        violated = False
        for n in (5, 10, 20):
            w = power(X, n) * b * power(Y, n)
            assert len(w) >= 2 * n + K  # plain lengths obey the bound
            if cyclic_length(w) < 2 * n + K:
                violated = True
        assert violated

    def test_subword_survival(self, rng):
        # for large n1, n2 the cyclically reduced cores of X and Y survive
        # as literal subwords of the reduced product
        def contains(haystack: Word, needle: Word):
            h, n = haystack.array, needle.array
            if len(n) == 0 or len(n) > len(h):
                return False
            for s in range(len(h) - len(n) + 1):
                if np.array_equal(h[s : s + len(n)], n):
                    return True
            return False

        from twistgrowth.words import cyclic_reduce

        for _ in range(10):
            X, b, Y = _valid_random_triplet(rng, B3, 4)
            _, coreX = cyclic_reduce(X)
            _, coreY = cyclic_reduce(Y)
            n0 = 8 + len(X) + len(Y) + len(b)
            w = power(X, n0) * b * power(Y, n0)
            assert contains(w, coreX)
            assert contains(w, coreY)

    def test_family_scaling_in_q(self, rng):
        # with intermediates from a fixed family the defect scales like
        # (q-1) K0 for products y1^n c1 y2^n ... (measured at q = 2..6)
        ys = [B3.word("a b"), B3.word("b c")]
        cs = [B3.word("c"), B3.word("c a")]
        triplets = []
        for y1 in ys:
            for c in cs:
                for y2 in ys:
                    if primitive_root(y1.inverse())[0] != primitive_root(c * y2 * c.inverse())[0]:
                        triplets.append((y1, c, y2))
        N0, K0 = lower_bound_constants(triplets, n_max=12)
        n = max(6, N0 + 2)
        for q in range(2, 7):
            w = B3.identity()
            total = 0
            for i in range(q):
                y = ys[i % 2]
                w = w * power(y, n)
                total += n * cyclic_length(y)
                if i < q - 1:
                    w = w * cs[i % 2]
            assert len(w) >= total + (q - 1) * K0
