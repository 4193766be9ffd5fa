import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twistgrowth.errors import InvalidInput, WordSyntaxError
from twistgrowth.words import (
    Basis,
    CyclicWord,
    Word,
    cancellation,
    centralizer_generator,
    common_root,
    cyclic_length,
    cyclic_reduce,
    is_conjugate,
    is_power_of,
    multiply,
    power,
    primitive_root,
    reduce_letters,
)

from conftest import random_nontrivial_word, random_word

B2 = Basis(["a", "b"])
B3 = Basis(["a", "b", "c"])


def letters(basis, max_len=30):
    return st.lists(
        st.integers(1, basis.rank).flatmap(lambda i: st.sampled_from([i, -i])),
        max_size=max_len,
    )


class TestReduce:
    def test_free_cancellation(self):
        assert B2.from_values([1, -1, 2]) == B2.word("b")

    def test_empty_is_identity(self):
        assert B2.from_values([]).is_identity

    def test_inner_cancellation(self):
        assert B2.from_values([1, 2, -2, 1]) == B2.word("a a")

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidInput):
            B2.from_values([3])

    def test_letter_pairs_accepted(self):
        assert reduce_letters(B2, [(0, 1), (0, -1), (1, 1)]) == B2.word("b")

    @given(letters(B2))
    def test_idempotent(self, vals):
        w = B2.from_values(vals)
        assert B2.from_values(list(w.array)) == w

    @given(letters(B3))
    def test_inverse_law(self, vals):
        w = B3.from_values(vals)
        assert (w * w.inverse()).is_identity
        assert w.inverse().inverse() == w


class TestGroupOps:
    def test_multiply(self):
        assert multiply(B2.word("a b"), B2.word("b^-1 c" if "c" in B2 else "b^-1 a")) == B2.word("a a")

    def test_multiply_example(self):
        assert B3.word("a b") * B3.word("b^-1 c") == B3.word("a c")

    def test_invert(self):
        assert B2.word("a b").inverse() == B2.word("b^-1 a^-1")

    def test_power(self):
        assert power(B2.word("a b"), 3) == B2.word("a b a b a b")
        assert power(B2.word("a b"), 0).is_identity
        assert power(B2.word("a b"), -2) == B2.word("(a b)^-2")

    def test_power_of_conjugate(self):
        u = B2.word("b a b^-1")
        assert power(u, 4) == B2.word("b a^4 b^-1")

    def test_triangle_inequality(self, rng):
        for _ in range(200):
            u, v = random_word(rng, B3), random_word(rng, B3)
            assert len(u * v) <= len(u) + len(v)


class TestCyclicReduce:
    @pytest.mark.parametrize(
        "word,conj,core",
        [("b a b^-1", "b^-1", "a"), ("a b", "1", "a b"), ("a^-1 b a", "a", "b")],
    )
    def test_examples(self, word, conj, core):
        c, r = cyclic_reduce(B2.word(word))
        assert c == B2.word(conj)
        assert r == B2.word(core)
        assert c.inverse() * r * c == B2.word(word)

    @given(letters(B2))
    def test_cyclic_length_formula(self, vals):
        # ||g|| = |gg| - |g|
        w = B2.from_values(vals)
        assert cyclic_length(w) == len(w * w) - len(w)


class TestCancellation:
    @pytest.mark.parametrize(
        "u,v,k",
        [("a b", "b^-1 a", 1), ("a b", "a b", 0), ("a b", "b^-1 a^-1", 2)],
    )
    def test_examples(self, u, v, k):
        assert cancellation(B2.word(u), B2.word(v)) == k

    @given(letters(B2), letters(B2))
    def test_matches_length_defect(self, us, vs):
        u, v = B2.from_values(us), B2.from_values(vs)
        assert 2 * cancellation(u, v) == len(u) + len(v) - len(u * v)


class TestConjugacy:
    def test_rotation(self):
        g = is_conjugate(B2.word("a b"), B2.word("b a"))
        assert g is not None
        assert g * B2.word("a b") * g.inverse() == B2.word("b a")

    def test_not_conjugate(self):
        assert is_conjugate(B2.word("a"), B2.word("b")) is None

    def test_aab_aba(self):
        g = is_conjugate(B2.word("a a b"), B2.word("a b a"))
        assert g is not None
        assert g * B2.word("a a b") * g.inverse() == B2.word("a b a")

    def test_random_conjugates_detected(self, rng):
        for _ in range(300):
            u = random_word(rng, B3)
            g = random_word(rng, B3)
            assert is_conjugate(u, g * u * g.inverse()) is not None

    def test_cyclic_word_equality_iff_conjugate(self, rng):
        for _ in range(200):
            u, v = random_word(rng, B2, 8), random_word(rng, B2, 8)
            same = CyclicWord(u) == CyclicWord(v)
            assert same == (is_conjugate(u, v) is not None)


class TestRoots:
    def test_square(self):
        assert primitive_root(B2.word("a b a b")) == (B2.word("a b"), 2)

    def test_primitive(self):
        assert primitive_root(B2.word("a b")) == (B2.word("a b"), 1)

    def test_conjugated_square(self):
        r, k = primitive_root(B2.word("b a a b^-1"))
        assert (r, k) == (B2.word("b a b^-1"), 2)
        assert r * r == B2.word("b a a b^-1")

    def test_identity_rejected(self):
        with pytest.raises(InvalidInput):
            primitive_root(B2.identity())

    def test_common_root_examples(self):
        assert common_root(B2.word("a a"), B2.word("a a a")) == B2.word("a")
        assert common_root(B2.word("a"), B2.word("b")) is None
        assert common_root(B2.word("(a b)^2"), B2.word("(a b)^3")) == B2.word("a b")

    def test_common_root_commuting_equivalence(self):
        # present <=> commuting <=> some positive powers agree up to inversion;
        # exhaustively on short words over a rank-2 basis
        words = []
        for n in range(0, 4):
            stack = [[]]
            for _ in range(n):
                stack = [s + [v] for s in stack for v in (1, -1, 2, -2)]
            words.extend(B2.from_values(s) for s in stack)
        words = [w for w in words if not w.is_identity]
        for u in words[:40]:
            for v in words[:40]:
                present = common_root(u, v) is not None
                commute = u * v == v * u
                powers = any(
                    power(u, n1) in (power(v, n2), power(v, -n2))
                    for n1 in range(1, 5)
                    for n2 in range(1, 5)
                )
                assert present == commute == powers

    def test_centralizer_generator(self):
        assert centralizer_generator(B2.word("a a")) == B2.word("a")
        assert centralizer_generator(B2.word("a b")) == B2.word("a b")
        assert centralizer_generator(power(B2.word("b a b^-1"), 3)) == B2.word("b a b^-1")

    def test_is_power_of(self):
        assert is_power_of(B2.word("a^4"), B2.word("a^2")) == 2
        assert is_power_of(B2.identity(), B2.word("a b")) == 0
        assert is_power_of(B2.word("a b"), B2.word("a a")) is None
        assert is_power_of(B2.word("(b a b^-1)^-3"), B2.word("b a b^-1")) == -3

    def test_uniform_cancellation_bound(self, rng):
        # no common root of U^-1 and V => junction cancellation of powers
        # saturates early (Lemma-type uniform boundedness)
        found = 0
        while found < 25:
            U = random_nontrivial_word(rng, B3, 6)
            V = random_nontrivial_word(rng, B3, 6)
            if primitive_root(U.inverse())[0] == primitive_root(V)[0]:
                continue
            found += 1
            up = {n: power(U, n) for n in (1, 2, 5, 10, 25, 50)}
            vp = {n: power(V, n) for n in (1, 2, 5, 10, 25, 50)}
            small = max(cancellation(up[n1], vp[n2]) for n1 in (1, 2, 5, 10) for n2 in (1, 2, 5, 10))
            large = max(cancellation(up[n1], vp[n2]) for n1 in up for n2 in vp)
            assert small == large


class TestParser:
    def test_round_trip(self, rng):
        for _ in range(200):
            w = random_word(rng, B3, 20)
            assert B3.word(str(w)) == w

    def test_syntax_examples(self):
        assert B2.word("a b^-1 (a b)^3") == B2.word("a b^-1 a b a b a b")
        assert B2.word("a*b") == B2.word("a b")
        assert B2.word("a^0").is_identity
        assert B2.word("  ").is_identity

    def test_unknown_generator_rejected(self):
        with pytest.raises(WordSyntaxError):
            B2.word("a x")

    @pytest.mark.parametrize("bad", ["a^", "(a b", "a)", "^2", "a^1.5", "a-b"])
    def test_malformed_rejected(self, bad):
        with pytest.raises(WordSyntaxError):
            B2.word(bad)

    def test_basis_name_validation(self):
        with pytest.raises(InvalidInput):
            Basis(["a", "a"])
        with pytest.raises(InvalidInput):
            Basis(["1bad"])


class TestScale:
    def test_ten_million_letters(self):
        # long-word contract: 1e7 letters must work
        w = power(B3.word("a b c b"), 2_500_000)
        assert len(w) == 10_000_000
        assert cyclic_length(w) == 10_000_000
        v = w * w.inverse()
        assert v.is_identity

    def test_quadratic_scale_product(self):
        u = power(B2.word("a"), 2_000_000)
        v = power(B2.word("a^-1"), 1_999_999) * B2.word("b")
        assert len(u * v) == 2
