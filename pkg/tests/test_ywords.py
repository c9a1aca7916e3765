import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from _helpers import random_commutator_word, random_yword
from irslab.words import COMMUTATOR, IDENTITY, Word, conjugate
from irslab.ywords import (
    NotInCommutatorSubgroup,
    YWord,
    depth,
    depth_of_y,
    expand,
    in_gamma,
    phi_k,
    rewrite_to_y,
    y,
)

syllable_st = st.tuples(
    st.integers(min_value=1, max_value=50),
    st.integers(min_value=-3, max_value=3).filter(lambda e: e != 0),
)
yword_st = st.builds(YWord, st.lists(syllable_st, max_size=12))


def test_expand_examples():
    assert expand(y(1)) == COMMUTATOR  # t_1 = e
    assert expand(y(2)) == Word.parse("aabABA")  # t_2 = a
    assert expand(YWord()) == IDENTITY


def test_rewrite_examples_with_expand_oracle():
    # each expected normal form is validated by expanding it back first
    cases = [
        (COMMUTATOR, YWord(((1, 1),))),
        (Word.parse("aabABA"), YWord(((2, 1),))),
        (COMMUTATOR * COMMUTATOR, YWord(((1, 2),))),
        (
            Word.parse("ab") * COMMUTATOR * Word.parse("BA") * COMMUTATOR,
            YWord(((3, 1), (1, 1))),  # idx(1,1) = 3
        ),
    ]
    for word, expected in cases:
        assert expand(expected) == word
        assert rewrite_to_y(word) == expected


def test_rewrite_rejects_outside_commutator():
    for text in ("a", "ab", "aab", "B"):
        with pytest.raises(NotInCommutatorSubgroup):
            rewrite_to_y(Word.parse(text))
        with pytest.raises(NotInCommutatorSubgroup):
            depth(Word.parse(text))


def test_phi_examples():
    v = YWord(((3, 1), (1, 1), (3, -1)))
    assert phi_k(v, 2) == y(1)
    assert phi_k(v, 1) == YWord()
    assert phi_k(YWord(((3, 1), (1, 1), (3, -1), (1, -1))), 3) == YWord()
    assert phi_k(YWord(((3, 1), (1, 1), (3, -1), (1, -1))), 4) != YWord()


def test_depth_examples_with_phi_oracle():
    assert depth(IDENTITY) == math.inf
    word = expand(YWord(((3, 1), (1, 1), (3, -1), (1, -1))))
    for w, want in ((COMMUTATOR, 1), (word, 3)):
        got = depth(w)
        assert got == want
        v = rewrite_to_y(w)
        # oracle: the retraction at the depth kills the word, one past it does not
        assert phi_k(v, got).is_identity()
        assert not phi_k(v, got + 1).is_identity()


def test_in_gamma_examples():
    assert in_gamma(COMMUTATOR, 1) is True
    assert in_gamma(COMMUTATOR, 2) is False
    assert in_gamma(IDENTITY, 10**6) is True
    assert in_gamma(Word.parse("a"), 1) is False


def test_round_trip_bulk_10k():
    rng = random.Random(2024)
    for _ in range(10000):
        v = random_yword(rng)
        w = expand(v)
        assert rewrite_to_y(w) == v
        assert expand(rewrite_to_y(w)) == w


@settings(max_examples=150)
@given(yword_st)
def test_round_trip_hypothesis(v):
    assert rewrite_to_y(expand(v)) == v


def test_chain_monotonicity():
    rng = random.Random(55)
    for _ in range(300):
        w = expand(random_yword(rng, max_syllables=6, max_index=12))
        for k in range(1, 14):
            if in_gamma(w, k + 1):
                assert in_gamma(w, k)


def test_conjugation_depth_law():
    rng = random.Random(911)
    for _ in range(400):
        c = expand(random_yword(rng, max_syllables=5, max_index=20))
        j = rng.randint(1, 30)
        assert depth(conjugate(c, expand(y(j)))) == j
        # powers keep the depth of the base
        m = rng.choice((-2, 2, 3))
        assert depth(conjugate(c, expand(y(j, m)))) == j


def test_phi_is_retraction_and_homomorphism():
    rng = random.Random(4242)
    for _ in range(500):
        u = random_yword(rng, max_syllables=8, max_index=15)
        v = random_yword(rng, max_syllables=8, max_index=15)
        k = rng.randint(1, 16)
        assert phi_k(phi_k(u, k), k) == phi_k(u, k)
        assert phi_k(u * v, k) == phi_k(u, k) * phi_k(v, k)


def test_depth_bounded_by_max_index():
    rng = random.Random(77)
    for _ in range(500):
        v = random_yword(rng, max_syllables=8, max_index=25)
        if v.is_identity():
            continue
        assert 1 <= depth_of_y(v) <= 1 + v.max_index()


def test_yword_normal_form_invariants():
    v = YWord(((3, 2), (3, -2), (5, 1)))
    assert v == y(5)
    u = YWord(((2, 1), (2, 1), (7, -1)))
    assert u.syllables == ((2, 2), (7, -1))
    for s, t in zip(u.syllables, u.syllables[1:]):
        assert s[0] != t[0]
    assert all(e != 0 for _, e in u.syllables)
    with pytest.raises(ValueError):
        YWord(((0, 1),))


def test_yword_parse_format():
    v = YWord(((3, 2), (1, -1)))
    assert str(v) == "y3^2 y1^-1"
    assert YWord.parse("y3^2 y1^-1") == v
    assert YWord.parse("") == YWord()
    assert str(y(4)) == "y4"
    with pytest.raises(ValueError):
        YWord.parse("z3")


def test_yword_group_ops():
    u = YWord(((3, 1), (1, 2)))
    assert (u * u.inverse()).is_identity()
    assert u.inverse().syllables == ((1, -2), (3, -1))
    assert expand(u.inverse()) == expand(u).inverse()


def test_rewrite_of_random_commutator_words():
    rng = random.Random(31337)
    for _ in range(300):
        w = random_commutator_word(rng, 24)
        assert expand(rewrite_to_y(w)) == w
