import itertools
import math
import random
from fractions import Fraction

import pytest

from _helpers import dst_constant_interval, iter_reduced, random_commutator_word, random_word
from irslab.dyadic import HALF, ONE, ZERO, Dyadic, Exact, certified_product, one_minus_pow2, pow2
from irslab.grid import idx, point
from irslab.measures import (
    MU_F,
    MU_G,
    MU_HF,
    CertifiedBool,
    CoinducedProduct,
    Convex,
    DiracGamma,
    DiracTrivial,
    GeneratePower,
    GeomGamma,
    InducedFinite,
    IntersectPower,
    ParamFamily,
    Pushforward,
    Region,
    chain_env_weight,
    check_combination_identities,
    descriptor_from_json,
    descriptor_to_json,
    env_prob,
    essential,
    family_measure,
    kernel_contains,
    mixing_defect,
    parse_measure,
    supported_in,
)
from irslab.words import A, COMMUTATOR, IDENTITY, Word, conjugate
from irslab.ywords import YWord, depth, expand, y

Y2_WORD = Word.parse("aabABA")
WIDTH6 = pow2(21)  # < 1e-6


def geometric_weight_sum(K: int) -> Fraction:
    return sum((Fraction(1, 2**k) for k in range(1, K + 1)), Fraction(0))


def family_weight_sum(a: Fraction, K: int) -> Fraction:
    # head weights a and 3/4 - a, then the plain geometric tail
    total = Fraction(0)
    if K >= 1:
        total += a
    if K >= 2:
        total += Fraction(3, 4) - a
    for k in range(3, K + 1):
        total += Fraction(1, 2**k)
    return total


def test_chain_env_weight_against_summation_oracle():
    for K in range(1, 25):
        assert chain_env_weight(MU_F, K).as_fraction() == geometric_weight_sum(K)
    assert chain_env_weight(MU_F, math.inf) == ONE
    a = Dyadic(1, 3)
    fam = ParamFamily(a)
    for K in range(1, 25):
        assert chain_env_weight(fam, K).as_fraction() == family_weight_sum(
            a.as_fraction(), K
        )
    assert chain_env_weight(fam, math.inf) == ONE
    # the family passes through the plain chain measure at a = 1/2
    half = ParamFamily(HALF)
    for K in list(range(1, 22)) + [math.inf]:
        assert chain_env_weight(half, K) == chain_env_weight(MU_F, K)


def test_param_family_validation():
    with pytest.raises(ValueError):
        ParamFamily(Dyadic(3, 2))  # 3/4 boundary excluded
    with pytest.raises(ValueError):
        ParamFamily(ZERO)
    ParamFamily(Dyadic(5, 3))  # 5/8 fine


def test_env_prob_chain_examples():
    assert env_prob(MU_F, COMMUTATOR) == Exact(HALF)
    assert env_prob(MU_F, Y2_WORD) == Exact(Dyadic(3, 2))
    assert env_prob(MU_F, A) == Exact(ZERO)
    for mu in (MU_F, MU_G, DiracTrivial(), ParamFamily(Dyadic(1, 2))):
        assert env_prob(mu, IDENTITY) == Exact(ONE)


def test_env_event_type():
    from irslab.measures import EnvEvent

    e = EnvEvent([COMMUTATOR, IDENTITY, COMMUTATOR, Y2_WORD])
    assert e.words == (COMMUTATOR, Y2_WORD)
    assert EnvEvent(COMMUTATOR) == EnvEvent([COMMUTATOR])
    assert env_prob(MU_F, e) == env_prob(MU_F, (COMMUTATOR, Y2_WORD))
    assert len({EnvEvent(COMMUTATOR), EnvEvent([COMMUTATOR])}) == 1


def test_env_prob_event_uses_min_depth():
    # joint event: depth min(1, 2) = 1
    assert env_prob(MU_F, (COMMUTATOR, Y2_WORD)) == Exact(HALF)
    # monotone event law
    assert env_prob(MU_F, (COMMUTATOR,)).value >= env_prob(MU_F, (COMMUTATOR, Y2_WORD)).value
    assert env_prob(MU_F, (Y2_WORD, A)) == Exact(ZERO)


def test_dirac_descriptors():
    assert env_prob(DiracTrivial(), COMMUTATOR) == Exact(ZERO)
    assert env_prob(DiracGamma(1), COMMUTATOR) == Exact(ONE)
    assert env_prob(DiracGamma(2), COMMUTATOR) == Exact(ZERO)
    assert env_prob(DiracGamma(2), Y2_WORD) == Exact(ONE)
    assert kernel_contains(DiracGamma(1), COMMUTATOR) is CertifiedBool.TRUE


def test_coinduced_depth_profile_is_negation_permutation():
    # oracle for the closed form: the i-th conjugate of the commutator has
    # depth idx(-point(i)), a ring-preserving permutation of the indices
    from irslab._backend import kernels

    for i in range(1, (2 * 6 + 1) ** 2 + 1):
        p, q = point(i)
        assert kernels.shifted_depth(COMMUTATOR.letters, p, q) == idx((-p, -q))


def test_coinduced_value_matches_direct_product_oracle():
    v = env_prob(MU_G, COMMUTATOR, WIDTH6)
    assert v.width().as_fraction() <= Fraction(1, 10**6)
    lo_ref, hi_ref = dst_constant_interval()
    assert v.lo.as_fraction() <= hi_ref and lo_ref <= v.hi.as_fraction()
    assert v.interval().contains(Fraction("0.2887880951"))
    # plain inner (no induced wrapper) gives the same value
    v2 = env_prob(CoinducedProduct(GeomGamma()), COMMUTATOR, WIDTH6)
    assert v2.interval().intersects(v.interval())


def test_coinduced_single_syllable_words_share_the_constant():
    # the shifted support is still a bijective relabeling of the grid
    for word in (Y2_WORD, expand(y(5)), expand(y(1, 2))):
        v = env_prob(MU_G, word, WIDTH6)
        assert v.interval().contains(Fraction("0.2887880951"))


def test_coinduced_param_family_closed_form():
    # oracle: a * (3/4) * prod_{j>=3}(1 - 2^-j) computed directly
    for a in (Dyadic(1, 3), Dyadic(1, 2), Dyadic(5, 3)):
        def factors():
            yield a
            yield Dyadic(3, 2)
            j = 3
            while True:
                yield one_minus_pow2(j)
                j += 1

        oracle = certified_product(factors(), lambda n: pow2(max(n, 2)), pow2(30))
        got = env_prob(family_measure(a), COMMUTATOR, pow2(30))
        assert got.interval().intersects(oracle.interval())
        # equivalently 2a * prod_{j>=1}(1 - 2^-j)
        lo_ref, hi_ref = dst_constant_interval()
        two_a = 2 * a.as_fraction()
        assert got.lo.as_fraction() <= two_a * hi_ref
        assert two_a * lo_ref <= got.hi.as_fraction()


def test_intersect_generate_powers_with_enumeration_oracle():
    # enumerate i.i.d. level tuples to weight 2^-20 per coordinate
    for w, K in ((COMMUTATOR, 1), (Y2_WORD, 2)):
        assert depth(w) == K
        for n in (1, 2, 3):
            inter = env_prob(IntersectPower(n, MU_F), w).value.as_fraction()
            gen = env_prob(GeneratePower(n, MU_F), w).value.as_fraction()
            p_inter = Fraction(0)
            p_gen = Fraction(0)
            for levels in itertools.product(range(1, 21), repeat=n):
                weight = Fraction(1, 2 ** sum(levels))
                if max(levels) <= K:
                    p_inter += weight
                if min(levels) <= K:
                    p_gen += weight
            slack = n * Fraction(1, 2**20)
            assert p_inter <= inter <= p_inter + slack
            assert p_gen <= gen <= p_gen + slack
    # the spec instance values
    assert env_prob(IntersectPower(2, MU_F), COMMUTATOR) == Exact(Dyadic(1, 2))
    assert env_prob(GeneratePower(2, MU_F), COMMUTATOR) == Exact(Dyadic(3, 2))


def test_power_descriptors_reject_non_chain():
    with pytest.raises(ValueError):
        IntersectPower(2, MU_G)
    with pytest.raises(ValueError):
        GeneratePower(2, Convex(((HALF, MU_F), (HALF, DiracTrivial()))))
    with pytest.raises(ValueError):
        IntersectPower(0, MU_F)


def test_coinduced_point_mass_inners():
    # intersections of conjugates of a point mass are exactly decidable:
    # level one is the whole commutator subgroup, higher levels meet in
    # the trivial subgroup because some conjugate depth is one
    assert env_prob(CoinducedProduct(DiracGamma(1)), COMMUTATOR) == Exact(ONE)
    assert env_prob(CoinducedProduct(DiracGamma(2)), COMMUTATOR) == Exact(ZERO)
    assert env_prob(CoinducedProduct(DiracGamma(7)), Y2_WORD) == Exact(ZERO)
    assert env_prob(CoinducedProduct(DiracGamma(3)), expand(y(9, -2))) == Exact(ZERO)
    assert env_prob(CoinducedProduct(DiracTrivial()), COMMUTATOR) == Exact(ZERO)
    assert env_prob(CoinducedProduct(DiracTrivial()), IDENTITY) == Exact(ONE)
    mu = CoinducedProduct(InducedFinite((IDENTITY,), DiracGamma(1)))
    assert env_prob(mu, COMMUTATOR) == Exact(ONE)


def test_coinduced_rejects_unsupported_inner():
    with pytest.raises(ValueError):
        CoinducedProduct(Pushforward(A, MU_F))
    with pytest.raises(ValueError):
        InducedFinite((A,), MU_F)  # rep outside the commutator subgroup
    with pytest.raises(ValueError):
        InducedFinite((IDENTITY, COMMUTATOR, IDENTITY), MU_F)  # count not a power of two


def test_pushforward_convention():
    g = Word.parse("ab")
    mu = Pushforward(g, MU_F)
    for w in (COMMUTATOR, Y2_WORD, expand(y(3))):
        moved = conjugate(g.inverse(), w)
        assert env_prob(mu, w) == env_prob(MU_F, moved)
    # pushing forward by a commutator-subgroup element fixes every chain
    # subgroup, so probabilities are unchanged
    c = expand(y(2))
    for w in (COMMUTATOR, Y2_WORD):
        assert env_prob(Pushforward(c, MU_F), w) == env_prob(MU_F, w)


def test_induced_average_equals_chain_on_commutator_reps():
    mu = InducedFinite((IDENTITY, expand(y(1)), expand(y(2)), expand(y(4, -1))), MU_F)
    for w in (COMMUTATOR, Y2_WORD, A):
        assert env_prob(mu, w) == env_prob(MU_F, w)
    assert env_prob(MU_HF, COMMUTATOR) == Exact(HALF)


def test_convex_combination():
    mu = Convex(((HALF, MU_F), (HALF, DiracTrivial())))
    # (1/2) * (1/2) + (1/2) * 0 = 1/4
    assert env_prob(mu, COMMUTATOR) == Exact(Dyadic(1, 2))
    with pytest.raises(ValueError):
        Convex(((HALF, MU_F), (Dyadic(1, 2), MU_F), (HALF, MU_F)))


def test_kernel_contains_examples():
    assert kernel_contains(MU_F, IDENTITY) is CertifiedBool.TRUE
    assert kernel_contains(MU_F, COMMUTATOR) is CertifiedBool.FALSE
    assert kernel_contains(MU_G, COMMUTATOR) is CertifiedBool.FALSE
    assert kernel_contains(MU_G, A) is CertifiedBool.FALSE
    assert kernel_contains(DiracGamma(3), expand(y(5))) is CertifiedBool.TRUE


def test_essential_examples():
    assert essential(MU_G, COMMUTATOR) is CertifiedBool.TRUE
    assert essential(MU_G, A) is CertifiedBool.FALSE
    v = env_prob(MU_F, expand(y(5)))
    assert v == Exact(one_minus_pow2(5))
    assert essential(MU_F, expand(y(5))) is CertifiedBool.TRUE


def test_supported_in():
    assert supported_in(MU_F, Region.COMMUTATOR) is True
    assert supported_in(MU_G, Region.COMMUTATOR) is True
    assert supported_in(MU_F, Region.TRIVIAL) is False
    assert supported_in(MU_G, Region.TRIVIAL) is False
    assert supported_in(DiracTrivial(), Region.TRIVIAL) is True
    assert supported_in(Pushforward(A, MU_F), Region.COMMUTATOR) is True
    assert supported_in(Convex(((HALF, MU_F), (HALF, DiracTrivial()))), Region.TRIVIAL) is False
    assert supported_in(MU_G, Region.WHOLE) is True


def test_combination_identities_examples():
    rep = check_combination_identities(MU_F, DiracTrivial(), [COMMUTATOR], n=3)
    assert rep["pass"]
    # essential from the chain side: (1/2) * (1/2) = 1/4 > 0
    conv = Convex(((HALF, MU_F), (HALF, DiracTrivial())))
    assert env_prob(conv, COMMUTATOR) == Exact(Dyadic(1, 2))
    assert kernel_contains(conv, COMMUTATOR) is CertifiedBool.FALSE
    assert essential(conv, COMMUTATOR) is CertifiedBool.TRUE

    rep = check_combination_identities(MU_F, MU_F, [COMMUTATOR, Y2_WORD, A], n=2)
    assert rep["pass"]
    rep = check_combination_identities(MU_F, ParamFamily(Dyadic(1, 2)), [IDENTITY], n=3)
    assert rep["pass"]


def test_combination_identities_random_words():
    rng = random.Random(808)
    words = [IDENTITY, COMMUTATOR, A]
    words += [random_word(rng, 8) for _ in range(30)]
    words += [random_commutator_word(rng, 10) for _ in range(20)]
    for other in (DiracTrivial(), ParamFamily(Dyadic(1, 2)), DiracGamma(2)):
        rep = check_combination_identities(MU_F, other, words)
        assert rep["pass"], rep


def test_chain_limit_laws():
    words = [COMMUTATOR, Y2_WORD, expand(YWord(((3, 1), (1, 1), (3, -1), (1, -1))))]
    for w in words:
        K = depth(w)
        for n in range(1, 11):
            inter = env_prob(IntersectPower(n, MU_F), w).value
            gen = env_prob(GeneratePower(n, MU_F), w).value
            want_inter = ONE
            for _ in range(n):
                want_inter = want_inter * one_minus_pow2(K)
            assert inter == want_inter
            assert gen == one_minus_pow2(n * K)
        # limits: intersect powers vanish, generate powers fill up
        p10_inter = env_prob(IntersectPower(10, MU_F), w).value.as_fraction()
        p10_gen = env_prob(GeneratePower(10, MU_F), w).value.as_fraction()
        assert p10_inter < Fraction(1, 1000) or K > 1
        assert p10_gen > Fraction(999, 1000)


def test_invariance_spot_checks():
    rng = random.Random(4040)
    for _ in range(12):
        g = random_word(rng, 6)
        w = random_commutator_word(rng, 6) if rng.random() < 0.7 else random_word(rng, 6)
        v1 = env_prob(MU_G, w, WIDTH6)
        v2 = env_prob(MU_G, conjugate(g.inverse(), w), WIDTH6)
        assert v1.interval().intersects(v2.interval())


def test_faithfulness_small_sweep():
    for w in iter_reduced(5):
        assert kernel_contains(MU_G, w) is CertifiedBool.FALSE


def test_mixing_defect_dependent_case():
    # oracle: p - p^2 for p the digital-search-tree constant
    lo_ref, hi_ref = dst_constant_interval()
    d = mixing_defect(COMMUTATOR, COMMUTATOR, IDENTITY, WIDTH6)
    ref_lo = lo_ref - hi_ref * hi_ref
    ref_hi = hi_ref - lo_ref * lo_ref
    assert d.lo.as_fraction() <= ref_hi and ref_lo <= d.hi.as_fraction()
    assert abs(float(d.midpoint().as_fraction()) - 0.2053895) < 1e-4


def test_mixing_defect_shifted_case():
    d = mixing_defect(COMMUTATOR, COMMUTATOR, A**10, WIDTH6)
    assert d.hi.as_fraction() <= Fraction(1, 10**6)


def test_mixing_defect_identity_word():
    d = mixing_defect(IDENTITY, COMMUTATOR, A, WIDTH6)
    assert d.lo == ZERO and d.hi == ZERO
    with pytest.raises(ValueError):
        mixing_defect(A, COMMUTATOR, IDENTITY)


def test_param_family_agrees_with_geom_at_half():
    fam = ParamFamily(HALF)
    rng = random.Random(11)
    for _ in range(20):
        w = random_commutator_word(rng, 10) if rng.random() < 0.5 else random_word(rng, 6)
        assert env_prob(fam, w) == env_prob(MU_F, w)
    vg = env_prob(MU_G, COMMUTATOR, WIDTH6)
    vf = env_prob(family_measure(HALF), COMMUTATOR, WIDTH6)
    assert vg.interval().intersects(vf.interval())


def test_monotone_event_law():
    rng = random.Random(202)
    for _ in range(20):
        e_small = [random_commutator_word(rng, 8)]
        e_big = e_small + [random_commutator_word(rng, 8)]
        for mu in (MU_F, ParamFamily(Dyadic(1, 3))):
            assert env_prob(mu, e_small).value >= env_prob(mu, e_big).value
        v_small = env_prob(MU_G, e_small, WIDTH6)
        v_big = env_prob(MU_G, e_big, WIDTH6)
        assert v_small.hi >= v_big.lo


def test_descriptor_json_round_trip():
    descriptors = [
        MU_F,
        MU_G,
        MU_HF,
        ParamFamily(Dyadic(3, 3)),
        DiracTrivial(),
        DiracGamma(4),
        Pushforward(Word.parse("ab"), MU_F),
        Convex(((HALF, MU_F), (HALF, DiracTrivial()))),
        IntersectPower(3, MU_F),
        GeneratePower(2, ParamFamily(Dyadic(1, 2))),
        family_measure(Dyadic(1, 3)),
    ]
    for mu in descriptors:
        assert descriptor_from_json(descriptor_to_json(mu)) == mu


def test_parse_measure():
    assert parse_measure("mu_F") == MU_F
    assert parse_measure("mu_G") == MU_G
    assert parse_measure("mu_aG:1/2^2") == family_measure(Dyadic(1, 2))
    assert parse_measure('{"type": "geom_gamma"}') == MU_F
    with pytest.raises(ValueError):
        parse_measure("mu_aG:3/4")
    with pytest.raises(ValueError):
        parse_measure('{"type": "nope"}')


def test_env_prob_width_flag_propagates():
    v = env_prob(MU_G, COMMUTATOR, pow2(40), factor_cap=4)
    assert not v.width_reached
    assert v.lo <= v.hi


def _random_descriptor(rng, depth_budget=2):
    atoms = [
        MU_F,
        ParamFamily(Dyadic(rng.choice((1, 3, 5)), 3)),
        DiracTrivial(),
        DiracGamma(rng.randint(1, 5)),
    ]
    if depth_budget == 0:
        return rng.choice(atoms)
    kind = rng.randrange(6)
    if kind == 0:
        return Pushforward(random_word(rng, 5), _random_descriptor(rng, depth_budget - 1))
    if kind == 1:
        return Convex(
            (
                (HALF, _random_descriptor(rng, depth_budget - 1)),
                (HALF, _random_descriptor(rng, depth_budget - 1)),
            )
        )
    if kind == 2:
        return IntersectPower(rng.randint(1, 4), rng.choice(atoms))
    if kind == 3:
        return GeneratePower(rng.randint(1, 4), rng.choice(atoms))
    if kind == 4:
        return CoinducedProduct(rng.choice(atoms[:2]))
    return rng.choice(atoms)


def test_coinduced_enclosure_nesting_fuzz():
    rng = random.Random(909)
    for _ in range(8):
        w = random_commutator_word(rng, 10)
        coarse = env_prob(MU_G, w, pow2(10))
        fine = env_prob(MU_G, w, pow2(30))
        assert coarse.lo <= fine.lo <= fine.hi <= coarse.hi


def test_env_prob_randomized_descriptor_soundness():
    # probabilities stay in [0, 1], enclosures stay ordered, and shrinking
    # the event can only shrink the probability
    rng = random.Random(606060)
    for _ in range(60):
        mu = _random_descriptor(rng)
        words = [random_commutator_word(rng, 8)]
        if rng.random() < 0.4:
            words.append(random_word(rng, 5))
        v = env_prob(mu, words, pow2(12))
        assert ZERO <= v.lo <= v.hi <= ONE
        sub = env_prob(mu, words[:1], pow2(12))
        assert sub.hi >= v.lo
        if isinstance(v, Exact) and isinstance(sub, Exact):
            assert sub.value >= v.value
