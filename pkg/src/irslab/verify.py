"""Batch verification suites behind the CLI.

Each suite returns a JSON-ready report with a top-level "pass" flag; the
CLI turns that into its exit code.  All randomness is seeded and echoed
into the report so runs replay byte-identically.
"""

from __future__ import annotations

import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Iterable, List

from irslab._backend import thread_count
from irslab.dyadic import Dyadic, one_minus_pow2, pow2
from irslab.measures import (
    MU_F,
    MU_G,
    CertifiedBool,
    DiracTrivial,
    GeneratePower,
    IntersectPower,
    ParamFamily,
    Region,
    check_combination_identities,
    env_prob,
    essential,
    kernel_contains,
    mixing_defect,
    supported_in,
)
from irslab.words import A, COMMUTATOR, IDENTITY, Word, conjugate
from irslab.ywords import YWord, depth, expand

DEFAULT_SEED = 20240801


def iter_reduced_words(max_len: int, include_identity: bool = False) -> Iterable[Word]:
    """All freely reduced words of length <= max_len, shortest first."""
    if include_identity:
        yield IDENTITY
    frontier: List[tuple] = [()]
    for _ in range(max_len):
        new_frontier = []
        for w in frontier:
            for x in (1, -1, 2, -2):
                if w and w[-1] == -x:
                    continue
                nw = w + (x,)
                new_frontier.append(nw)
                yield Word._raw(nw)
        frontier = new_frontier


def commutator_pool(max_len: int) -> List[Word]:
    """Nontrivial commutator-subgroup words of length <= max_len."""
    return [
        w for w in iter_reduced_words(max_len) if w.abelianization() == (0, 0)
    ]


def random_reduced_word(rng: random.Random, max_len: int) -> Word:
    n = rng.randint(1, max_len)
    letters = []
    for _ in range(n):
        choices = [x for x in (1, -1, 2, -2) if not letters or x != -letters[-1]]
        letters.append(rng.choice(choices))
    return Word._raw(tuple(letters))


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------

def _faithful_one(w: Word) -> dict:
    verdict = kernel_contains(MU_G, w)
    p, q = w.abelianization()
    if p or q:
        certificate = {"reason": "nonzero_abelianization", "abelianization": [p, q]}
    else:
        certificate = {"reason": "finite_depth", "depth": depth(w)}
    return {
        "ok": verdict is CertifiedBool.FALSE,
        "word": str(w),
        "certificate": certificate,
    }


def suite_faithful(max_len: int = 8) -> dict:
    """Every nontrivial word up to the length bound is certified outside
    the kernel of the co-induced measure."""
    words = list(iter_reduced_words(max_len))
    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_faithful_one, words, chunksize=256))
    else:
        results = [_faithful_one(w) for w in words]
    failures = [r for r in results if not r["ok"]]
    depth_hist: dict = {}
    n_outside = 0
    for r in results:
        cert = r["certificate"]
        if cert["reason"] == "finite_depth":
            key = str(cert["depth"])
            depth_hist[key] = depth_hist.get(key, 0) + 1
        else:
            n_outside += 1
    return {
        "suite": "faithful",
        "params": {"max_len": max_len},
        "n_words": len(words),
        "n_certified_outside_kernel": len(words) - len(failures),
        "n_outside_commutator": n_outside,
        "depth_histogram": dict(sorted(depth_hist.items(), key=lambda kv: int(kv[0]))),
        "failures": [r["word"] for r in failures],
        "pass": not failures,
    }


def suite_invariance(
    pairs: int = 100,
    max_len: int = 6,
    width: Dyadic = None,
    seed: int = DEFAULT_SEED,
) -> dict:
    """Envelope enclosures before and after conjugating the event must
    intersect (invariance holds exactly; enclosures witness it at width)."""
    width = width if width is not None else pow2(21)
    rng = random.Random(seed)
    pool = commutator_pool(max_len)
    checks = []
    n_fail = 0
    for _ in range(pairs):
        g = random_reduced_word(rng, max_len)
        w = rng.choice(pool) if rng.random() < 0.5 else random_reduced_word(rng, max_len)
        moved = conjugate(g.inverse(), w)
        v1 = env_prob(MU_G, (w,), width)
        v2 = env_prob(MU_G, (moved,), width)
        ok = v1.interval().intersects(v2.interval())
        n_fail += 0 if ok else 1
        checks.append(
            {
                "g": str(g),
                "w": str(w),
                "value": v1.to_json(),
                "conjugated_value": v2.to_json(),
                "intersects": ok,
            }
        )
    return {
        "suite": "invariance",
        "params": {"pairs": pairs, "max_len": max_len, "width": str(width), "seed": seed},
        "n_failures": n_fail,
        "checks": checks,
        "pass": n_fail == 0,
    }


def suite_closure(width: Dyadic = None) -> dict:
    """Nontriviality and closure flags of the co-induced measure."""
    width = width if width is not None else pow2(21)
    ess_comm = essential(MU_G, COMMUTATOR, width)
    supp_comm = supported_in(MU_G, Region.COMMUTATOR)
    ess_a = essential(MU_G, A, width)
    supp_triv = supported_in(MU_G, Region.TRIVIAL)
    checks = [
        {
            "check": "commutator_is_essential",
            "got": ess_comm.value,
            "ok": ess_comm is CertifiedBool.TRUE,
        },
        {
            "check": "supported_in_commutator_subgroup",
            "got": supp_comm,
            "ok": supp_comm is True,
        },
        {
            "check": "generator_a_not_essential",
            "got": ess_a.value,
            "ok": ess_a is CertifiedBool.FALSE,
        },
        {
            "check": "not_supported_in_trivial_subgroup",
            "got": supp_triv,
            "ok": supp_triv is False,
        },
    ]
    return {
        "suite": "closure",
        "params": {"width": str(width)},
        "checks": checks,
        "pass": all(c["ok"] for c in checks),
    }


def chain_limit_words() -> List[Word]:
    return [
        COMMUTATOR,
        expand(YWord(((2, 1),))),
        expand(YWord(((3, 1), (1, 1), (3, -1), (1, -1)))),
    ]


def suite_chain_limits(n_max: int = 10) -> dict:
    """Exact power laws for intersection and generation powers of the
    chain measure, monotone in the power."""
    checks = []
    all_ok = True
    for w in chain_limit_words():
        K = depth(w)
        cdf = one_minus_pow2(K)
        for n in range(1, n_max + 1):
            inter = env_prob(IntersectPower(n, MU_F), (w,))
            gen = env_prob(GeneratePower(n, MU_F), (w,))
            want_inter = cdf
            for _ in range(n - 1):
                want_inter = want_inter * cdf
            want_gen = one_minus_pow2(n * K)
            ok = inter.value == want_inter and gen.value == want_gen
            all_ok = all_ok and ok
            checks.append(
                {
                    "word": str(w),
                    "depth": K,
                    "n": n,
                    "intersect_power": str(inter.value),
                    "generate_power": str(gen.value),
                    "ok": ok,
                }
            )
    return {
        "suite": "chain-limits",
        "params": {"n_max": n_max},
        "checks": checks,
        "pass": all_ok,
    }


def suite_combination(sample_size: int = 200, seed: int = DEFAULT_SEED) -> dict:
    """Kernel and essential identities for convex combinations, on the two
    standard measure pairs."""
    rng = random.Random(seed)
    pool = commutator_pool(6)
    words = [IDENTITY, COMMUTATOR]
    while len(words) < sample_size:
        if rng.random() < 0.5:
            words.append(rng.choice(pool))
        else:
            words.append(random_reduced_word(rng, 8))
    pairs = [
        ("geom_vs_dirac_trivial", MU_F, DiracTrivial()),
        ("geom_vs_param_quarter", MU_F, ParamFamily(Dyadic(1, 2))),
    ]
    reports = {}
    all_ok = True
    for name, m1, m2 in pairs:
        rep = check_combination_identities(m1, m2, words)
        reports[name] = {"n_words": rep["n_words"], "pass": rep["pass"]}
        all_ok = all_ok and rep["pass"]
    return {
        "suite": "combination",
        "params": {"sample_size": sample_size, "seed": seed},
        "pairs": reports,
        "pass": all_ok,
    }


def suite_mixing(shift_exp: int = 10, width: Dyadic = None) -> dict:
    """Independence defect of the shifted pair must vanish below 1e-6
    while the unshifted (dependent) pair stays near p - p^2."""
    width = width if width is not None else pow2(21)
    shifted = mixing_defect(COMMUTATOR, COMMUTATOR, A ** shift_exp, width)
    dependent = mixing_defect(COMMUTATOR, COMMUTATOR, IDENTITY, width)
    p = env_prob(MU_G, (COMMUTATOR,), pow2(24)).interval()
    reference = (p - p * p).abs()
    ok_shifted = shifted.hi.as_fraction() <= Fraction(1, 10**6)
    ok_dependent = dependent.interval().intersects(reference) and abs(
        float(dependent.midpoint().as_fraction() - reference.midpoint().as_fraction())
    ) <= 1e-4
    return {
        "suite": "mixing",
        "params": {"shift_exp": shift_exp, "width": str(width)},
        "shifted_defect": shifted.to_json(),
        "dependent_defect": dependent.to_json(),
        "dependent_reference": reference.to_json(),
        "checks": [
            {"check": "shifted_defect_below_1e-6", "ok": ok_shifted},
            {"check": "dependent_defect_near_reference", "ok": ok_dependent},
        ],
        "pass": ok_shifted and ok_dependent,
    }


SUITES = {
    "faithful": suite_faithful,
    "invariance": suite_invariance,
    "closure": suite_closure,
    "chain-limits": suite_chain_limits,
    "combination": suite_combination,
    "mixing": suite_mixing,
}
