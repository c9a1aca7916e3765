"""Symbolic measures on the subgroup space and envelope probabilities.

A measure is a small immutable descriptor tree.  The base atoms sit on
the descending chain Gamma_k (the kernels of the retractions phi_k), so
the probability that a random subgroup contains a finite word set E is a
function of the minimal depth over E, and every composite descriptor
evaluates either exactly (dyadic) or as a certified enclosure via the
grid-tail bound of the co-induced infinite product.

Convention, fixed for the whole artifact: a group element g acts on
subgroups by D -> g D g^-1, hence on measures by
(g_* mu)(Env w) = mu(Env g^-1 w g).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple, Union

from irslab._backend import kernels
from irslab.dyadic import (
    ZERO,
    ONE,
    Dyadic,
    Enclosure,
    Exact,
    ProbabilityValue,
    certified_product,
    one_minus_pow2,
    pow2,
)
from irslab.words import IDENTITY, Word, conjugate
from irslab.ywords import depth, rewrite_to_y

# Instance constants of the parametrized family: the chain first drops at
# level 2, and the reweighted head mass is 1/2 + 1/4.
FAMILY_STEP = 2
FAMILY_HEAD_MASS = Dyadic(3, 2)

DEFAULT_TARGET_WIDTH = pow2(21)
DEFAULT_FACTOR_CAP = 10**6

INSTANCE_DESCRIPTION = {
    "group": "free group on a, b",
    "relator": "none (free)",
    "base_element": "abAB",
    "cyclic_subgroup": "<abAB>",
    "normal_closure": "commutator subgroup",
    "transversal": "a^p b^q enumerated by the square spiral on Z^2",
    "finite_transversal": [""],
    "pushforward_convention": "(g_*mu)(Env w) = mu(Env g^-1 w g)",
}


class EnvEvent:
    """The envelope event of a finite word set: all subgroups containing
    every word.  Identity words are dropped; the empty event is the sure
    event."""

    __slots__ = ("words",)

    def __init__(self, words):
        if isinstance(words, Word):
            words = (words,)
        self.words = tuple(
            sorted(
                {w for w in words if not w.is_identity()},
                key=lambda w: (len(w), w.letters),
            )
        )

    def __eq__(self, other):
        return isinstance(other, EnvEvent) and self.words == other.words

    def __hash__(self):
        return hash(self.words)

    def __repr__(self):
        return "EnvEvent(%s)" % (", ".join(repr(str(w)) for w in self.words),)


# ---------------------------------------------------------------------------
# descriptors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeomGamma:
    """Weight 2^-k on the k-th chain subgroup, k >= 1."""


@dataclass(frozen=True)
class ParamFamily:
    """Head-reweighted chain measure: weight a on level 1, 3/4 - a on
    level 2, and 2^-k on levels k >= 3; requires 0 < a < 3/4 dyadic.
    At a = 1/2 this coincides with GeomGamma."""

    a: Dyadic

    def __post_init__(self):
        if not isinstance(self.a, Dyadic):
            raise TypeError("parameter a must be a Dyadic")
        if not (ZERO < self.a < FAMILY_HEAD_MASS):
            raise ValueError("parameter a must satisfy 0 < a < 3/4, got %s" % (self.a,))


@dataclass(frozen=True)
class DiracTrivial:
    """Point mass on the trivial subgroup."""


@dataclass(frozen=True)
class DiracGamma:
    """Point mass on the k-th chain subgroup."""

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("chain level must be >= 1, got %r" % (self.k,))


CHAIN_TYPES = (GeomGamma, ParamFamily, DiracTrivial, DiracGamma)


@dataclass(frozen=True)
class Pushforward:
    g: Word
    inner: "Measure"


@dataclass(frozen=True)
class Convex:
    """Convex combination; dyadic weights must sum exactly to one."""

    parts: Tuple[Tuple[Dyadic, "Measure"], ...]

    def __post_init__(self):
        total = ZERO
        for w, _ in self.parts:
            if not isinstance(w, Dyadic) or w <= ZERO:
                raise ValueError("convex weights must be positive dyadics")
            total = total + w
        if total != ONE:
            raise ValueError("convex weights sum to %s, not 1" % (total,))


@dataclass(frozen=True)
class InducedFinite:
    """Average of pushforwards over a finite transversal.

    The representative count must be a power of two (so the average stays
    dyadic) and every representative must lie in the commutator subgroup,
    which keeps conjugate depths unchanged and the product tails certified.
    """

    reps: Tuple[Word, ...]
    inner: "Measure"

    def __post_init__(self):
        m = len(self.reps)
        if m < 1 or m & (m - 1):
            raise ValueError("representative count must be a power of two, got %d" % m)
        for r in self.reps:
            if r.abelianization() != (0, 0):
                raise ValueError(
                    "representative %r is outside the commutator subgroup" % str(r)
                )
        if not isinstance(self.inner, CHAIN_TYPES):
            raise ValueError("induced averages are supported over chain measures only")


@dataclass(frozen=True)
class CoinducedProduct:
    """Intersection of the pushforwards of the inner measure over the full
    grid transversal.  Supported inners are the chain atoms and finite
    averages of them; each carries a certified product tail."""

    inner: "Measure"

    def __post_init__(self):
        inner = self.inner
        if not isinstance(inner, CHAIN_TYPES + (InducedFinite,)):
            raise ValueError(
                "co-induction is supported over chain measures and finite "
                "averages of them, got %r" % (type(inner).__name__,)
            )


@dataclass(frozen=True)
class IntersectPower:
    """Intersection of n independent copies; chain measures only, where
    the intersection of chain atoms is the atom of maximal level."""

    n: int
    inner: "Measure"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("power must be >= 1")
        if not isinstance(self.inner, CHAIN_TYPES):
            raise ValueError("intersection powers are defined over chain measures only")


@dataclass(frozen=True)
class GeneratePower:
    """Subgroup generated by n independent copies; chain measures only,
    where the join of chain atoms is the atom of minimal level."""

    n: int
    inner: "Measure"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("power must be >= 1")
        if not isinstance(self.inner, CHAIN_TYPES):
            raise ValueError("generation powers are defined over chain measures only")


Measure = Union[
    GeomGamma,
    ParamFamily,
    DiracTrivial,
    DiracGamma,
    Pushforward,
    Convex,
    InducedFinite,
    CoinducedProduct,
    IntersectPower,
    GeneratePower,
]

MU_F = GeomGamma()
MU_HF = InducedFinite((IDENTITY,), MU_F)
MU_G = CoinducedProduct(MU_HF)


def family_measure(a: Dyadic) -> CoinducedProduct:
    """The co-induced member of the parametrized family at parameter a."""
    return CoinducedProduct(InducedFinite((IDENTITY,), ParamFamily(a)))


# ---------------------------------------------------------------------------
# chain weights and events
# ---------------------------------------------------------------------------

def chain_env_weight(mu, K) -> Dyadic:
    """Total weight of chain atoms at level <= K (the chain CDF)."""
    if K is not math.inf and K < 1:
        raise ValueError("level must be >= 1 or inf, got %r" % (K,))
    if isinstance(mu, GeomGamma):
        return one_minus_pow2(K)
    if isinstance(mu, ParamFamily):
        if K is math.inf:
            return ONE
        if K == 1:
            return mu.a
        if K == FAMILY_STEP:
            return FAMILY_HEAD_MASS
        return one_minus_pow2(K)
    raise TypeError("chain_env_weight expects GeomGamma or ParamFamily")


def _chain_cdf(mu, K) -> Dyadic:
    if isinstance(mu, (GeomGamma, ParamFamily)):
        return chain_env_weight(mu, K)
    if isinstance(mu, DiracGamma):
        return ONE if (K is math.inf or mu.k <= K) else ZERO
    if isinstance(mu, DiracTrivial):
        return ONE if K is math.inf else ZERO
    raise TypeError("not a chain measure: %r" % (mu,))


def _event_words(words) -> tuple:
    if isinstance(words, EnvEvent):
        return words.words
    return EnvEvent(words).words


def _event_depth(words):
    """Minimal depth over the event; None when some word leaves the
    commutator subgroup (envelope then has probability zero on chain atoms)."""
    K = math.inf
    for w in words:
        if w.abelianization() != (0, 0):
            return None
        K = min(K, depth(w))
    return K


def _support_radius(words) -> int:
    r = 0
    for w in words:
        for i, _ in rewrite_to_y(w).syllables:
            p, q = kernels.spiral_point(i)
            ring = max(abs(p), abs(q))
            if ring > r:
                r = ring
    return r


def _grid_tail(count_done: int, radius: int) -> Dyadic:
    """Certified bound on the summed per-coordinate defect beyond the first
    count_done spiral indices, for an event of the given support radius.

    A conjugate by a ring-l transversal element has depth at least
    ring_start(l - radius) once l > radius, so each skipped coordinate on
    ring l contributes at most 2^-ring_start(l - radius); rings at or
    below the radius carry no bound (returns 1 until they are consumed).
    """
    p, q = kernels.spiral_point(count_done + 1)
    l0 = max(abs(p), abs(q))
    if l0 <= radius:
        return ONE
    remaining_in_ring = (2 * l0 + 1) ** 2 - count_done
    total = Dyadic(remaining_in_ring) * pow2(kernels.ring_start(l0 - radius))
    for l in range(l0 + 1, l0 + 7):
        total = total + Dyadic(8 * l) * pow2(kernels.ring_start(l - radius))
    # consecutive ring terms shrink by more than half, so twice the next
    # term closes the series
    total = total + Dyadic(16 * (l0 + 7)) * pow2(kernels.ring_start(l0 + 7 - radius))
    return total


def _coordinate_factor(inner, words, p, q) -> Dyadic:
    """Envelope probability of the event conjugated back through the
    transversal element a^p b^q, under a chain or induced-average inner."""
    if isinstance(inner, InducedFinite):
        m = len(inner.reps)
        total = ZERO
        for rep in inner.reps:
            inv_rep = kernels.inv_word(rep.letters)
            K = math.inf
            for w in words:
                t = kernels.transversal_letters(p, q)
                c = kernels.mul_words(kernels.mul_words(kernels.inv_word(t), w.letters), t)
                c = kernels.mul_words(kernels.mul_words(inv_rep, c), rep.letters)
                d = kernels.depth_syllables(kernels.rewrite_syllables(c)) if c else 0
                K = min(K, d if d else math.inf)
            total = total + _chain_cdf(inner.inner, K)
        return total * pow2(m.bit_length() - 1)
    K = math.inf
    for w in words:
        d = kernels.shifted_depth(w.letters, p, q)
        K = min(K, d if d else math.inf)
    return _chain_cdf(inner, K)


def _coinduced_value(inner, words, target_width, factor_cap) -> ProbabilityValue:
    radius = _support_radius(words)
    core = inner.inner if isinstance(inner, InducedFinite) else inner

    if isinstance(core, (GeomGamma, ParamFamily)):
        # beyond the support rings every conjugate depth is >= 2, where the
        # per-coordinate defect obeys 1 - cdf(K) <= 2^-K
        def tail_bound(done):
            return _grid_tail(done, radius)
    else:
        # point masses: factors are exactly one once the ring lower bound
        # clears the atom level (and exactly zero inside if violated)
        level = core.k if isinstance(core, DiracGamma) else None

        def tail_bound(done, _level=level):
            p, q = kernels.spiral_point(done + 1)
            l0 = max(abs(p), abs(q))
            if _level is not None and l0 > radius and kernels.ring_start(l0 - radius) >= _level:
                return ZERO
            return ONE

    def factors():
        i = 1
        while True:
            p, q = kernels.spiral_point(i)
            yield _coordinate_factor(inner, words, p, q)
            i += 1

    return certified_product(factors(), tail_bound, target_width, factor_cap)


def _combine_affine(parts) -> ProbabilityValue:
    """Weighted combination of probability values (weights sum to 1)."""
    if all(isinstance(v, Exact) for _, v in parts):
        total = ZERO
        for w, v in parts:
            total = total + w * v.value
        return Exact(total)
    lo = hi = ZERO
    reached = True
    for w, v in parts:
        lo = lo + w * v.lo
        hi = hi + w * v.hi
        reached = reached and v.width_reached
    return Enclosure(lo, hi, reached)


def env_prob(
    mu: Measure,
    words,
    target_width: Dyadic = None,
    factor_cap: int = DEFAULT_FACTOR_CAP,
) -> ProbabilityValue:
    """Probability that a mu-random subgroup contains every word of the
    (finite) event."""
    if target_width is None:
        target_width = DEFAULT_TARGET_WIDTH
    event = _event_words(words)
    if not event:
        return Exact(ONE)

    if isinstance(mu, CHAIN_TYPES):
        K = _event_depth(event)
        return Exact(ZERO) if K is None else Exact(_chain_cdf(mu, K))

    if isinstance(mu, Pushforward):
        g_inv = mu.g.inverse()
        moved = tuple(conjugate(g_inv, w) for w in event)
        return env_prob(mu.inner, moved, target_width, factor_cap)

    if isinstance(mu, Convex):
        parts = [
            (w, env_prob(inner, event, target_width, factor_cap))
            for w, inner in mu.parts
        ]
        return _combine_affine(parts)

    if isinstance(mu, InducedFinite):
        m = len(mu.reps)
        weight = pow2(m.bit_length() - 1)
        parts = []
        for rep in mu.reps:
            rep_inv = rep.inverse()
            moved = tuple(conjugate(rep_inv, w) for w in event)
            parts.append((weight, env_prob(mu.inner, moved, target_width, factor_cap)))
        return _combine_affine(parts)

    if isinstance(mu, IntersectPower):
        K = _event_depth(event)
        if K is None:
            return Exact(ZERO)
        cdf = _chain_cdf(mu.inner, K)
        out = ONE
        for _ in range(mu.n):
            out = out * cdf
        return Exact(out)

    if isinstance(mu, GeneratePower):
        K = _event_depth(event)
        if K is None:
            return Exact(ZERO)
        miss = ONE - _chain_cdf(mu.inner, K)
        out = ONE
        for _ in range(mu.n):
            out = out * miss
        return Exact(ONE - out)

    if isinstance(mu, CoinducedProduct):
        K = _event_depth(event)
        if K is None:
            return Exact(ZERO)
        return _coinduced_value(mu.inner, event, target_width, factor_cap)

    raise TypeError("unknown measure descriptor %r" % (mu,))


def _env_prob_upper(mu: Measure, event: tuple, probe_factors: int = 4) -> Dyadic:
    """Cheap certified upper bound on env_prob (used to refute kernel
    membership without running a full enclosure)."""
    if not event:
        return ONE
    if isinstance(mu, CHAIN_TYPES):
        K = _event_depth(event)
        return ZERO if K is None else _chain_cdf(mu, K)
    if isinstance(mu, Pushforward):
        g_inv = mu.g.inverse()
        return _env_prob_upper(
            mu.inner, tuple(conjugate(g_inv, w) for w in event), probe_factors
        )
    if isinstance(mu, Convex):
        total = ZERO
        for w, inner in mu.parts:
            total = total + w * _env_prob_upper(inner, event, probe_factors)
        return total
    if isinstance(mu, InducedFinite):
        m = len(mu.reps)
        total = ZERO
        for rep in mu.reps:
            rep_inv = rep.inverse()
            moved = tuple(conjugate(rep_inv, w) for w in event)
            total = total + _env_prob_upper(mu.inner, moved, probe_factors)
        return total * pow2(m.bit_length() - 1)
    if isinstance(mu, (IntersectPower, GeneratePower, CoinducedProduct)):
        K = _event_depth(event)
        if K is None:
            return ZERO
        if isinstance(mu, IntersectPower):
            cdf = _chain_cdf(mu.inner, K)
            out = ONE
            for _ in range(mu.n):
                out = out * cdf
            return out
        if isinstance(mu, GeneratePower):
            miss = ONE - _chain_cdf(mu.inner, K)
            out = ONE
            for _ in range(mu.n):
                out = out * miss
            return ONE - out
        prod = ONE
        for i in range(1, probe_factors + 1):
            p, q = kernels.spiral_point(i)
            prod = prod * _coordinate_factor(mu.inner, event, p, q)
            if prod < ONE:
                break
        return prod
    raise TypeError("unknown measure descriptor %r" % (mu,))


# ---------------------------------------------------------------------------
# predicates
# ---------------------------------------------------------------------------

class CertifiedBool(enum.Enum):
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown-at-width"

    def __bool__(self):
        raise TypeError("CertifiedBool is three-valued; compare explicitly")


def kernel_contains(mu: Measure, w: Word, target_width: Dyadic = None) -> CertifiedBool:
    """Whether w lies in the kernel of mu, i.e. mu(Env w) = 1."""
    if w.is_identity():
        return CertifiedBool.TRUE
    event = _event_words((w,))
    ub = _env_prob_upper(mu, event)
    if ub < ONE:
        return CertifiedBool.FALSE
    v = env_prob(mu, event, target_width)
    if isinstance(v, Exact):
        return CertifiedBool.TRUE if v.value == ONE else CertifiedBool.FALSE
    if v.hi < ONE:
        return CertifiedBool.FALSE
    if v.lo == ONE:
        return CertifiedBool.TRUE
    return CertifiedBool.UNKNOWN


def essential(mu: Measure, w: Word, target_width: Dyadic = None) -> CertifiedBool:
    """Whether w is essential for mu, i.e. mu(Env w) > 0."""
    v = env_prob(mu, (w,), target_width)
    if isinstance(v, Exact):
        return CertifiedBool.TRUE if v.value > ZERO else CertifiedBool.FALSE
    if v.lo > ZERO:
        return CertifiedBool.TRUE
    if v.hi.is_zero():
        return CertifiedBool.FALSE
    return CertifiedBool.UNKNOWN


class Region(enum.Enum):
    TRIVIAL = "trivial"
    COMMUTATOR = "commutator"
    WHOLE = "whole"


def supported_in(mu: Measure, region: Region) -> bool:
    """Symbolic containment: every constituent subgroup of mu lies in the
    region (all three regions are normal, so conjugation is absorbed).

    Judged from the constituents, so degenerate intersections can be
    under-approximated: a co-induced point mass at level two or higher
    concentrates on the trivial subgroup, yet its constituents do not lie
    in it and the answer stays False.  Sound in the True direction on the
    whole grammar."""
    if region is Region.WHOLE:
        return True
    if isinstance(mu, DiracTrivial):
        return True
    if isinstance(mu, (GeomGamma, ParamFamily, DiracGamma)):
        return region is Region.COMMUTATOR
    if isinstance(mu, Pushforward):
        return supported_in(mu.inner, region)
    if isinstance(mu, Convex):
        return all(supported_in(inner, region) for _, inner in mu.parts)
    if isinstance(mu, (InducedFinite, CoinducedProduct, IntersectPower, GeneratePower)):
        return supported_in(mu.inner, region)
    raise TypeError("unknown measure descriptor %r" % (mu,))


def check_combination_identities(mu1: Measure, mu2: Measure, words, n: int = 3) -> dict:
    """Predicate-level kernel/essential identities for the half-half convex
    combination, plus kernel stability under intersection powers of mu1."""
    half = Dyadic(1, 1)
    conv = Convex(((half, mu1), (half, mu2)))
    ipow = IntersectPower(n, mu1) if isinstance(mu1, CHAIN_TYPES) else None
    entries = []
    all_pass = True
    for w in words:
        k1 = kernel_contains(mu1, w)
        k2 = kernel_contains(mu2, w)
        kc = kernel_contains(conv, w)
        e1 = essential(mu1, w)
        e2 = essential(mu2, w)
        ec = essential(conv, w)
        ok_kernel = (kc is CertifiedBool.TRUE) == (
            k1 is CertifiedBool.TRUE and k2 is CertifiedBool.TRUE
        )
        ok_essential = (ec is CertifiedBool.TRUE) == (
            e1 is CertifiedBool.TRUE or e2 is CertifiedBool.TRUE
        )
        ok_power = True
        if ipow is not None:
            kp = kernel_contains(ipow, w)
            ok_power = (kp is CertifiedBool.TRUE) == (k1 is CertifiedBool.TRUE)
        ok = ok_kernel and ok_essential and ok_power
        all_pass = all_pass and ok
        entries.append(
            {
                "word": str(w),
                "kernel_identity": ok_kernel,
                "essential_identity": ok_essential,
                "intersect_power_identity": ok_power,
                "pass": ok,
            }
        )
    return {"n_words": len(entries), "pass": all_pass, "checks": entries}


def mixing_defect(w1: Word, w2: Word, shift: Word, target_width: Dyadic = None) -> Enclosure:
    """Independence defect of the two envelope events under shifting:
    |P(both) - P(first) P(second)| for the co-induced measure, with the
    second event conjugated by the shift."""
    for w in (w1, w2):
        if w.abelianization() != (0, 0):
            raise ValueError("mixing defect requires commutator-subgroup words")
    if target_width is None:
        target_width = DEFAULT_TARGET_WIDTH
    if w1.is_identity() or w2.is_identity():
        return Enclosure(ZERO, ZERO, True)
    moved = conjugate(shift, w2)
    part_width = Dyadic(target_width.num, target_width.exp + 2)
    joint = env_prob(MU_G, (w1, moved), part_width)
    first = env_prob(MU_G, (w1,), part_width)
    second = env_prob(MU_G, (moved,), part_width)
    reached = joint.width_reached and first.width_reached and second.width_reached
    defect = (joint.interval() - first.interval() * second.interval()).abs()
    hi = defect.hi if defect.hi < ONE else ONE
    return Enclosure(defect.lo, hi, reached)


# ---------------------------------------------------------------------------
# descriptor serialization
# ---------------------------------------------------------------------------

def descriptor_to_json(mu: Measure) -> dict:
    if isinstance(mu, GeomGamma):
        return {"type": "geom_gamma"}
    if isinstance(mu, ParamFamily):
        return {"type": "param_family", "a": str(mu.a)}
    if isinstance(mu, DiracTrivial):
        return {"type": "dirac_trivial"}
    if isinstance(mu, DiracGamma):
        return {"type": "dirac_gamma", "k": mu.k}
    if isinstance(mu, Pushforward):
        return {"type": "pushforward", "g": str(mu.g), "inner": descriptor_to_json(mu.inner)}
    if isinstance(mu, Convex):
        return {
            "type": "convex",
            "parts": [
                {"weight": str(w), "inner": descriptor_to_json(inner)}
                for w, inner in mu.parts
            ],
        }
    if isinstance(mu, InducedFinite):
        return {
            "type": "induced_finite",
            "reps": [str(r) for r in mu.reps],
            "inner": descriptor_to_json(mu.inner),
        }
    if isinstance(mu, CoinducedProduct):
        return {"type": "coinduced_product", "inner": descriptor_to_json(mu.inner)}
    if isinstance(mu, IntersectPower):
        return {"type": "intersect_power", "n": mu.n, "inner": descriptor_to_json(mu.inner)}
    if isinstance(mu, GeneratePower):
        return {"type": "generate_power", "n": mu.n, "inner": descriptor_to_json(mu.inner)}
    raise TypeError("unknown measure descriptor %r" % (mu,))


def descriptor_from_json(data: dict) -> Measure:
    kind = data.get("type")
    if kind == "geom_gamma":
        return GeomGamma()
    if kind == "param_family":
        return ParamFamily(Dyadic.parse(data["a"]))
    if kind == "dirac_trivial":
        return DiracTrivial()
    if kind == "dirac_gamma":
        return DiracGamma(int(data["k"]))
    if kind == "pushforward":
        return Pushforward(Word.parse(data["g"]), descriptor_from_json(data["inner"]))
    if kind == "convex":
        return Convex(
            tuple(
                (Dyadic.parse(p["weight"]), descriptor_from_json(p["inner"]))
                for p in data["parts"]
            )
        )
    if kind == "induced_finite":
        return InducedFinite(
            tuple(Word.parse(r) for r in data["reps"]),
            descriptor_from_json(data["inner"]),
        )
    if kind == "coinduced_product":
        return CoinducedProduct(descriptor_from_json(data["inner"]))
    if kind == "intersect_power":
        return IntersectPower(int(data["n"]), descriptor_from_json(data["inner"]))
    if kind == "generate_power":
        return GeneratePower(int(data["n"]), descriptor_from_json(data["inner"]))
    raise ValueError("unknown measure type %r" % (kind,))


_MEASURE_ALIASES = {
    "mu_F": lambda: MU_F,
    "mu_HF": lambda: MU_HF,
    "mu_G": lambda: MU_G,
}


def parse_measure(text: str) -> Measure:
    """Aliases mu_F / mu_HF / mu_G, mu_aG:<a> for the family, or a JSON
    descriptor (inline or @file)."""
    import json

    text = text.strip()
    if text in _MEASURE_ALIASES:
        return _MEASURE_ALIASES[text]()
    if text.startswith("mu_aG:"):
        return family_measure(Dyadic.parse(text.split(":", 1)[1]))
    if text.startswith("mu_aF:"):
        return ParamFamily(Dyadic.parse(text.split(":", 1)[1]))
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return descriptor_from_json(json.load(fh))
    return descriptor_from_json(json.loads(text))
