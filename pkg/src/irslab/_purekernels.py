"""Pure-Python kernel routines.

This module is the reference implementation of the hot inner loops; the
compiled extension ``irslab._kernels`` mirrors it function for function
and must produce bit-identical results.  Everything here works on plain
tuples of small ints so that both backends share one calling convention:

  letters    a = 1, a^-1 = -1, b = 2, b^-1 = -2
  word       tuple of letters, always freely reduced
  syllables  tuple of (index, exponent) pairs over the conjugate basis
             y_i = t_i [a,b] t_i^-1, normalized (adjacent indices differ,
             exponents nonzero)

Depth values returned by the syllable routines are positive ints; the
empty word (depth unbounded) is the caller's case to handle.
"""

from math import isqrt

BACKEND_NAME = "pure"

_COMM = (1, 2, -1, -2)  # [a,b] = a b a^-1 b^-1
_COMM_INV = (2, 1, -2, -1)

MASK64 = (1 << 64) - 1


# ---------------------------------------------------------------------------
# free words
# ---------------------------------------------------------------------------

def free_reduce(letters):
    """Freely reduce a letter sequence; returns a reduced tuple."""
    out = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def mul_words(u, v):
    """Product of two reduced words, reduced."""
    lu, lv = len(u), len(v)
    k = 0
    m = lu if lu < lv else lv
    while k < m and u[lu - 1 - k] == -v[k]:
        k += 1
    return u[:lu - k] + v[k:]


def inv_word(u):
    return tuple(-x for x in reversed(u))


def conj_word(g, w):
    """g w g^-1, reduced."""
    return mul_words(mul_words(g, w), inv_word(g))


def abelianize(w):
    """(exponent sum of a, exponent sum of b)."""
    p = q = 0
    for x in w:
        if x == 1:
            p += 1
        elif x == -1:
            p -= 1
        elif x == 2:
            q += 1
        else:
            q -= 1
    return p, q


def power_word(pos, neg, n):
    """n-th power of the reduced word with given positive/negative forms."""
    if n >= 0:
        return pos * n
    return neg * (-n)


def transversal_letters(p, q):
    """Letters of a^p b^q."""
    wp = (1,) * p if p >= 0 else (-1,) * (-p)
    wq = (2,) * q if q >= 0 else (-2,) * (-q)
    return wp + wq


# ---------------------------------------------------------------------------
# spiral enumeration of Z^2
# ---------------------------------------------------------------------------

def ring_of(p, q):
    return max(abs(p), abs(q))


def ring_start(l):
    """First spiral index on ring l: (2l-1)^2 + 1 for l >= 1, and 1 for l = 0."""
    if l <= 0:
        return 1
    return (2 * l - 1) * (2 * l - 1) + 1


def spiral_index(p, q):
    """Spiral enumeration index of (p, q); (0,0) -> 1."""
    l = max(abs(p), abs(q))
    if l == 0:
        return 1
    base = (2 * l - 1) * (2 * l - 1) + 1
    if p == l and q >= 0:
        off = q
    elif q == l:
        off = (l + 1) + (l - 1 - p)
    elif p == -l:
        off = (3 * l + 1) + (l - 1 - q)
    elif q == -l:
        off = (5 * l + 1) + (p + l - 1)
    else:
        off = (7 * l + 1) + (q + l - 1)
    return base + off


def spiral_point(i):
    """Inverse of spiral_index; i >= 1."""
    if i < 1:
        raise ValueError("spiral index must be >= 1, got %r" % (i,))
    if i == 1:
        return (0, 0)
    l = (isqrt(i - 1) + 1) // 2
    off = i - ((2 * l - 1) * (2 * l - 1) + 1)
    if off <= l:
        return (l, off)
    if off <= 3 * l:
        return (l - 1 - (off - (l + 1)), l)
    if off <= 5 * l:
        return (-l, l - 1 - (off - (3 * l + 1)))
    if off <= 7 * l:
        return (-l + 1 + (off - (5 * l + 1)), -l)
    return (l, -l + 1 + (off - (7 * l + 1)))


# ---------------------------------------------------------------------------
# rewriting into the conjugate basis and depth
# ---------------------------------------------------------------------------

def _push_syllable(stack, idx, exp):
    if stack and stack[-1][0] == idx:
        stack[-1][1] += exp
        if stack[-1][1] == 0:
            stack.pop()
    else:
        stack.append([idx, exp])


def rewrite_syllables(w):
    """Rewrite a reduced word in the commutator subgroup as syllables.

    Scans the word tracking the coset (p, q) of the abelianization.  Each
    a-step through a coset with q != 0 contributes one Schreier generator,
    which telescopes into the conjugate basis:

      q >= 1:  z(p,q)  = x(p,q-1)^-1 ... x(p,0)^-1
      q <= -1: z(p,q)  = x(p,q) x(p,q+1) ... x(p,-1)

    with x(p,j) the basis element at spiral index of (p, j).  Raises
    ValueError when the word is not in the commutator subgroup.
    """
    stack = []
    p = q = 0
    for x in w:
        if x == 1 or x == -1:
            pz = p if x == 1 else p - 1
            if q >= 1:
                if x == 1:
                    for j in range(q - 1, -1, -1):
                        _push_syllable(stack, spiral_index(pz, j), -1)
                else:
                    for j in range(q):
                        _push_syllable(stack, spiral_index(pz, j), 1)
            elif q <= -1:
                if x == 1:
                    for j in range(q, 0):
                        _push_syllable(stack, spiral_index(pz, j), 1)
                else:
                    for j in range(-1, q - 1, -1):
                        _push_syllable(stack, spiral_index(pz, j), -1)
            p += 1 if x == 1 else -1
        elif x == 2:
            q += 1
        else:
            q -= 1
    if p != 0 or q != 0:
        raise ValueError(
            "word has abelianization (%d, %d); not in the commutator subgroup"
            % (p, q)
        )
    return tuple((i, e) for i, e in stack)


def normalize_syllables(sylls):
    """Merge adjacent equal-index syllables and drop zero exponents."""
    stack = []
    for i, e in sylls:
        if e:
            _push_syllable(stack, i, e)
    return tuple((i, e) for i, e in stack)


def phi_syllables(sylls, k):
    """Kill syllables with index >= k, then renormalize."""
    stack = []
    for i, e in sylls:
        if i < k:
            _push_syllable(stack, i, e)
    return tuple((i, e) for i, e in stack)


def depth_syllables(sylls):
    """Depth of a nonempty normalized syllable word.

    The set of k with the index-below-k restriction cancelling is downward
    closed, so the depth is the first present index whose restriction does
    not cancel.
    """
    idxs = sorted({i for i, _ in sylls})
    for t in idxs:
        stack = []
        for i, e in sylls:
            if i <= t:
                _push_syllable(stack, i, e)
        if stack:
            return t
    raise AssertionError("normalized nonempty syllable word cancelled")


def expand_syllables(sylls):
    """Expand syllables back to a reduced word over a, b."""
    letters = []
    for i, e in sylls:
        p, q = spiral_point(i)
        t = transversal_letters(p, q)
        letters.extend(t)
        letters.extend(power_word(_COMM, _COMM_INV, e))
        letters.extend(inv_word(t))
    return free_reduce(letters)


def shifted_depth(w, p, q):
    """Depth of t^-1 w t for t = a^p b^q.

    Returns 0 when the conjugate is the identity and -1 when w is not in
    the commutator subgroup.
    """
    t = transversal_letters(p, q)
    c = mul_words(mul_words(inv_word(t), w), t)
    if not c:
        return 0
    a0, a1 = abelianize(c)
    if a0 or a1:
        return -1
    return depth_syllables(rewrite_syllables(c))


# ---------------------------------------------------------------------------
# counter-based pseudorandomness
# ---------------------------------------------------------------------------

def _mix64(z):
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def prf_block(seed, index, block):
    """64-bit keyed PRF block for coordinate `index`, block counter `block`."""
    z = _mix64((seed & MASK64) ^ 0xA0761D6478BD642F)
    z = _mix64(z ^ (index & MASK64))
    z = _mix64(z ^ (block & MASK64))
    return z


def geometric_coordinate(seed, index):
    """Geometric draw with P(k = j) = 2^-j from the keyed bit stream.

    k is one plus the number of zero bits before the first one bit,
    reading blocks least-significant-bit first.
    """
    k = 1
    block = 0
    while True:
        x = prf_block(seed, index, block)
        if x:
            return k + ((x & -x).bit_length() - 1)
        k += 64
        block += 1


def member_scan(seed, depths):
    """Membership scan against a precomputed depth profile.

    depths[j] is the conjugate depth at spiral coordinate j+1; entry 0
    encodes unbounded depth (never violated).  Returns False at the first
    coordinate whose geometric draw exceeds its depth.
    """
    index = 1
    for d in depths:
        if d:
            k = geometric_coordinate(seed, index)
            if k > d:
                return False
        index += 1
    return True
