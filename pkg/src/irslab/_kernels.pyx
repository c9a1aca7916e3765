# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel routines; bit-identical twin of irslab._purekernels.

Inputs and outputs are plain tuples of small ints, as in the pure
backend; coordinates beyond the int64-safe range delegate to the pure
implementation.
"""

from cpython.mem cimport PyMem_Malloc, PyMem_Free
from libc.math cimport sqrt
from libc.stdlib cimport qsort

from irslab import _purekernels as _pure

BACKEND_NAME = "compiled"

MASK64 = (1 << 64) - 1

# rings beyond this delegate to arbitrary-precision code
DEF RING_LIMIT = 1048576  # 1 << 20

_COMM = (1, 2, -1, -2)
_COMM_INV = (2, 1, -2, -1)


# ---------------------------------------------------------------------------
# small helpers
# ---------------------------------------------------------------------------

cdef long* _letters_to_buf(tuple letters, Py_ssize_t* n_out) except NULL:
    cdef Py_ssize_t n = len(letters)
    cdef long* buf = <long*> PyMem_Malloc((n if n else 1) * sizeof(long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t k
    for k in range(n):
        buf[k] = letters[k]
    n_out[0] = n
    return buf


cdef tuple _buf_to_tuple(long* buf, Py_ssize_t n):
    cdef Py_ssize_t k
    return tuple([buf[k] for k in range(n)])


cdef Py_ssize_t _reduce_buf(long* src, Py_ssize_t n, long* dst):
    """Free reduction of src into dst (dst may alias nothing); returns length."""
    cdef Py_ssize_t top = 0
    cdef Py_ssize_t k
    cdef long x
    for k in range(n):
        x = src[k]
        if top > 0 and dst[top - 1] == -x:
            top -= 1
        else:
            dst[top] = x
            top += 1
    return top


# ---------------------------------------------------------------------------
# free words
# ---------------------------------------------------------------------------

def free_reduce(letters):
    cdef tuple t = tuple(letters)
    cdef Py_ssize_t n = 0
    cdef long* src = _letters_to_buf(t, &n)
    cdef long* dst = <long*> PyMem_Malloc((n if n else 1) * sizeof(long))
    if dst == NULL:
        PyMem_Free(src)
        raise MemoryError()
    cdef Py_ssize_t m = _reduce_buf(src, n, dst)
    out = _buf_to_tuple(dst, m)
    PyMem_Free(src)
    PyMem_Free(dst)
    return out


def mul_words(tuple u, tuple v):
    cdef Py_ssize_t lu = len(u), lv = len(v)
    cdef Py_ssize_t k = 0
    cdef Py_ssize_t m = lu if lu < lv else lv
    while k < m and <long> u[lu - 1 - k] == -(<long> v[k]):
        k += 1
    return u[:lu - k] + v[k:]


def inv_word(tuple u):
    cdef Py_ssize_t n = len(u)
    cdef Py_ssize_t k
    return tuple([-(<long> u[n - 1 - k]) for k in range(n)])


def conj_word(tuple g, tuple w):
    return mul_words(mul_words(g, w), inv_word(g))


def abelianize(letters):
    cdef tuple t = tuple(letters)
    cdef long p = 0, q = 0
    cdef Py_ssize_t k
    cdef long x
    for k in range(len(t)):
        x = t[k]
        if x == 1:
            p += 1
        elif x == -1:
            p -= 1
        elif x == 2:
            q += 1
        else:
            q -= 1
    return (p, q)


def power_word(tuple pos, tuple neg, n):
    if n >= 0:
        return pos * n
    return neg * (-n)


def transversal_letters(p, q):
    wp = (1,) * p if p >= 0 else (-1,) * (-p)
    wq = (2,) * q if q >= 0 else (-2,) * (-q)
    return wp + wq


# ---------------------------------------------------------------------------
# spiral enumeration
# ---------------------------------------------------------------------------

cdef long long _c_spiral_index(long long p, long long q):
    cdef long long l = p if p >= 0 else -p
    cdef long long aq = q if q >= 0 else -q
    if aq > l:
        l = aq
    if l == 0:
        return 1
    cdef long long base = (2 * l - 1) * (2 * l - 1) + 1
    cdef long long off
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


cdef unsigned long long _c_isqrt(unsigned long long x):
    cdef unsigned long long r = <unsigned long long> sqrt(<double> x)
    while r > 0 and r * r > x:
        r -= 1
    while (r + 1) * (r + 1) <= x:
        r += 1
    return r


def ring_of(p, q):
    return max(abs(p), abs(q))


def ring_start(l):
    if l <= 0:
        return 1
    return (2 * l - 1) * (2 * l - 1) + 1


def spiral_index(p, q):
    if p > RING_LIMIT or p < -RING_LIMIT or q > RING_LIMIT or q < -RING_LIMIT:
        return _pure.spiral_index(p, q)
    return _c_spiral_index(p, q)


def spiral_point(i):
    if i < 1:
        raise ValueError("spiral index must be >= 1, got %r" % (i,))
    if i > (2 * RING_LIMIT + 1) ** 2:
        return _pure.spiral_point(i)
    cdef long long ii = i
    if ii == 1:
        return (0, 0)
    cdef long long l = (<long long> _c_isqrt(ii - 1) + 1) // 2
    cdef long long off = ii - ((2 * l - 1) * (2 * l - 1) + 1)
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
# rewriting and depth
# ---------------------------------------------------------------------------

cdef struct SyllStack:
    long long* idx
    long long* exp
    Py_ssize_t top


cdef inline void _push(SyllStack* s, long long idx, long long e) noexcept:
    if s.top > 0 and s.idx[s.top - 1] == idx:
        s.exp[s.top - 1] += e
        if s.exp[s.top - 1] == 0:
            s.top -= 1
    else:
        s.idx[s.top] = idx
        s.exp[s.top] = e
        s.top += 1


cdef int _rewrite_core(long* w, Py_ssize_t n, SyllStack* s, long long* p_out, long long* q_out) except -1:
    """Emit the telescoped Schreier generators of w into the stack.
    Returns 0; final coset is written to (p_out, q_out)."""
    cdef long long p = 0, q = 0, pz, j
    cdef Py_ssize_t k
    cdef long x
    for k in range(n):
        x = w[k]
        if x == 1 or x == -1:
            pz = p if x == 1 else p - 1
            if q >= 1:
                if x == 1:
                    j = q - 1
                    while j >= 0:
                        _push(s, _c_spiral_index(pz, j), -1)
                        j -= 1
                else:
                    j = 0
                    while j < q:
                        _push(s, _c_spiral_index(pz, j), 1)
                        j += 1
            elif q <= -1:
                if x == 1:
                    j = q
                    while j < 0:
                        _push(s, _c_spiral_index(pz, j), 1)
                        j += 1
                else:
                    j = -1
                    while j >= q:
                        _push(s, _c_spiral_index(pz, j), -1)
                        j -= 1
            p += 1 if x == 1 else -1
        elif x == 2:
            q += 1
        else:
            q -= 1
    p_out[0] = p
    q_out[0] = q
    return 0


cdef Py_ssize_t _emission_bound(long* w, Py_ssize_t n) noexcept:
    cdef long long q = 0
    cdef Py_ssize_t cap = 1
    cdef Py_ssize_t k
    cdef long x
    for k in range(n):
        x = w[k]
        if x == 2:
            q += 1
        elif x == -2:
            q -= 1
        else:
            cap += q if q >= 0 else -q
    return cap


cdef int _ring_overflow(long* w, Py_ssize_t n) noexcept:
    cdef long long p = 0, q = 0
    cdef Py_ssize_t k
    cdef long x
    for k in range(n):
        x = w[k]
        if x == 1:
            p += 1
        elif x == -1:
            p -= 1
        elif x == 2:
            q += 1
        else:
            q -= 1
        if p > RING_LIMIT or p < -RING_LIMIT or q > RING_LIMIT or q < -RING_LIMIT:
            return 1
    return 0


def rewrite_syllables(letters):
    cdef tuple t = tuple(letters)
    cdef Py_ssize_t n = 0
    cdef long* w = _letters_to_buf(t, &n)
    if _ring_overflow(w, n):
        PyMem_Free(w)
        return _pure.rewrite_syllables(t)
    cdef Py_ssize_t cap = _emission_bound(w, n)
    cdef SyllStack s
    s.idx = <long long*> PyMem_Malloc(cap * sizeof(long long))
    s.exp = <long long*> PyMem_Malloc(cap * sizeof(long long))
    s.top = 0
    if s.idx == NULL or s.exp == NULL:
        PyMem_Free(w)
        if s.idx != NULL:
            PyMem_Free(s.idx)
        if s.exp != NULL:
            PyMem_Free(s.exp)
        raise MemoryError()
    cdef long long p = 0, q = 0
    try:
        _rewrite_core(w, n, &s, &p, &q)
        if p != 0 or q != 0:
            raise ValueError(
                "word has abelianization (%d, %d); not in the commutator subgroup"
                % (p, q)
            )
        return tuple([(s.idx[k], s.exp[k]) for k in range(s.top)])
    finally:
        PyMem_Free(w)
        PyMem_Free(s.idx)
        PyMem_Free(s.exp)


def normalize_syllables(sylls):
    cdef tuple t = tuple(sylls)
    cdef Py_ssize_t n = len(t)
    cdef SyllStack s
    s.idx = <long long*> PyMem_Malloc((n if n else 1) * sizeof(long long))
    s.exp = <long long*> PyMem_Malloc((n if n else 1) * sizeof(long long))
    s.top = 0
    if s.idx == NULL or s.exp == NULL:
        if s.idx != NULL:
            PyMem_Free(s.idx)
        if s.exp != NULL:
            PyMem_Free(s.exp)
        raise MemoryError()
    cdef Py_ssize_t k
    cdef long long i, e
    try:
        for k in range(n):
            i = t[k][0]
            e = t[k][1]
            if e != 0:
                _push(&s, i, e)
        return tuple([(s.idx[k], s.exp[k]) for k in range(s.top)])
    finally:
        PyMem_Free(s.idx)
        PyMem_Free(s.exp)


def phi_syllables(sylls, k_level):
    cdef tuple t = tuple(sylls)
    cdef long long level = k_level
    cdef Py_ssize_t n = len(t)
    cdef SyllStack s
    s.idx = <long long*> PyMem_Malloc((n if n else 1) * sizeof(long long))
    s.exp = <long long*> PyMem_Malloc((n if n else 1) * sizeof(long long))
    s.top = 0
    if s.idx == NULL or s.exp == NULL:
        if s.idx != NULL:
            PyMem_Free(s.idx)
        if s.exp != NULL:
            PyMem_Free(s.exp)
        raise MemoryError()
    cdef Py_ssize_t k
    cdef long long i, e
    try:
        for k in range(n):
            i = t[k][0]
            e = t[k][1]
            if i < level:
                _push(&s, i, e)
        return tuple([(s.idx[k], s.exp[k]) for k in range(s.top)])
    finally:
        PyMem_Free(s.idx)
        PyMem_Free(s.exp)


cdef int _cmp_ll(const void* a, const void* b) noexcept nogil:
    cdef long long x = (<const long long*> a)[0]
    cdef long long y = (<const long long*> b)[0]
    if x < y:
        return -1
    if x > y:
        return 1
    return 0


cdef long long _depth_core(long long* idx, long long* exp, Py_ssize_t n) except? -2:
    """Depth of a nonempty normalized syllable array."""
    cdef long long* distinct = <long long*> PyMem_Malloc(n * sizeof(long long))
    cdef long long* st_idx = <long long*> PyMem_Malloc(n * sizeof(long long))
    cdef long long* st_exp = <long long*> PyMem_Malloc(n * sizeof(long long))
    if distinct == NULL or st_idx == NULL or st_exp == NULL:
        if distinct != NULL:
            PyMem_Free(distinct)
        if st_idx != NULL:
            PyMem_Free(st_idx)
        if st_exp != NULL:
            PyMem_Free(st_exp)
        raise MemoryError()
    cdef Py_ssize_t k, m = 0, top
    cdef long long t
    cdef Py_ssize_t d
    try:
        for k in range(n):
            distinct[k] = idx[k]
        qsort(distinct, n, sizeof(long long), _cmp_ll)
        for k in range(n):
            if m == 0 or distinct[k] != distinct[m - 1]:
                distinct[m] = distinct[k]
                m += 1
        for d in range(m):
            t = distinct[d]
            top = 0
            for k in range(n):
                if idx[k] <= t:
                    if top > 0 and st_idx[top - 1] == idx[k]:
                        st_exp[top - 1] += exp[k]
                        if st_exp[top - 1] == 0:
                            top -= 1
                    else:
                        st_idx[top] = idx[k]
                        st_exp[top] = exp[k]
                        top += 1
            if top > 0:
                return t
        raise AssertionError("normalized nonempty syllable word cancelled")
    finally:
        PyMem_Free(distinct)
        PyMem_Free(st_idx)
        PyMem_Free(st_exp)


def depth_syllables(sylls):
    cdef tuple t = tuple(sylls)
    cdef Py_ssize_t n = len(t)
    if n == 0:
        raise AssertionError("normalized nonempty syllable word cancelled")
    cdef long long* idx = <long long*> PyMem_Malloc(n * sizeof(long long))
    cdef long long* exp = <long long*> PyMem_Malloc(n * sizeof(long long))
    if idx == NULL or exp == NULL:
        if idx != NULL:
            PyMem_Free(idx)
        if exp != NULL:
            PyMem_Free(exp)
        raise MemoryError()
    cdef Py_ssize_t k
    try:
        for k in range(n):
            idx[k] = t[k][0]
            exp[k] = t[k][1]
        return _depth_core(idx, exp, n)
    finally:
        PyMem_Free(idx)
        PyMem_Free(exp)


def expand_syllables(sylls):
    cdef tuple t = tuple(sylls)
    letters = []
    cdef Py_ssize_t k
    for k in range(len(t)):
        i = t[k][0]
        e = t[k][1]
        p, q = spiral_point(i)
        tv = transversal_letters(p, q)
        letters.extend(tv)
        letters.extend(power_word(_COMM, _COMM_INV, e))
        letters.extend(inv_word(tv))
    return free_reduce(tuple(letters))


def shifted_depth(letters, p, q):
    """Depth of t^-1 w t for t = a^p b^q; 0 for the identity conjugate,
    -1 outside the commutator subgroup."""
    cdef tuple w = tuple(letters)
    if p > RING_LIMIT or p < -RING_LIMIT or q > RING_LIMIT or q < -RING_LIMIT:
        return _pure.shifted_depth(w, p, q)
    t = transversal_letters(p, q)
    cdef tuple c = mul_words(mul_words(inv_word(t), w), t)
    cdef Py_ssize_t n = 0
    if len(c) == 0:
        return 0
    cdef long* buf = _letters_to_buf(c, &n)
    if _ring_overflow(buf, n):
        PyMem_Free(buf)
        return _pure.shifted_depth(w, p, q)
    cdef long long a0 = 0, a1 = 0
    cdef Py_ssize_t k
    cdef long x
    for k in range(n):
        x = buf[k]
        if x == 1:
            a0 += 1
        elif x == -1:
            a0 -= 1
        elif x == 2:
            a1 += 1
        else:
            a1 -= 1
    if a0 != 0 or a1 != 0:
        PyMem_Free(buf)
        return -1
    cdef Py_ssize_t cap = _emission_bound(buf, n)
    cdef SyllStack s
    s.idx = <long long*> PyMem_Malloc(cap * sizeof(long long))
    s.exp = <long long*> PyMem_Malloc(cap * sizeof(long long))
    s.top = 0
    if s.idx == NULL or s.exp == NULL:
        PyMem_Free(buf)
        if s.idx != NULL:
            PyMem_Free(s.idx)
        if s.exp != NULL:
            PyMem_Free(s.exp)
        raise MemoryError()
    cdef long long cp = 0, cq = 0
    try:
        _rewrite_core(buf, n, &s, &cp, &cq)
        if s.top == 0:
            return 0
        return _depth_core(s.idx, s.exp, s.top)
    finally:
        PyMem_Free(buf)
        PyMem_Free(s.idx)
        PyMem_Free(s.exp)


# ---------------------------------------------------------------------------
# counter-based pseudorandomness
# ---------------------------------------------------------------------------

cdef inline unsigned long long _c_mix64(unsigned long long z) noexcept nogil:
    z = z + <unsigned long long> 0x9E3779B97F4A7C15ULL
    z = (z ^ (z >> 30)) * <unsigned long long> 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * <unsigned long long> 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline unsigned long long _c_prf(unsigned long long seed, unsigned long long index,
                                      unsigned long long block) noexcept nogil:
    cdef unsigned long long z = _c_mix64(seed ^ <unsigned long long> 0xA0761D6478BD642FULL)
    z = _c_mix64(z ^ index)
    z = _c_mix64(z ^ block)
    return z


def prf_block(seed, index, block):
    return _c_prf(
        <unsigned long long> (seed & MASK64),
        <unsigned long long> (index & MASK64),
        <unsigned long long> (block & MASK64),
    )


cdef long long _c_geometric(unsigned long long seed, unsigned long long index) noexcept nogil:
    cdef long long k = 1
    cdef unsigned long long block = 0
    cdef unsigned long long x
    while True:
        x = _c_prf(seed, index, block)
        if x != 0:
            while (x & 1) == 0:
                x >>= 1
                k += 1
            return k
        k += 64
        block += 1


def geometric_coordinate(seed, index):
    return _c_geometric(
        <unsigned long long> (seed & MASK64),
        <unsigned long long> (index & MASK64),
    )


def member_scan(seed, depths):
    cdef tuple t = tuple(depths)
    cdef Py_ssize_t n = len(t)
    cdef unsigned long long s = <unsigned long long> (seed & MASK64)
    cdef Py_ssize_t k
    cdef long long d
    for k in range(n):
        d = t[k]
        if d != 0 and _c_geometric(s, <unsigned long long> (k + 1)) > d:
            return False
    return True
