# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled secp256k1 kernels; same interface as ``_pure``."""

from libc.stdlib cimport malloc, free
from libc.stdint cimport uint64_t, int64_t

cdef extern from "secp256k1_kern.h":
    ctypedef struct fe:
        uint64_t v[4]
    ctypedef struct gej:
        fe x
        fe y
        fe z
        int inf
    ctypedef struct ge:
        fe x
        fe y
        int inf
    ctypedef struct sc:
        uint64_t v[4]

    void fe_from_be(fe *r, const unsigned char *b)
    void fe_to_be(unsigned char *b, const fe *a)
    void gej_set_ge(gej *r, const ge *a)
    void gej_add_ge(gej *r, const gej *a, const ge *b)
    void ge_set_gej(ge *r, const gej *a)
    void g_table_init(const ge *g)
    void c_mul_base "mul_base"(gej *r, const sc *k)
    void mul_var(gej *r, const ge *p, const sc *k)
    int c_multiexp "multiexp"(gej *r, const ge *pts, const sc *ks, size_t n) nogil
    int64_t c_linear_dlog "linear_dlog"(const ge *base, const ge *target, uint64_t bound) nogil
    int64_t c_bsgs "bsgs"(const ge *base, const ge *target, uint64_t bound, uint64_t m) nogil

import math

FIELD = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F
ORDER = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
GX = 0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798
GY = 0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8

NAME = "compiled"

cdef object _G = (GX, GY)


cdef inline void _load_ge(ge *r, object pt):
    cdef bytes bx, by
    if pt is None:
        r.inf = 1
        return
    bx = (<object>pt[0]).to_bytes(32, "big")
    by = (<object>pt[1]).to_bytes(32, "big")
    fe_from_be(&r.x, <const unsigned char *>bx)
    fe_from_be(&r.y, <const unsigned char *>by)
    r.inf = 0


cdef inline void _load_sc(sc *r, object k):
    cdef bytes b = (k % ORDER).to_bytes(32, "big")
    fe_from_be(<fe *>r, <const unsigned char *>b)


cdef inline object _dump_ge(const ge *p):
    cdef unsigned char buf[32]
    if p.inf:
        return None
    fe_to_be(buf, &p.x)
    x = int.from_bytes(buf[:32], "big")
    fe_to_be(buf, &p.y)
    y = int.from_bytes(buf[:32], "big")
    return (x, y)


cdef inline object _dump_gej(const gej *p):
    cdef ge a
    ge_set_gej(&a, p)
    return _dump_ge(&a)


cdef ge _g
_load_ge(&_g, _G)
g_table_init(&_g)


def is_on_curve(x, y):
    return (y * y - x * x * x - 7) % FIELD == 0


def neg(a):
    if a is None:
        return None
    return (a[0], (-a[1]) % FIELD)


def add(a, b):
    cdef ge pa, pb
    cdef gej r
    if a is None:
        return b
    if b is None:
        return a
    _load_ge(&pa, a)
    _load_ge(&pb, b)
    gej_set_ge(&r, &pa)
    gej_add_ge(&r, &r, &pb)
    return _dump_gej(&r)


def mul_base(k):
    cdef sc s
    cdef gej r
    _load_sc(&s, k)
    c_mul_base(&r, &s)
    return _dump_gej(&r)


def mul(a, k):
    cdef ge p
    cdef sc s
    cdef gej r
    if a is None:
        return None
    _load_sc(&s, k)
    if a == _G:
        c_mul_base(&r, &s)
    else:
        _load_ge(&p, a)
        mul_var(&r, &p, &s)
    return _dump_gej(&r)


def batch_mul(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("length mismatch")
    return [mul(p, k) for p, k in zip(points, scalars)]


def multiexp(points, scalars):
    cdef size_t n = len(points)
    cdef size_t i
    cdef ge *pts
    cdef sc *ks
    cdef gej r
    cdef int rc
    if len(scalars) != n:
        raise ValueError("length mismatch")
    if n == 0:
        return None
    pts = <ge *>malloc(sizeof(ge) * n)
    ks = <sc *>malloc(sizeof(sc) * n)
    if pts == NULL or ks == NULL:
        free(pts)
        free(ks)
        raise MemoryError()
    try:
        for i in range(n):
            _load_ge(&pts[i], points[i])
            _load_sc(&ks[i], scalars[i])
        with nogil:
            rc = c_multiexp(&r, pts, ks, n)
        if rc != 0:
            raise MemoryError()
        return _dump_gej(&r)
    finally:
        free(pts)
        free(ks)


def linear_dlog(base, target, bound):
    cdef ge b, t
    cdef uint64_t B = bound
    cdef int64_t v
    _load_ge(&b, base)
    _load_ge(&t, target)
    with nogil:
        v = c_linear_dlog(&b, &t, B)
    return v


def bsgs(base, target, bound):
    cdef ge b, t
    cdef uint64_t B = bound
    cdef uint64_t m
    cdef int64_t v
    if bound >= 2 ** 62:
        raise OverflowError("bound too large for the compiled kernel")
    r = math.isqrt(bound + 1)
    m = r if r * r == bound + 1 else r + 1
    _load_ge(&b, base)
    _load_ge(&t, target)
    with nogil:
        v = c_bsgs(&b, &t, B, m)
    if v == -2:
        raise MemoryError()
    return v
