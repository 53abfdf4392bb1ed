/* secp256k1 field and group kernels used by _core.pyx.
 *
 * Field elements are 4x64-bit little-endian limbs kept fully reduced (< P).
 * Not constant time.
 */
#ifndef FAS_SECP256K1_KERN_H
#define FAS_SECP256K1_KERN_H

#include <stdint.h>
#include <stdlib.h>
#include <string.h>

typedef unsigned __int128 u128;

typedef struct { uint64_t v[4]; } fe;
typedef struct { fe x, y, z; int inf; } gej;
typedef struct { fe x, y; int inf; } ge;

/* P = 2^256 - 2^32 - 977 */
static const fe FE_P = {{0xFFFFFFFEFFFFFC2FULL, 0xFFFFFFFFFFFFFFFFULL,
                         0xFFFFFFFFFFFFFFFFULL, 0xFFFFFFFFFFFFFFFFULL}};
#define FE_C 0x1000003D1ULL

static inline int fe_is_zero(const fe *a) {
    return (a->v[0] | a->v[1] | a->v[2] | a->v[3]) == 0;
}

static inline int fe_eq(const fe *a, const fe *b) {
    return a->v[0] == b->v[0] && a->v[1] == b->v[1] &&
           a->v[2] == b->v[2] && a->v[3] == b->v[3];
}

static inline int fe_geq_p(const fe *a) {
    for (int i = 3; i >= 0; i--) {
        if (a->v[i] > FE_P.v[i]) return 1;
        if (a->v[i] < FE_P.v[i]) return 0;
    }
    return 1;
}

static inline void fe_sub_p(fe *a) {
    u128 acc = 0;
    uint64_t borrow = 0;
    for (int i = 0; i < 4; i++) {
        acc = (u128)a->v[i] - FE_P.v[i] - borrow;
        a->v[i] = (uint64_t)acc;
        borrow = (uint64_t)(acc >> 64) & 1;
    }
}

static inline void fe_set_u64(fe *r, uint64_t x) {
    r->v[0] = x; r->v[1] = r->v[2] = r->v[3] = 0;
}

static inline void fe_add(fe *r, const fe *a, const fe *b) {
    u128 acc = 0;
    for (int i = 0; i < 4; i++) {
        acc += (u128)a->v[i] + b->v[i];
        r->v[i] = (uint64_t)acc;
        acc >>= 64;
    }
    if (acc) {
        /* r + 2^256 == r + C (mod P); r < P here so no second overflow */
        u128 c = (u128)r->v[0] + FE_C;
        r->v[0] = (uint64_t)c; c >>= 64;
        for (int i = 1; i < 4 && c; i++) {
            c += r->v[i];
            r->v[i] = (uint64_t)c; c >>= 64;
        }
    }
    if (fe_geq_p(r)) fe_sub_p(r);
}

static inline void fe_sub(fe *r, const fe *a, const fe *b) {
    u128 acc;
    uint64_t borrow = 0;
    for (int i = 0; i < 4; i++) {
        acc = (u128)a->v[i] - b->v[i] - borrow;
        r->v[i] = (uint64_t)acc;
        borrow = (uint64_t)(acc >> 64) & 1;
    }
    if (borrow) {
        /* r - 2^256 + P == r - C */
        uint64_t bw = 0;
        acc = (u128)r->v[0] - FE_C;
        r->v[0] = (uint64_t)acc;
        bw = (uint64_t)(acc >> 64) & 1;
        for (int i = 1; i < 4; i++) {
            acc = (u128)r->v[i] - bw;
            r->v[i] = (uint64_t)acc;
            bw = (uint64_t)(acc >> 64) & 1;
        }
    }
}

static inline void fe_neg(fe *r, const fe *a) {
    fe zero = {{0, 0, 0, 0}};
    fe_sub(r, &zero, a);
}

static inline void fe_reduce512(fe *r, const uint64_t t[8]) {
    uint64_t u[5];
    u128 acc;
    uint64_t carry = 0;
    for (int i = 0; i < 4; i++) {
        acc = (u128)t[i + 4] * FE_C + t[i] + carry;
        u[i] = (uint64_t)acc;
        carry = (uint64_t)(acc >> 64);
    }
    u[4] = carry;
    acc = (u128)u[4] * FE_C + u[0];
    u[0] = (uint64_t)acc;
    carry = (uint64_t)(acc >> 64);
    for (int i = 1; i < 4; i++) {
        acc = (u128)u[i] + carry;
        u[i] = (uint64_t)acc;
        carry = (uint64_t)(acc >> 64);
    }
    if (carry) {
        acc = (u128)u[0] + FE_C;
        u[0] = (uint64_t)acc;
        carry = (uint64_t)(acc >> 64);
        for (int i = 1; i < 4; i++) {
            acc = (u128)u[i] + carry;
            u[i] = (uint64_t)acc;
            carry = (uint64_t)(acc >> 64);
        }
    }
    r->v[0] = u[0]; r->v[1] = u[1]; r->v[2] = u[2]; r->v[3] = u[3];
    if (fe_geq_p(r)) fe_sub_p(r);
}

static inline void fe_mul(fe *r, const fe *a, const fe *b) {
    uint64_t t[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 4; i++) {
        uint64_t carry = 0;
        for (int j = 0; j < 4; j++) {
            u128 m = (u128)a->v[i] * b->v[j] + t[i + j] + carry;
            t[i + j] = (uint64_t)m;
            carry = (uint64_t)(m >> 64);
        }
        t[i + 4] = carry;
    }
    fe_reduce512(r, t);
}

static inline void fe_sqr(fe *r, const fe *a) { fe_mul(r, a, a); }

static inline void fe_mul_small(fe *r, const fe *a, uint64_t k) {
    uint64_t t[8] = {0, 0, 0, 0, 0, 0, 0, 0};
    u128 acc = 0;
    for (int i = 0; i < 4; i++) {
        acc += (u128)a->v[i] * k;
        t[i] = (uint64_t)acc;
        acc >>= 64;
    }
    t[4] = (uint64_t)acc;
    fe_reduce512(r, t);
}

/* a^(P-2) */
static void fe_inv(fe *r, const fe *a) {
    /* P - 2 = 0xFFFF...FFFE FFFFFC2D */
    static const uint64_t e[4] = {0xFFFFFFFEFFFFFC2DULL, 0xFFFFFFFFFFFFFFFFULL,
                                  0xFFFFFFFFFFFFFFFFULL, 0xFFFFFFFFFFFFFFFFULL};
    fe acc;
    fe_set_u64(&acc, 1);
    for (int i = 3; i >= 0; i--) {
        for (int b = 63; b >= 0; b--) {
            fe_sqr(&acc, &acc);
            if ((e[i] >> b) & 1) fe_mul(&acc, &acc, a);
        }
    }
    *r = acc;
}

static inline void fe_from_be(fe *r, const unsigned char *b) {
    for (int i = 0; i < 4; i++) {
        uint64_t w = 0;
        for (int j = 0; j < 8; j++) w = (w << 8) | b[(3 - i) * 8 + j];
        r->v[i] = w;
    }
}

static inline void fe_to_be(unsigned char *b, const fe *a) {
    for (int i = 0; i < 4; i++) {
        uint64_t w = a->v[i];
        for (int j = 7; j >= 0; j--) { b[(3 - i) * 8 + j] = (unsigned char)w; w >>= 8; }
    }
}

/* ---- group ---- */

static inline void gej_set_inf(gej *r) {
    memset(r, 0, sizeof(*r));
    r->inf = 1;
}

static inline void gej_set_ge(gej *r, const ge *a) {
    if (a->inf) { gej_set_inf(r); return; }
    r->x = a->x; r->y = a->y; fe_set_u64(&r->z, 1); r->inf = 0;
}

static void gej_double(gej *r, const gej *a) {
    if (a->inf || fe_is_zero(&a->y)) { gej_set_inf(r); return; }
    fe A, B, C, D, E, F, t, X3, Y3, Z3;
    fe_sqr(&A, &a->x);
    fe_sqr(&B, &a->y);
    fe_sqr(&C, &B);
    fe_add(&t, &a->x, &B);
    fe_sqr(&t, &t);
    fe_sub(&t, &t, &A);
    fe_sub(&t, &t, &C);
    fe_add(&D, &t, &t);
    fe_mul_small(&E, &A, 3);
    fe_sqr(&F, &E);
    fe_add(&t, &D, &D);
    fe_sub(&X3, &F, &t);
    fe_sub(&t, &D, &X3);
    fe_mul(&Y3, &E, &t);
    fe_mul_small(&t, &C, 8);
    fe_sub(&Y3, &Y3, &t);
    fe_mul(&Z3, &a->y, &a->z);
    fe_add(&Z3, &Z3, &Z3);
    r->x = X3; r->y = Y3; r->z = Z3; r->inf = 0;
}

/* r = a + b, b affine */
static void gej_add_ge(gej *r, const gej *a, const ge *b) {
    if (b->inf) { *r = *a; return; }
    if (a->inf) { gej_set_ge(r, b); return; }
    fe Z1Z1, U2, S2, H, R, HH, HHH, V, t, X3, Y3, Z3;
    fe_sqr(&Z1Z1, &a->z);
    fe_mul(&U2, &b->x, &Z1Z1);
    fe_mul(&S2, &b->y, &a->z);
    fe_mul(&S2, &S2, &Z1Z1);
    fe_sub(&H, &U2, &a->x);
    fe_sub(&R, &S2, &a->y);
    if (fe_is_zero(&H)) {
        if (fe_is_zero(&R)) { gej_double(r, a); return; }
        gej_set_inf(r); return;
    }
    fe_sqr(&HH, &H);
    fe_mul(&HHH, &H, &HH);
    fe_mul(&V, &a->x, &HH);
    fe_sqr(&X3, &R);
    fe_sub(&X3, &X3, &HHH);
    fe_add(&t, &V, &V);
    fe_sub(&X3, &X3, &t);
    fe_sub(&t, &V, &X3);
    fe_mul(&Y3, &R, &t);
    fe_mul(&t, &a->y, &HHH);
    fe_sub(&Y3, &Y3, &t);
    fe_mul(&Z3, &a->z, &H);
    r->x = X3; r->y = Y3; r->z = Z3; r->inf = 0;
}

static void ge_set_gej(ge *r, const gej *a) {
    if (a->inf) { memset(r, 0, sizeof(*r)); r->inf = 1; return; }
    fe zi, zi2, zi3;
    fe_inv(&zi, &a->z);
    fe_sqr(&zi2, &zi);
    fe_mul(&zi3, &zi2, &zi);
    fe_mul(&r->x, &a->x, &zi2);
    fe_mul(&r->y, &a->y, &zi3);
    r->inf = 0;
}

/* Montgomery batch normalisation. scratch holds n fe. */
static void ge_set_all_gej(ge *r, const gej *a, size_t n, fe *scratch) {
    fe acc, inv, zi, zi2, zi3;
    fe_set_u64(&acc, 1);
    for (size_t i = 0; i < n; i++) {
        scratch[i] = acc;
        if (!a[i].inf) fe_mul(&acc, &acc, &a[i].z);
    }
    fe_inv(&inv, &acc);
    for (size_t i = n; i-- > 0;) {
        if (a[i].inf) { memset(&r[i], 0, sizeof(ge)); r[i].inf = 1; continue; }
        fe_mul(&zi, &inv, &scratch[i]);
        fe_mul(&inv, &inv, &a[i].z);
        fe_sqr(&zi2, &zi);
        fe_mul(&zi3, &zi2, &zi);
        fe_mul(&r[i].x, &a[i].x, &zi2);
        fe_mul(&r[i].y, &a[i].y, &zi3);
        r[i].inf = 0;
    }
}

static inline void ge_neg(ge *r, const ge *a) {
    *r = *a;
    if (!a->inf) fe_neg(&r->y, &a->y);
}

/* ---- scalars: 4x64 little-endian, already reduced mod n by the caller ---- */

typedef struct { uint64_t v[4]; } sc;

static inline int sc_bit(const sc *k, int i) {
    return (int)((k->v[i >> 6] >> (i & 63)) & 1);
}

static inline int sc_bits(const sc *k, int i, int w) {
    /* w bits starting at i, w <= 8 */
    int r = 0;
    for (int j = 0; j < w && i + j < 256; j++) r |= sc_bit(k, i + j) << j;
    return r;
}

static inline int sc_bitlen(const sc *k) {
    for (int i = 3; i >= 0; i--)
        if (k->v[i]) return i * 64 + 64 - __builtin_clzll(k->v[i]);
    return 0;
}

static int pick_window(int bits) {
    int best_w = 1;
    double best = -1;
    for (int w = 1; w <= 6; w++) {
        double cost = (double)(1 << (w - 1)) + (double)bits / (w + 1);
        if (best < 0 || cost < best) { best = cost; best_w = w; }
    }
    return best_w;
}

/* Sliding-window recoding into digits[0..255] (0 or odd value). */
static void sc_recode(signed char *digits, const sc *k, int w) {
    memset(digits, 0, 256);
    int i = 0;
    while (i < 256) {
        if (!sc_bit(k, i)) { i++; continue; }
        digits[i] = (signed char)sc_bits(k, i, w);
        i += w;
    }
}

/* Odd multiples P, 3P, ..., (2*count-1)P, Jacobian. */
static void odd_multiples(gej *out, const ge *p, int count) {
    gej_set_ge(&out[0], p);
    if (count == 1) return;
    gej two_j;
    ge two;
    gej_double(&two_j, &out[0]);
    ge_set_gej(&two, &two_j);
    for (int i = 1; i < count; i++) gej_add_ge(&out[i], &out[i - 1], &two);
}

/* Fixed-base comb for G: 64 rows x 15 entries. */
static ge G_TABLE[64][15];
static int G_TABLE_READY = 0;

static void g_table_init(const ge *g) {
    gej *tmp = (gej *)malloc(sizeof(gej) * 64 * 15);
    fe *scratch = (fe *)malloc(sizeof(fe) * 64 * 15);
    gej base;
    gej_set_ge(&base, g);
    for (int i = 0; i < 64; i++) {
        ge base_aff;
        ge_set_gej(&base_aff, &base);
        tmp[i * 15] = base;
        for (int j = 1; j < 15; j++) gej_add_ge(&tmp[i * 15 + j], &tmp[i * 15 + j - 1], &base_aff);
        for (int d = 0; d < 4; d++) gej_double(&base, &base);
    }
    ge_set_all_gej(&G_TABLE[0][0], tmp, 64 * 15, scratch);
    free(tmp);
    free(scratch);
    G_TABLE_READY = 1;
}

static void mul_base(gej *r, const sc *k) {
    gej_set_inf(r);
    for (int i = 0; i < 64; i++) {
        int nib = (int)((k->v[i >> 4] >> ((i & 15) * 4)) & 15);
        if (nib) gej_add_ge(r, r, &G_TABLE[i][nib - 1]);
    }
}

static void mul_var(gej *r, const ge *p, const sc *k) {
    gej_set_inf(r);
    if (p->inf) return;
    int top = sc_bitlen(k);
    if (!top) return;
    int w = pick_window(top);
    int count = 1 << (w - 1);
    gej jt[32];
    ge table[32];
    fe scratch[32];
    signed char digits[256];
    odd_multiples(jt, p, count);
    ge_set_all_gej(table, jt, count, scratch);
    sc_recode(digits, k, w);
    for (int i = top - 1; i >= 0; i--) {
        gej_double(r, r);
        if (digits[i]) gej_add_ge(r, r, &table[digits[i] >> 1]);
    }
}

/* Straus interleaved multi-exponentiation. Returns -1 on allocation failure. */
static int multiexp(gej *r, const ge *pts, const sc *ks, size_t n) {
    gej_set_inf(r);
    int top = 0;
    for (size_t i = 0; i < n; i++) {
        if (pts[i].inf) continue;
        int b = sc_bitlen(&ks[i]);
        if (b > top) top = b;
    }
    if (!top) return 0;
    int w = pick_window(top);
    int count = 1 << (w - 1);
    gej *jt = (gej *)malloc(sizeof(gej) * n * count);
    ge *table = (ge *)malloc(sizeof(ge) * n * count);
    fe *scratch = (fe *)malloc(sizeof(fe) * n * count);
    signed char *digits = (signed char *)malloc(256 * n);
    if (!jt || !table || !scratch || !digits) {
        free(jt); free(table); free(scratch); free(digits);
        return -1;
    }
    for (size_t i = 0; i < n; i++) {
        if (pts[i].inf) {
            for (int j = 0; j < count; j++) gej_set_inf(&jt[i * count + j]);
            memset(digits + 256 * i, 0, 256);
            continue;
        }
        odd_multiples(&jt[i * count], &pts[i], count);
        sc_recode(digits + 256 * i, &ks[i], w);
    }
    ge_set_all_gej(table, jt, n * count, scratch);
    free(jt);
    free(scratch);
    for (int b = top - 1; b >= 0; b--) {
        gej_double(r, r);
        for (size_t i = 0; i < n; i++) {
            int d = digits[256 * i + b];
            if (d) gej_add_ge(r, r, &table[i * count + (d >> 1)]);
        }
    }
    free(table);
    free(digits);
    return 0;
}

static inline int ge_eq(const ge *a, const ge *b) {
    if (a->inf || b->inf) return a->inf && b->inf;
    return fe_eq(&a->x, &b->x) && fe_eq(&a->y, &b->y);
}

/* Jacobian a equals affine b */
static int gej_eq_ge(const gej *a, const ge *b) {
    if (a->inf || b->inf) return a->inf && b->inf;
    fe z2, z3, t;
    fe_sqr(&z2, &a->z);
    fe_mul(&t, &b->x, &z2);
    if (!fe_eq(&t, &a->x)) return 0;
    fe_mul(&z3, &z2, &a->z);
    fe_mul(&t, &b->y, &z3);
    return fe_eq(&t, &a->y);
}

static int64_t linear_dlog(const ge *base, const ge *target, uint64_t bound) {
    gej cur;
    gej_set_inf(&cur);
    for (uint64_t v = 0; v <= bound; v++) {
        if (gej_eq_ge(&cur, target)) return (int64_t)v;
        gej_add_ge(&cur, &cur, base);
    }
    return -1;
}

/* ---- BSGS ---- */

typedef struct { uint64_t key; uint64_t j; } slot;

static inline uint64_t mix64(uint64_t x) {
    x ^= x >> 33; x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33; x *= 0xc4ceb93fe53de74fULL;
    x ^= x >> 33;
    return x;
}

static inline uint64_t ge_key(const ge *p) {
    return p->x.v[0] ^ (p->y.v[0] & 1) ^ (p->x.v[1] << 1);
}

#define BSGS_CHUNK 1024

/* Returns v in [0, bound] or -1 if none, -2 on allocation failure. */
static int64_t bsgs(const ge *base, const ge *target, uint64_t bound, uint64_t m) {
    if (target->inf) return 0;
    if (base->inf) return -1;
    size_t cap = 1;
    while (cap < 2 * m) cap <<= 1;
    slot *tab = (slot *)calloc(cap, sizeof(slot));
    uint8_t *used = (uint8_t *)calloc(cap, 1);
    gej *jbuf = (gej *)malloc(sizeof(gej) * BSGS_CHUNK);
    ge *abuf = (ge *)malloc(sizeof(ge) * BSGS_CHUNK);
    fe *scratch = (fe *)malloc(sizeof(fe) * BSGS_CHUNK);
    if (!tab || !used || !jbuf || !abuf || !scratch) {
        free(tab); free(used); free(jbuf); free(abuf); free(scratch);
        return -2;
    }
    int64_t result = -1;

    /* baby steps j*base, j in [1, m) */
    gej cur;
    gej_set_ge(&cur, base);
    uint64_t j = 1;
    while (j < m) {
        size_t c = 0;
        while (c < BSGS_CHUNK && j + c < m) {
            jbuf[c] = cur;
            gej_add_ge(&cur, &cur, base);
            c++;
        }
        ge_set_all_gej(abuf, jbuf, c, scratch);
        for (size_t t = 0; t < c; t++) {
            if (abuf[t].inf) continue;
            uint64_t key = ge_key(&abuf[t]);
            size_t h = mix64(key) & (cap - 1);
            while (used[h]) h = (h + 1) & (cap - 1);
            used[h] = 1;
            tab[h].key = key;
            tab[h].j = j + t;
        }
        j += c;
    }

    /* giant steps: target - i*m*base */
    sc msc = {{m, 0, 0, 0}};
    gej stride_j;
    ge stride;
    mul_var(&stride_j, base, &msc);
    ge_set_gej(&stride, &stride_j);
    ge_neg(&stride, &stride);

    uint64_t imax = bound / m;
    gej gam;
    gej_set_ge(&gam, target);
    uint64_t i = 0;
    while (i <= imax && result < 0) {
        size_t c = 0;
        while (c < BSGS_CHUNK && i + c <= imax) {
            jbuf[c] = gam;
            gej_add_ge(&gam, &gam, &stride);
            c++;
        }
        ge_set_all_gej(abuf, jbuf, c, scratch);
        for (size_t t = 0; t < c && result < 0; t++) {
            uint64_t ii = i + t;
            if (abuf[t].inf) {
                uint64_t v = ii * m;
                result = v <= bound ? (int64_t)v : -1;
                if (v > bound) goto done;
                break;
            }
            uint64_t key = ge_key(&abuf[t]);
            size_t h = mix64(key) & (cap - 1);
            while (used[h]) {
                if (tab[h].key == key) {
                    uint64_t v = ii * m + tab[h].j;
                    /* confirm: v*base == target */
                    sc vs = {{v, 0, 0, 0}};
                    gej chk;
                    mul_var(&chk, base, &vs);
                    if (gej_eq_ge(&chk, target)) {
                        result = v <= bound ? (int64_t)v : -1;
                        if (v > bound) goto done;
                        break;
                    }
                }
                h = (h + 1) & (cap - 1);
            }
        }
        i += c;
    }
done:
    free(tab); free(used); free(jbuf); free(abuf); free(scratch);
    return result;
}

#endif
