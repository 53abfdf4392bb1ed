"""Pure-Python secp256k1 kernels.

Points cross this boundary as affine ``(x, y)`` tuples of ints, or ``None``
for the point at infinity. The compiled ``_core`` module exposes the same
functions with the same semantics.
"""
import math

FIELD = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F
ORDER = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
GX = 0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798
GY = 0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8

NAME = "pure"

_P = FIELD


def _inv(a):
    return pow(a, -1, _P)


# Jacobian points are (X, Y, Z) with Z == 0 meaning infinity.
_INF = (1, 1, 0)


def _double(pt):
    X, Y, Z = pt
    if Z == 0 or Y == 0:
        return _INF
    A = X * X % _P
    B = Y * Y % _P
    C = B * B % _P
    D = 2 * ((X + B) * (X + B) - A - C) % _P
    E = 3 * A % _P
    F = E * E % _P
    X3 = (F - 2 * D) % _P
    Y3 = (E * (D - X3) - 8 * C) % _P
    Z3 = 2 * Y * Z % _P
    return (X3, Y3, Z3)


def _add_affine(pt, aff):
    """Jacobian + affine (mixed addition)."""
    if aff is None:
        return pt
    X1, Y1, Z1 = pt
    x2, y2 = aff
    if Z1 == 0:
        return (x2, y2, 1)
    Z1Z1 = Z1 * Z1 % _P
    U2 = x2 * Z1Z1 % _P
    S2 = y2 * Z1 * Z1Z1 % _P
    H = (U2 - X1) % _P
    R = (S2 - Y1) % _P
    if H == 0:
        if R == 0:
            return _double(pt)
        return _INF
    HH = H * H % _P
    HHH = H * HH % _P
    V = X1 * HH % _P
    X3 = (R * R - HHH - 2 * V) % _P
    Y3 = (R * (V - X3) - Y1 * HHH) % _P
    Z3 = Z1 * H % _P
    return (X3, Y3, Z3)


def _to_affine(pt):
    X, Y, Z = pt
    if Z == 0:
        return None
    zi = _inv(Z)
    zi2 = zi * zi % _P
    return (X * zi2 % _P, Y * zi2 * zi % _P)


def _batch_to_affine(pts):
    """Montgomery's trick: one inversion for the whole list."""
    out = [None] * len(pts)
    prefix = []
    acc = 1
    for X, Y, Z in pts:
        prefix.append(acc)
        if Z:
            acc = acc * Z % _P
    inv = _inv(acc)
    for i in range(len(pts) - 1, -1, -1):
        X, Y, Z = pts[i]
        if Z == 0:
            continue
        zi = inv * prefix[i] % _P
        inv = inv * Z % _P
        zi2 = zi * zi % _P
        out[i] = (X * zi2 % _P, Y * zi2 * zi % _P)
    return out


def is_on_curve(x, y):
    return (y * y - x * x * x - 7) % _P == 0


def neg(a):
    if a is None:
        return None
    return (a[0], (-a[1]) % _P)


def add(a, b):
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if (y1 + y2) % _P == 0:
            return None
        lam = 3 * x1 * x1 * _inv(2 * y1) % _P
    else:
        lam = (y2 - y1) * _inv(x2 - x1) % _P
    x3 = (lam * lam - x1 - x2) % _P
    return (x3, (lam * (x1 - x3) - y1) % _P)


def _odd_multiples(aff, count):
    """[P, 3P, 5P, ...] in Jacobian form, ``count`` entries."""
    first = (aff[0], aff[1], 1)
    out = [first]
    if count > 1:
        two = _to_affine(_double(first))
        cur = first
        for _ in range(count - 1):
            cur = _add_affine(cur, two)
            out.append(cur)
    return out


def _window_digits(k, w):
    """Sliding-window recoding: list of (bit position, odd digit)."""
    digits = []
    i = 0
    while k >> i:
        if not (k >> i) & 1:
            i += 1
            continue
        digits.append((i, (k >> i) & ((1 << w) - 1)))
        i += w
    return digits


def _pick_window(bits):
    best_w, best_cost = 1, None
    for w in range(1, 7):
        cost = (1 << (w - 1)) + bits / (w + 1)
        if best_cost is None or cost < best_cost:
            best_w, best_cost = w, cost
    return best_w


_G_TABLE = None


def _g_table():
    # table[i][j] = j * 16**i * G, affine, j in 1..15
    global _G_TABLE
    if _G_TABLE is None:
        rows = []
        base = (GX, GY, 1)
        for _ in range(64):
            row = [base]
            base_aff = _to_affine(base)
            for _ in range(14):
                row.append(_add_affine(row[-1], base_aff))
            rows.append(row)
            base = _double(_double(_double(_double(base))))
        flat = _batch_to_affine([p for row in rows for p in row])
        _G_TABLE = [flat[i * 15:(i + 1) * 15] for i in range(64)]
    return _G_TABLE


def mul_base(k):
    k %= ORDER
    table = _g_table()
    acc = _INF
    i = 0
    while k:
        nib = k & 15
        if nib:
            acc = _add_affine(acc, table[i][nib - 1])
        k >>= 4
        i += 1
    return _to_affine(acc)


def mul(a, k):
    k %= ORDER
    if a is None or k == 0:
        return None
    if a == (GX, GY):
        return mul_base(k)
    w = _pick_window(k.bit_length())
    table = _batch_to_affine(_odd_multiples(a, 1 << (w - 1)))
    digits = _window_digits(k, w)
    acc = _INF
    top = k.bit_length() - 1
    pos = len(digits) - 1
    for bit in range(top, -1, -1):
        acc = _double(acc)
        if pos >= 0 and digits[pos][0] == bit:
            acc = _add_affine(acc, table[digits[pos][1] >> 1])
            pos -= 1
    return _to_affine(acc)


def batch_mul(points, scalars):
    if len(points) != len(scalars):
        raise ValueError("length mismatch")
    return [mul(p, k) for p, k in zip(points, scalars)]


def multiexp(points, scalars):
    """Interleaved sliding-window multi-exponentiation (Straus)."""
    if len(points) != len(scalars):
        raise ValueError("length mismatch")
    live = [(p, k % ORDER) for p, k in zip(points, scalars) if p is not None and k % ORDER]
    if not live:
        return None
    top = max(k.bit_length() for _, k in live)
    w = _pick_window(top)
    count = 1 << (w - 1)
    jac = []
    for p, _ in live:
        jac.extend(_odd_multiples(p, count))
    flat = _batch_to_affine(jac)
    by_bit = [[] for _ in range(top)]
    for idx, (_, k) in enumerate(live):
        off = idx * count
        for bit, d in _window_digits(k, w):
            entry = flat[off + (d >> 1)]
            if entry is not None:
                by_bit[bit].append(entry)
    acc = _INF
    for bit in range(top - 1, -1, -1):
        acc = _double(acc)
        for entry in by_bit[bit]:
            acc = _add_affine(acc, entry)
    return _to_affine(acc)


def linear_dlog(base, target, bound):
    """Smallest v in [0, bound] with v*base == target, or -1."""
    cur = None
    for v in range(bound + 1):
        if cur == target:
            return v
        cur = add(cur, base)
    return -1


def bsgs(base, target, bound):
    """Baby-step giant-step over [0, bound]; -1 if no exponent fits."""
    if target is None:
        return 0
    if base is None:
        return -1
    m = _isqrt_ceil(bound + 1)
    table = {}
    cur = None
    for j in range(m):
        if cur is not None and cur not in table:
            table[cur] = j
        cur = add(cur, base)
    stride = neg(mul(base, m)) if m % ORDER else None
    gamma = target
    for i in range(bound // m + 1):
        if gamma is None:
            v = i * m
            return v if v <= bound else -1
        j = table.get(gamma)
        if j is not None:
            v = i * m + j
            return v if v <= bound else -1
        gamma = add(gamma, stride)
    return -1


def _isqrt_ceil(n):
    r = math.isqrt(n)
    return r if r * r == n else r + 1
