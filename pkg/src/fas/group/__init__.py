"""Prime-order group arithmetic on secp256k1.

Scalars are plain ints modulo :data:`ORDER`. Group elements are
:class:`Point` values; the heavy kernels (scalar multiplication,
multi-exponentiation, bounded discrete log) live in a compiled extension
with a pure-Python fallback picked at import time. Set ``FAS_BACKEND=pure``
to force the fallback.
"""
from __future__ import annotations

import hashlib
import os
import random
import secrets
from dataclasses import dataclass
from typing import Sequence

from ..errors import DecodeError, DlogOutOfRange, LengthMismatch, ParamError
from . import _pure

try:
    from . import _core
except ImportError:  # extension not built
    _core = None

_BACKENDS = {"pure": _pure}
if _core is not None:
    _BACKENDS["compiled"] = _core


def _initial_backend():
    want = os.environ.get("FAS_BACKEND", "").strip().lower()
    if want:
        if want not in _BACKENDS:
            raise ImportError(f"FAS_BACKEND={want!r} is not available (have {sorted(_BACKENDS)})")
        return _BACKENDS[want]
    return _core if _core is not None else _pure


_k = _initial_backend()

FIELD = _pure.FIELD
ORDER = _pure.ORDER

SCALAR_BYTES = 32
POINT_BYTES = 33
UNCOMPRESSED_POINT_BYTES = 64

# below this bound a linear scan beats building a baby-step table
LINEAR_SCAN_MAX = 1 << 16


def available_backends():
    return sorted(_BACKENDS)


def backend_name():
    return _k.NAME


def set_backend(name):
    """Switch kernels process-wide. Returns the previous backend name."""
    global _k
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    prev = _k.NAME
    _k = _BACKENDS[name]
    return prev


class Point:
    """An element of the secp256k1 group, immutable.

    Written additively: ``a * P + Q``. ``None`` affine coordinates encode
    the identity.
    """

    __slots__ = ("_xy",)

    def __init__(self, xy=None):
        object.__setattr__(self, "_xy", xy)

    def __setattr__(self, name, value):
        raise AttributeError("Point is immutable")

    @classmethod
    def from_affine(cls, x, y):
        if not (0 <= x < FIELD and 0 <= y < FIELD) or not _pure.is_on_curve(x, y):
            raise DecodeError("point is not on the curve")
        return cls((x, y))

    @property
    def xy(self):
        return self._xy

    def is_identity(self):
        return self._xy is None

    def __add__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return Point(_k.add(self._xy, other._xy))

    def __neg__(self):
        return Point(_k.neg(self._xy))

    def __sub__(self, other):
        if not isinstance(other, Point):
            return NotImplemented
        return Point(_k.add(self._xy, _k.neg(other._xy)))

    def __mul__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        return Point(_k.mul(self._xy, k % ORDER))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Point) and self._xy == other._xy

    def __hash__(self):
        return hash(self._xy)

    def __repr__(self):
        if self._xy is None:
            return "Point(identity)"
        return f"Point({self.encode().hex()[:18]}...)"

    def encode(self) -> bytes:
        """33-byte compressed SEC1; the identity is 33 zero bytes."""
        if self._xy is None:
            return bytes(POINT_BYTES)
        x, y = self._xy
        return bytes([2 + (y & 1)]) + x.to_bytes(32, "big")

    def encode_uncompressed(self) -> bytes:
        """64-byte x||y, debug output only."""
        if self._xy is None:
            return bytes(UNCOMPRESSED_POINT_BYTES)
        x, y = self._xy
        return x.to_bytes(32, "big") + y.to_bytes(32, "big")

    @classmethod
    def decode(cls, data: bytes) -> "Point":
        if len(data) != POINT_BYTES:
            raise DecodeError(f"point encoding must be {POINT_BYTES} bytes, got {len(data)}")
        if data == bytes(POINT_BYTES):
            return IDENTITY
        prefix = data[0]
        if prefix not in (2, 3):
            raise DecodeError("bad point prefix")
        x = int.from_bytes(data[1:], "big")
        if x >= FIELD:
            raise DecodeError("x coordinate not canonical")
        y = _sqrt((pow(x, 3, FIELD) + 7) % FIELD)
        if y is None:
            raise DecodeError("x is not on the curve")
        if (y & 1) != (prefix & 1):
            y = FIELD - y
        # cofactor is 1: every curve point lies in the prime-order group
        return cls((x, y))


def _sqrt(a):
    # FIELD % 4 == 3
    r = pow(a, (FIELD + 1) // 4, FIELD)
    return r if r * r % FIELD == a else None


IDENTITY = Point(None)
GENERATOR = Point((_pure.GX, _pure.GY))


@dataclass(frozen=True)
class GroupDescriptor:
    name: str
    order: int
    generator: Point

    def digest(self) -> bytes:
        return hashlib.sha256(self.name.encode() + self.order.to_bytes(32, "big")
                              + self.generator.encode()).digest()


SECP256K1 = GroupDescriptor("secp256k1", ORDER, GENERATOR)


def encode_scalar(k: int) -> bytes:
    if not 0 <= k < ORDER:
        raise ValueError("scalar out of range")
    return k.to_bytes(SCALAR_BYTES, "big")


def decode_scalar(data: bytes) -> int:
    if len(data) != SCALAR_BYTES:
        raise DecodeError(f"scalar encoding must be {SCALAR_BYTES} bytes, got {len(data)}")
    k = int.from_bytes(data, "big")
    if k >= ORDER:
        raise DecodeError("scalar not canonical")
    return k


def make_rng(seed=None):
    """System CSPRNG by default; a seeded ``random.Random`` for reproducible runs.

    Seeded generators are for tests and demos only.
    """
    if seed is None:
        return secrets.SystemRandom()
    return random.Random(seed)


def random_scalar(rng) -> int:
    """Uniform in [0, ORDER) by rejection sampling from 256-bit draws."""
    while True:
        k = rng.getrandbits(256)
        if k < ORDER:
            return k


def random_nonzero_scalar(rng) -> int:
    while True:
        k = random_scalar(rng)
        if k:
            return k


def base_mul(k: int) -> Point:
    return Point(_k.mul_base(k % ORDER))


def batch_base_mul(scalars: Sequence[int]) -> list[Point]:
    return [Point(_k.mul_base(k % ORDER)) for k in scalars]


def batch_mul(points: Sequence[Point], scalars: Sequence[int]) -> list[Point]:
    if len(points) != len(scalars):
        raise LengthMismatch(f"{len(points)} points vs {len(scalars)} scalars")
    return [Point(xy) for xy in _k.batch_mul([p._xy for p in points], [k % ORDER for k in scalars])]


def multiexp(points: Sequence[Point], scalars: Sequence[int]) -> Point:
    """Sum of scalars[i] * points[i], computed by interleaved windowed exponentiation."""
    if len(points) != len(scalars):
        raise LengthMismatch(f"{len(points)} points vs {len(scalars)} scalars")
    if not points:
        return IDENTITY
    return Point(_k.multiexp([p._xy for p in points], [k % ORDER for k in scalars]))


def bsgs_dlog(base: Point, target: Point, bound: int, method: str = "auto") -> int:
    """Return v in [0, bound] with v * base == target.

    ``method`` is ``"auto"`` (linear scan up to 2**16, BSGS above),
    ``"bsgs"`` or ``"linear"``. Raises :class:`DlogOutOfRange` when no such v.
    """
    if not 0 <= bound < ORDER:
        raise ParamError("bound must satisfy 0 <= B < p")
    if method == "auto":
        method = "linear" if bound <= LINEAR_SCAN_MAX else "bsgs"
    if method not in ("linear", "bsgs"):
        raise ValueError(f"unknown method {method!r}")
    kern = _k if bound < (1 << 62) else _pure  # compiled kernels index with 64-bit ints
    if method == "linear":
        v = kern.linear_dlog(base._xy, target._xy, bound)
    else:
        v = kern.bsgs(base._xy, target._xy, bound)
    if v < 0:
        raise DlogOutOfRange(f"no exponent in [0, {bound}] matches")
    return v


def hash_to_point(tag: bytes, index: int) -> Point:
    """Deterministic generator with unknown discrete log (try-and-increment)."""
    ctr = 0
    while True:
        h = hashlib.sha256(tag + index.to_bytes(8, "big") + ctr.to_bytes(4, "big")).digest()
        x = int.from_bytes(h, "big")
        if x < FIELD:
            y = _sqrt((pow(x, 3, FIELD) + 7) % FIELD)
            if y is not None:
                if y & 1:
                    y = FIELD - y
                return Point((x, y))
        ctr += 1


def inner_product(a: Sequence[int], b: Sequence[int]) -> int:
    if len(a) != len(b):
        raise LengthMismatch(f"lengths {len(a)} and {len(b)} differ")
    return sum(x * y for x, y in zip(a, b)) % ORDER
