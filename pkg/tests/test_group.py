import pytest
from cryptography.hazmat.primitives.asymmetric import ec
from hypothesis import given, settings, strategies as st

from fas import group as g
from fas.errors import DecodeError, DlogOutOfRange, LengthMismatch, ParamError

scalars = st.integers(min_value=0, max_value=g.ORDER - 1)


def oracle_mul_base(k):
    nums = ec.derive_private_key(k, ec.SECP256K1()).public_key().public_numbers()
    return nums.x, nums.y


def is_probable_prime(n):
    d, r = n - 1, 0
    while d % 2 == 0:
        d, r = d // 2, r + 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def test_published_constants_are_prime():
    assert g.FIELD == 2**256 - 2**32 - 977
    assert is_probable_prime(g.FIELD)
    assert is_probable_prime(g.ORDER)


def test_double_generator_known_vector():
    assert (g.GENERATOR * 2).xy[0] == 0xC6047F9441ED7D6D3045406E95C07CD85C778E4B8CEF3CA7ABAC09B95C709EE5


@settings(max_examples=60, deadline=None)
@given(k=st.integers(min_value=1, max_value=g.ORDER - 1))
def test_base_mul_matches_openssl(backend, k):
    assert g.base_mul(k).xy == oracle_mul_base(k)


@settings(max_examples=40, deadline=None)
@given(a=scalars, b=scalars)
def test_group_law(backend, a, b):
    A, B = g.base_mul(a), g.base_mul(b)
    assert A + B == g.base_mul(a + b)
    assert A - B == g.base_mul(a - b)
    assert A * b == g.base_mul(a * b)
    assert -A + A == g.IDENTITY


def test_order_annihilates(backend):
    assert g.GENERATOR * g.ORDER == g.IDENTITY
    assert g.base_mul(g.ORDER - 1) == -g.GENERATOR
    assert g.IDENTITY * 5 == g.IDENTITY
    assert g.GENERATOR + g.IDENTITY == g.GENERATOR


@settings(max_examples=50, deadline=None)
@given(k=scalars)
def test_encode_roundtrip(k):
    P = g.base_mul(k)
    enc = P.encode()
    assert len(enc) == g.POINT_BYTES
    assert g.Point.decode(enc) == P


def test_identity_encoding():
    assert g.IDENTITY.encode() == bytes(33)
    assert g.Point.decode(bytes(33)).is_identity()


@pytest.mark.parametrize("bad", [
    bytes(32),
    b"\x04" + bytes(32),
    b"\x02" + g.FIELD.to_bytes(32, "big"),
    b"\x02" + (5).to_bytes(32, "big"),  # x^3+7 = 132 is not a square mod FIELD
])
def test_decode_rejects(bad):
    with pytest.raises(DecodeError):
        g.Point.decode(bad)


def test_sec1_compressed_matches_openssl():
    k = 0xDEADBEEF
    from cryptography.hazmat.primitives import serialization
    pub = ec.derive_private_key(k, ec.SECP256K1()).public_key()
    ref = pub.public_bytes(serialization.Encoding.X962, serialization.PublicFormat.CompressedPoint)
    assert g.base_mul(k).encode() == ref


def test_point_immutable():
    with pytest.raises(AttributeError):
        g.GENERATOR._xy = None


def test_scalar_encoding():
    assert g.decode_scalar(g.encode_scalar(12345)) == 12345
    with pytest.raises(DecodeError):
        g.decode_scalar(g.ORDER.to_bytes(32, "big"))
    with pytest.raises(DecodeError):
        g.decode_scalar(b"\x01")
    with pytest.raises(ValueError):
        g.encode_scalar(g.ORDER)


def test_make_rng_seeded_is_deterministic():
    assert g.random_scalar(g.make_rng(5)) == g.random_scalar(g.make_rng(5))
    assert g.random_scalar(g.make_rng(5)) != g.random_scalar(g.make_rng(6))
    assert 0 < g.random_nonzero_scalar(g.make_rng()) < g.ORDER


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(scalars, scalars), min_size=0, max_size=12))
def test_multiexp_matches_naive(backend, pairs):
    pts = [g.base_mul(a) for a, _ in pairs]
    ks = [b for _, b in pairs]
    expected = g.base_mul(sum(a * b for a, b in pairs))
    assert g.multiexp(pts, ks) == expected


def test_multiexp_with_identity_and_zero(backend):
    P = g.base_mul(9)
    assert g.multiexp([g.IDENTITY, P, P], [3, 0, 2]) == g.base_mul(18)
    assert g.multiexp([], []) == g.IDENTITY
    with pytest.raises(LengthMismatch):
        g.multiexp([P], [1, 2])


def test_batch_mul(backend):
    pts = [g.base_mul(i + 1) for i in range(5)]
    assert g.batch_mul(pts, [2] * 5) == [g.base_mul(2 * (i + 1)) for i in range(5)]
    assert g.batch_base_mul([0, 1]) == [g.IDENTITY, g.GENERATOR]


@pytest.mark.parametrize("method", ["linear", "bsgs", "auto"])
@pytest.mark.parametrize("bound,v", [(0, 0), (1, 1), (100, 37), (100, 100), (10**5, 99999), (10**6, 0)])
def test_dlog_in_range(backend, method, bound, v):
    if method == "linear" and bound > 10**5 and backend == "pure":
        pytest.skip("slow")
    assert g.bsgs_dlog(g.GENERATOR, g.base_mul(v), bound, method=method) == v


@pytest.mark.parametrize("method", ["linear", "bsgs"])
def test_dlog_out_of_range(backend, method):
    with pytest.raises(DlogOutOfRange):
        g.bsgs_dlog(g.GENERATOR, g.base_mul(101), 100, method=method)
    with pytest.raises(DlogOutOfRange):
        g.bsgs_dlog(g.GENERATOR, g.base_mul(-1), 100, method=method)


def test_dlog_other_base(backend):
    H = g.hash_to_point(b"t", 0)
    assert g.bsgs_dlog(H, H * 5000, 10**4) == 5000


def test_dlog_param_checks():
    with pytest.raises(ParamError):
        g.bsgs_dlog(g.GENERATOR, g.GENERATOR, -1)
    with pytest.raises(ValueError):
        g.bsgs_dlog(g.GENERATOR, g.GENERATOR, 5, method="rho")


def test_hash_to_point_is_deterministic_and_distinct():
    a, b = g.hash_to_point(b"tag", 0), g.hash_to_point(b"tag", 1)
    assert a == g.hash_to_point(b"tag", 0)
    assert a != b and not a.is_identity()
    assert g.Point.decode(a.encode()) == a


def test_inner_product():
    assert g.inner_product([1, 2, 3], [4, 5, 6]) == 32
    assert g.inner_product([g.ORDER - 1], [2]) == g.ORDER - 2
    with pytest.raises(LengthMismatch):
        g.inner_product([1], [])


def test_set_backend_rejects_unknown():
    with pytest.raises(ValueError):
        g.set_backend("gpu")
    assert g.backend_name() in g.available_backends()


def test_descriptor_digest_stable():
    assert g.SECP256K1.digest() == g.GroupDescriptor("secp256k1", g.ORDER, g.GENERATOR).digest()
