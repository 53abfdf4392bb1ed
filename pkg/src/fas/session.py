"""Seller/buyer sessions driven end to end, with replayable transcripts.

A transcript keeps every envelope in the order it crossed the wire plus the
time each step took. Replaying it re-runs every public check and the
buyer's extraction.
"""
from __future__ import annotations

import json
import socket
import struct
import threading
import time
from dataclasses import dataclass, field

from . import adaptor, wire
from . import protocol as P
from .errors import EnvelopeError, FasError
from .group import make_rng

STEPS = ("params", "advt", "request", "aux", "presig", "sig")


class CheckFailed(FasError):
    """A public verification step rejected; ``step`` names which one."""

    def __init__(self, step: str, msg: str = ""):
        super().__init__(msg or f"{step} check failed")
        self.step = step


@dataclass
class SessionTranscript:
    mode: str
    ell: int
    bound: int
    envelopes: list[tuple[str, bytes]] = field(default_factory=list)
    timings_ms: dict[str, float] = field(default_factory=dict)
    value: int | None = None

    def add(self, step: str, env: bytes):
        self.envelopes.append((step, env))

    def get(self, step: str) -> bytes:
        for s, env in self.envelopes:
            if s == step:
                return env
        raise KeyError(step)

    def to_json(self) -> str:
        return json.dumps({
            "mode": self.mode, "ell": self.ell, "bound": self.bound, "value": self.value,
            "timings_ms": self.timings_ms,
            "envelopes": [{"step": s, "hex": e.hex()} for s, e in self.envelopes],
        }, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SessionTranscript":
        d = json.loads(text)
        return cls(d["mode"], d["ell"], d["bound"],
                   [(e["step"], bytes.fromhex(e["hex"])) for e in d["envelopes"]],
                   d.get("timings_ms", {}), d.get("value"))


class _Clock:
    def __init__(self, tr: SessionTranscript):
        self.tr = tr

    def run(self, name, fn):
        t0 = time.perf_counter()
        out = fn()
        self.tr.timings_ms[name] = self.tr.timings_ms.get(name, 0.0) + (time.perf_counter() - t0) * 1e3
        return out


# -- the two parties, written against envelopes only ---------------------------

class Seller:
    def __init__(self, pp: P.PublicParams, x, rng):
        self.pp, self.x, self.rng = pp, list(x), rng
        self.X = pp.relation.statement(self.x)
        self.advt, self.st = P.ad_gen(pp, self.X, self.x, rng)

    def hello(self) -> tuple[bytes, bytes]:
        return wire.encode_params(self.pp), wire.encode_advt(self.pp.mode, self.X, self.advt)

    def on_request(self, env: bytes) -> bytes:
        y, self._vk, self._m = wire.decode_request(env, self.pp.mode)
        self._y = y
        self._aux = P.aux_gen(self.pp, self.advt, self.st, y)
        return wire.encode_aux(self.pp.mode, self._aux)

    def on_presig(self, env: bytes) -> bytes:
        pre = wire.decode_presig(env, self.pp.mode)
        if not P.f_pre_verify(self.pp, self.advt, self._vk, self._m, self.X, self._y, self._aux, pre):
            raise CheckFailed("presig", "pre-signature rejected by the seller")
        sig = P.adapt(self.pp, self.advt, self.st, self._vk, self._m, self.X, self.x, self._y, self._aux, pre)
        return wire.encode_sig(self.pp.mode, sig)


class Buyer:
    def __init__(self, y, m: bytes, rng, allow_insecure_nizk: bool = False):
        self.y, self.m, self.rng = list(y), m, rng
        self.allow_insecure = allow_insecure_nizk
        self.sk, self.vk = adaptor.keygen(rng)

    def on_hello(self, params_env: bytes, advt_env: bytes) -> bytes:
        self.pp = wire.decode_params(params_env)
        if self.pp.crs.insecure and not self.allow_insecure:
            raise CheckFailed("advt", "advertisement uses the insecure dev proof backend")
        self.X, self.advt = wire.decode_advt(advt_env, self.pp.mode)
        if not P.ad_verify(self.pp, self.X, self.advt):
            raise CheckFailed("advt", "advertisement proof rejected")
        return wire.encode_request(self.pp.mode, self.y, self.vk, self.m)

    def on_aux(self, env: bytes) -> bytes:
        self.aux = wire.decode_aux(env, self.pp.mode)
        if not P.aux_verify(self.pp, self.advt, self.y, self.aux):
            raise CheckFailed("aux", "aux does not match the advertisement")
        self.pre = P.f_pre_sign(self.pp, self.advt, self.sk, self.m, self.X, self.y, self.aux, self.rng,
                                check_aux=False)
        # the offline half of extraction can run while waiting for the seller
        self.ct1y = P.precompute_ext(self.pp, self.advt, self.y, self.aux)
        return wire.encode_presig(self.pp.mode, self.pre)

    def on_sig(self, env: bytes) -> int:
        sig = wire.decode_sig(env, self.pp.mode)
        if not adaptor.verify(self.vk, self.m, sig):
            raise CheckFailed("sig", "adapted signature does not verify")
        return P.f_ext(self.pp, self.advt, self.pre, sig, self.X, self.y, self.aux, self.ct1y)


def run_local(pp: P.PublicParams, x, y, m: bytes = b"payment", seed=None) -> SessionTranscript:
    """Both parties in one process, passing envelopes directly."""
    rng = make_rng(seed)
    tr = SessionTranscript(pp.mode.value, pp.ell, pp.bound)
    clk = _Clock(tr)
    seller = clk.run("ad_gen", lambda: Seller(pp, x, rng))
    buyer = Buyer(y, m, rng, allow_insecure_nizk=True)
    params_env, advt_env = seller.hello()
    tr.add("params", params_env)
    tr.add("advt", advt_env)
    req = clk.run("ad_verify+request", lambda: buyer.on_hello(params_env, advt_env))
    tr.add("request", req)
    aux = clk.run("aux_gen", lambda: seller.on_request(req))
    tr.add("aux", aux)
    pre = clk.run("aux_verify+f_pre_sign", lambda: buyer.on_aux(aux))
    tr.add("presig", pre)
    sig = clk.run("f_pre_verify+adapt", lambda: seller.on_presig(pre))
    tr.add("sig", sig)
    tr.value = clk.run("f_ext", lambda: buyer.on_sig(sig))
    return tr


# -- loopback tcp ---------------------------------------------------------------

def _send(sock, data: bytes):
    sock.sendall(struct.pack(">I", len(data)) + data)


def _recv_exact(sock, n: int) -> bytes:
    buf = bytearray()
    while len(buf) < n:
        chunk = sock.recv(n - len(buf))
        if not chunk:
            raise EnvelopeError("connection closed mid-message")
        buf += chunk
    return bytes(buf)


def _recv(sock) -> bytes:
    (n,) = struct.unpack(">I", _recv_exact(sock, 4))
    return _recv_exact(sock, n)


def run_tcp(pp: P.PublicParams, x, y, m: bytes = b"payment", seed=None, timeout: float = 60.0) -> SessionTranscript:
    """Seller in a thread behind a 127.0.0.1 socket; the buyer talks to it over TCP."""
    rng = make_rng(seed)
    tr = SessionTranscript(pp.mode.value, pp.ell, pp.bound)
    clk = _Clock(tr)
    seller = clk.run("ad_gen", lambda: Seller(pp, x, rng))
    srv = socket.create_server(("127.0.0.1", 0))
    srv.settimeout(timeout)
    errors = []

    def serve():
        try:
            conn, _ = srv.accept()
            with conn:
                conn.settimeout(timeout)
                for env in seller.hello():
                    _send(conn, env)
                _send(conn, seller.on_request(_recv(conn)))
                _send(conn, seller.on_presig(_recv(conn)))
        except Exception as exc:  # surfaced to the caller after join
            errors.append(exc)

    th = threading.Thread(target=serve, daemon=True)
    th.start()
    buyer = Buyer(y, m, rng, allow_insecure_nizk=True)
    try:
        with socket.create_connection(srv.getsockname(), timeout=timeout) as sock:
            params_env, advt_env = _recv(sock), _recv(sock)
            tr.add("params", params_env)
            tr.add("advt", advt_env)
            req = clk.run("ad_verify+request", lambda: buyer.on_hello(params_env, advt_env))
            tr.add("request", req)
            _send(sock, req)
            aux = _recv(sock)
            tr.add("aux", aux)
            pre = clk.run("aux_verify+f_pre_sign", lambda: buyer.on_aux(aux))
            tr.add("presig", pre)
            _send(sock, pre)
            sig = _recv(sock)
            tr.add("sig", sig)
            tr.value = clk.run("f_ext", lambda: buyer.on_sig(sig))
    finally:
        th.join(timeout)
        srv.close()
    if errors:
        raise errors[0]
    return tr


def replay(tr: SessionTranscript) -> int:
    """Re-verify every envelope in order and re-extract the value."""
    steps = [s for s, _ in tr.envelopes]
    if steps != list(STEPS):
        raise EnvelopeError(f"transcript steps {steps} are not {list(STEPS)}")
    pp = wire.decode_params(tr.get("params"))
    if pp.mode.value != tr.mode or pp.ell != tr.ell or pp.bound != tr.bound:
        raise EnvelopeError("transcript header does not match its params envelope")
    X, advt = wire.decode_advt(tr.get("advt"), pp.mode)
    if not P.ad_verify(pp, X, advt):
        raise CheckFailed("advt")
    y, vk, m = wire.decode_request(tr.get("request"), pp.mode)
    aux = wire.decode_aux(tr.get("aux"), pp.mode)
    if not P.aux_verify(pp, advt, y, aux):
        raise CheckFailed("aux")
    pre = wire.decode_presig(tr.get("presig"), pp.mode)
    if not P.f_pre_verify(pp, advt, vk, m, X, y, aux, pre):
        raise CheckFailed("presig")
    sig = wire.decode_sig(tr.get("sig"), pp.mode)
    if not adaptor.verify(vk, m, sig):
        raise CheckFailed("sig")
    return P.f_ext(pp, advt, pre, sig, X, y, aux)
