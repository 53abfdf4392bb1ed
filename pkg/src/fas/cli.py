"""``fas`` command line: file-based seller/buyer flow, demo, replay and bench.

Typical strong-mode run::

    fas setup --ell 3 --bound 1000 --out pp.bin --attester-out attester.key
    fas advertise --params pp.bin --attester attester.key --x 1,2,3 \\
        --out advt.bin --state seller.state --allow-insecure-nizk
    fas keygen --out buyer.key
    fas request --params pp.bin --advt advt.bin --key buyer.key --y 4,5,6 \\
        --message "pay 1 coin" --out req.bin --allow-insecure-nizk
    fas aux --params pp.bin --advt advt.bin --state seller.state --request req.bin --out aux.bin
    fas presign --params pp.bin --advt advt.bin --key buyer.key --request req.bin --aux aux.bin --out pre.bin
    fas adapt --params pp.bin --advt advt.bin --state seller.state --request req.bin \\
        --aux aux.bin --presig pre.bin --out sig.bin
    fas extract --params pp.bin --advt advt.bin --request req.bin --aux aux.bin \\
        --presig pre.bin --sig sig.bin

The seller passphrase comes from ``--passphrase`` or ``FAS_PASSPHRASE``.
"""
from __future__ import annotations

import enum
import functools
import os
import sys
from pathlib import Path

import click

from . import adaptor, bench, group, nizk, sealed, session, wire
from . import protocol as P
from .errors import (
    AuxInvalid,
    BoundExceeded,
    DlogOutOfRange,
    EnvelopeError,
    ExtractFailed,
    FasError,
    LengthMismatch,
    ParamError,
    PreSigInvalid,
    RelationUnsatisfied,
)


class Exit(enum.IntEnum):
    OK = 0
    ERROR = 1
    USAGE = 2
    AD_VERIFY = 3
    AUX_VERIFY = 4
    PRE_VERIFY = 5
    EXTRACT_FAILED = 6
    DLOG_OUT_OF_RANGE = 7
    BOUND_EXCEEDED = 8
    INSECURE_NIZK = 9
    STATE = 10
    ENVELOPE = 11
    SIG_VERIFY = 12


_STEP_EXIT = {"advt": Exit.AD_VERIFY, "aux": Exit.AUX_VERIFY, "presig": Exit.PRE_VERIFY, "sig": Exit.SIG_VERIFY}


class Fail(Exception):
    def __init__(self, code: Exit, msg: str):
        super().__init__(msg)
        self.code = code


def _fail_on_errors(fn):
    @functools.wraps(fn)
    def wrapper(*a, **kw):
        try:
            return fn(*a, **kw)
        except Fail as exc:
            code, msg = exc.code, str(exc)
        except session.CheckFailed as exc:
            code, msg = _STEP_EXIT[exc.step], str(exc)
        except ExtractFailed as exc:
            code, msg = Exit.EXTRACT_FAILED, f"extraction failed: {exc}"
        except DlogOutOfRange as exc:
            code, msg = Exit.DLOG_OUT_OF_RANGE, f"decryption out of range: {exc}"
        except BoundExceeded as exc:
            code, msg = Exit.BOUND_EXCEEDED, str(exc)
        except sealed.SealError as exc:
            code, msg = Exit.STATE, str(exc)
        except EnvelopeError as exc:
            code, msg = Exit.ENVELOPE, f"bad envelope: {exc}"
        except (ParamError, LengthMismatch, RelationUnsatisfied) as exc:
            code, msg = Exit.ERROR, str(exc)
        except FasError as exc:
            code, msg = Exit.ERROR, f"{type(exc).__name__}: {exc}"
        except OSError as exc:
            code, msg = Exit.ERROR, str(exc)
        click.echo(f"error: {msg}", err=True)
        sys.exit(int(code))
    return wrapper


def _vector(text: str) -> list[int]:
    try:
        return [int(v, 0) for v in text.replace(" ", "").split(",") if v]
    except ValueError:
        raise click.BadParameter(f"not a comma-separated integer list: {text!r}") from None


def _read(path) -> bytes:
    return Path(path).read_bytes()


def _write(path, data: bytes, secret: bool = False):
    p = Path(path)
    if secret:
        fd = os.open(p, os.O_WRONLY | os.O_CREAT | os.O_TRUNC, 0o600)
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
    else:
        p.write_bytes(data)


def _rng(seed):
    if seed is not None:
        click.echo("warning: seeded randomness is for tests and demos only", err=True)
    return group.make_rng(seed)


def _load_params(path) -> P.PublicParams:
    return wire.decode_params(_read(path))


def _load_advt(pp, path, allow_insecure: bool, check: bool = True):
    X, advt = wire.decode_advt(_read(path), pp.mode)
    if check:
        if pp.crs.insecure and not allow_insecure:
            raise Fail(Exit.INSECURE_NIZK, "advertisement relies on the INSECURE-DEV proof backend; "
                                           "pass --allow-insecure-nizk to accept it")
        if not P.ad_verify(pp, X, advt):
            raise Fail(Exit.AD_VERIFY, "advertisement proof does not verify")
    return X, advt


def _load_state(pp, path, passphrase):
    blob = sealed.unseal(_read(path), passphrase)
    return wire.decode_state(blob, pp.mode)


def _load_aux(pp, path):
    if path is None:
        if pp.mode is P.Mode.STRONG:
            raise click.UsageError("strong mode needs --aux")
        return P.WEAK_AUX
    return wire.decode_aux(_read(path), pp.mode)


def _load_key(path) -> adaptor.SigningKey:
    try:
        return adaptor.SigningKey.from_bytes(bytes.fromhex(Path(path).read_text().strip()))
    except ValueError as exc:
        raise Fail(Exit.ERROR, f"unreadable key file: {exc}") from None


params_opt = click.option("--params", "params_path", required=True, type=click.Path(exists=True))
advt_opt = click.option("--advt", "advt_path", required=True, type=click.Path(exists=True))
request_opt = click.option("--request", "request_path", required=True, type=click.Path(exists=True))
state_opt = click.option("--state", "state_path", required=True, type=click.Path())
passphrase_opt = click.option("--passphrase", envvar="FAS_PASSPHRASE", prompt=True, hide_input=True,
                              help="Seals the seller state; also read from FAS_PASSPHRASE.")
insecure_opt = click.option("--allow-insecure-nizk", is_flag=True,
                            help="Accept advertisements proven with the INSECURE-DEV backend.")
seed_opt = click.option("--seed", type=int, default=None, help="Deterministic randomness (demo only).")
out_opt = click.option("--out", required=True, type=click.Path())
mode_opt = click.option("--mode", type=click.Choice(["strong", "weak"]), default="strong", show_default=True)


@click.group()
@click.version_option(package_name="artifact")
@click.option("--kernel", type=click.Choice(["auto", "compiled", "pure"]), default="auto",
              help="Group arithmetic backend.")
def main(kernel):
    """Functional adaptor signatures: sell inner products <x, y> against Schnorr payments."""
    if kernel != "auto":
        try:
            group.set_backend(kernel)
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None


@main.command()
@mode_opt
@click.option("--ell", type=int, required=True, help="Length of the seller's vector.")
@click.option("--bound", type=int, required=True, help="Largest inner product that can be sold.")
@click.option("--nizk", "backend", type=click.Choice(sorted(nizk.BACKENDS)), default="dev", show_default=True)
@click.option("--relation", type=click.Choice(sorted(nizk.RELATIONS)), default=None,
              help="Statement relation [default: merkle, or pedersen for --nizk sigma].")
@click.option("--attester-out", type=click.Path(), default=None, help="Where to store the dev attester key.")
@seed_opt
@out_opt
@_fail_on_errors
def setup(mode, ell, bound, backend, relation, attester_out, seed, out):
    """Create public parameters."""
    relation = relation or ("pedersen" if backend == "sigma" else "merkle")
    pp = P.setup(ell=ell, bound=bound, mode=P.Mode(mode), rng=_rng(seed), backend=backend, relation=relation)
    _write(out, wire.encode_params(pp))
    if pp.crs.secret is not None:
        if attester_out is None:
            click.echo("warning: dev attester key discarded; nobody can advertise under these params", err=True)
        else:
            _write(attester_out, pp.crs.secret.to_bytes().hex().encode() + b"\n", secret=True)
    click.echo(f"wrote {out} (mode={mode}, ell={ell}, B={bound}, nizk={backend})")


@main.command()
@params_opt
@click.option("--attester", type=click.Path(exists=True), default=None, help="Dev attester key file.")
@click.option("--x", "x_text", required=True, help="Seller vector, comma separated.")
@out_opt
@state_opt
@passphrase_opt
@insecure_opt
@seed_opt
@_fail_on_errors
def advertise(params_path, attester, x_text, out, state_path, passphrase, allow_insecure_nizk, seed):
    """Seller: encrypt x, prove it, write the advertisement and sealed state."""
    pp = _load_params(params_path)
    if pp.crs.insecure:
        if not allow_insecure_nizk:
            raise Fail(Exit.INSECURE_NIZK, "refusing to publish an INSECURE-DEV advertisement "
                                           "without --allow-insecure-nizk")
        if attester is None:
            raise click.UsageError("the dev backend needs --attester")
        pp = P.PublicParams(pp.crs.with_secret(bytes.fromhex(Path(attester).read_text().strip())),
                            pp.ipfe_params, pp.mode, pp.relation_name)
    x = _vector(x_text)
    X = pp.relation.statement(x) if len(x) == pp.ell else b""
    advt, st = P.ad_gen(pp, X, x, _rng(seed))
    _write(out, wire.encode_advt(pp.mode, X, advt))
    _write(state_path, sealed.seal(wire.encode_state(pp.mode, st, x), passphrase), secret=True)
    click.echo(f"wrote {out} and sealed state {state_path}")


@main.command()
@out_opt
@seed_opt
@_fail_on_errors
def keygen(out, seed):
    """Buyer: create a Schnorr signing key (hex file) and print the verifying key."""
    sk, vk = adaptor.keygen(_rng(seed))
    _write(out, sk.to_bytes().hex().encode() + b"\n", secret=True)
    click.echo(vk.to_bytes().hex())


@main.command()
@params_opt
@advt_opt
@click.option("--key", "key_path", required=True, type=click.Path(exists=True))
@click.option("--y", "y_text", required=True, help="Function vector, comma separated.")
@click.option("--message", required=True, help="Payment message the buyer will sign.")
@out_opt
@insecure_opt
@_fail_on_errors
def request(params_path, advt_path, key_path, y_text, message, out, allow_insecure_nizk):
    """Buyer: check the advertisement and ask for f_y(x)."""
    pp = _load_params(params_path)
    _load_advt(pp, advt_path, allow_insecure_nizk)
    y = _vector(y_text)
    if len(y) != pp.ell:
        raise LengthMismatch(f"y has length {len(y)}, expected {pp.ell}")
    vk = _load_key(key_path).verifying_key()
    _write(out, wire.encode_request(pp.mode, y, vk, message.encode()))
    click.echo(f"wrote {out}")


@main.command()
@params_opt
@advt_opt
@state_opt
@request_opt
@out_opt
@passphrase_opt
@_fail_on_errors
def aux(params_path, advt_path, state_path, request_path, out, passphrase):
    """Seller: answer a request with (aux_y, pi_y). Weak mode writes an empty AUX envelope."""
    pp = _load_params(params_path)
    _, advt = _load_advt(pp, advt_path, True, check=False)
    st, _ = _load_state(pp, state_path, passphrase)
    y, _, _ = wire.decode_request(_read(request_path), pp.mode)
    _write(out, wire.encode_aux(pp.mode, P.aux_gen(pp, advt, st, y)))
    click.echo(f"wrote {out}")


@main.command()
@params_opt
@advt_opt
@click.option("--key", "key_path", required=True, type=click.Path(exists=True))
@request_opt
@click.option("--aux", "aux_path", type=click.Path(exists=True), default=None, help="Not needed in weak mode.")
@out_opt
@insecure_opt
@seed_opt
@_fail_on_errors
def presign(params_path, advt_path, key_path, request_path, aux_path, out, allow_insecure_nizk, seed):
    """Buyer: check aux and pre-sign the payment."""
    pp = _load_params(params_path)
    X, advt = _load_advt(pp, advt_path, allow_insecure_nizk)
    y, vk, m = wire.decode_request(_read(request_path), pp.mode)
    sk = _load_key(key_path)
    if sk.verifying_key() != vk:
        raise Fail(Exit.ERROR, "key does not match the request")
    aux_info = _load_aux(pp, aux_path)
    if not P.aux_verify(pp, advt, y, aux_info):
        raise Fail(Exit.AUX_VERIFY, "aux does not match the advertisement")
    pre = P.f_pre_sign(pp, advt, sk, m, X, y, aux_info, _rng(seed), check_aux=False)
    _write(out, wire.encode_presig(pp.mode, pre))
    click.echo(f"wrote {out}")


@main.command()
@params_opt
@advt_opt
@state_opt
@request_opt
@click.option("--aux", "aux_path", type=click.Path(exists=True), default=None)
@click.option("--presig", "presig_path", required=True, type=click.Path(exists=True))
@out_opt
@passphrase_opt
@_fail_on_errors
def adapt(params_path, advt_path, state_path, request_path, aux_path, presig_path, out, passphrase):
    """Seller: complete the pre-signature, releasing the functional key."""
    pp = _load_params(params_path)
    X, advt = _load_advt(pp, advt_path, True, check=False)
    st, x = _load_state(pp, state_path, passphrase)
    y, vk, m = wire.decode_request(_read(request_path), pp.mode)
    aux_info = _load_aux(pp, aux_path)
    pre = wire.decode_presig(_read(presig_path), pp.mode)
    if not P.f_pre_verify(pp, advt, vk, m, X, y, aux_info, pre):
        raise Fail(Exit.PRE_VERIFY, "pre-signature does not verify")
    try:
        sig = P.adapt(pp, advt, st, vk, m, X, x, y, aux_info, pre)
    except PreSigInvalid as exc:
        raise Fail(Exit.PRE_VERIFY, str(exc)) from None
    _write(out, wire.encode_sig(pp.mode, sig))
    click.echo(f"wrote {out}")


@main.command()
@params_opt
@advt_opt
@request_opt
@click.option("--aux", "aux_path", type=click.Path(exists=True), default=None)
@click.option("--presig", "presig_path", required=True, type=click.Path(exists=True))
@click.option("--sig", "sig_path", required=True, type=click.Path(exists=True))
@_fail_on_errors
def extract(params_path, advt_path, request_path, aux_path, presig_path, sig_path):
    """Buyer: recover f_y(x) from the published signature and print it."""
    pp = _load_params(params_path)
    X, advt = _load_advt(pp, advt_path, True, check=False)
    y, vk, m = wire.decode_request(_read(request_path), pp.mode)
    aux_info = _load_aux(pp, aux_path)
    pre = wire.decode_presig(_read(presig_path), pp.mode)
    sig = wire.decode_sig(_read(sig_path), pp.mode)
    if not adaptor.verify(vk, m, sig):
        raise Fail(Exit.SIG_VERIFY, "signature does not verify")
    try:
        click.echo(P.f_ext(pp, advt, pre, sig, X, y, aux_info))
    except AuxInvalid as exc:
        raise Fail(Exit.AUX_VERIFY, str(exc)) from None


@main.command()
@mode_opt
@click.option("--ell", type=int, default=3, show_default=True)
@click.option("--bound", type=int, default=1000, show_default=True)
@click.option("--x", "x_text", default=None, help="Seller vector [default: 1..ell].")
@click.option("--y", "y_text", default=None, help="Function vector [default: ell+1..2*ell].")
@click.option("--nizk", "backend", type=click.Choice(sorted(nizk.BACKENDS)), default="dev", show_default=True)
@click.option("--tcp", is_flag=True, help="Run the seller behind a loopback socket.")
@click.option("--transcript", type=click.Path(), default=None, help="Save a replayable JSON transcript.")
@insecure_opt
@seed_opt
@_fail_on_errors
def demo(mode, ell, bound, x_text, y_text, backend, tcp, transcript, allow_insecure_nizk, seed):
    """Run one complete sale in this process and print f_y(x)."""
    if backend == "dev" and not allow_insecure_nizk:
        raise Fail(Exit.INSECURE_NIZK, "the demo uses the INSECURE-DEV proof backend; "
                                       "pass --allow-insecure-nizk or --nizk sigma")
    x = _vector(x_text) if x_text else list(range(1, ell + 1))
    y = _vector(y_text) if y_text else list(range(ell + 1, 2 * ell + 1))
    relation = "pedersen" if backend == "sigma" else "merkle"
    pp = P.setup(ell=ell, bound=bound, mode=P.Mode(mode), rng=_rng(seed), backend=backend, relation=relation)
    run = session.run_tcp if tcp else session.run_local
    tr = run(pp, x, y, seed=None if seed is None else seed + 1)
    if transcript:
        Path(transcript).write_text(tr.to_json())
    for step, ms in tr.timings_ms.items():
        click.echo(f"  {step:<24} {ms:9.2f} ms", err=True)
    click.echo(tr.value)


@main.command()
@click.argument("transcript", type=click.Path(exists=True))
@_fail_on_errors
def replay(transcript):
    """Re-verify a saved transcript and print the extracted value."""
    tr = session.SessionTranscript.from_json(Path(transcript).read_text())
    value = session.replay(tr)
    if tr.value is not None and value != tr.value:
        raise Fail(Exit.EXTRACT_FAILED, f"replay extracted {value}, transcript recorded {tr.value}")
    click.echo(value)


def _grid(text: str):
    cells = []
    for cell in text.split(","):
        try:
            ell, b = cell.split(":")
            cells.append((int(float(ell)), int(float(b))))
        except ValueError:
            raise click.BadParameter(f"grid cells look like ELL:B, got {cell!r}") from None
    return cells


@main.command(name="bench")
@mode_opt
@click.option("--grid", default="1:1e6,1e2:1e6,1e2:1e8,1e4:1e8", show_default=True,
              help="Comma-separated ELL:B cells.")
@click.option("--reps", type=int, default=3, show_default=True)
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="Write CSV here instead of stdout.")
@seed_opt
@_fail_on_errors
def bench_cmd(mode, grid, reps, csv_path, seed):
    """Median per-operation timings (seconds) over a grid of (ell, B)."""
    cells = _grid(grid)
    click.echo(f"kernel: {group.backend_name()}", err=True)
    rows = bench.run_grid(cells, reps, P.Mode(mode), seed,
                          progress=lambda r: click.echo(f"  done ell={r.ell} B={r.B}", err=True))
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            bench.write_csv(rows, fh)
    else:
        bench.write_csv(rows, sys.stdout)


if __name__ == "__main__":
    main()
