import json

import pytest
from click.testing import CliRunner

from fas import sealed
from fas.cli import Exit, main


@pytest.fixture(autouse=True)
def fast_kdf(monkeypatch):
    monkeypatch.setattr(sealed, "SCRYPT_N", 2**10)
    monkeypatch.setattr(sealed.seal, "__defaults__", (2**10,))


@pytest.fixture
def cli(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    runner = CliRunner(env={"FAS_PASSPHRASE": "pw"})

    def invoke(*args, code=0):
        res = runner.invoke(main, list(args))
        assert res.exit_code == code, res.output + str(res.exception)
        return res
    return invoke


def seller_setup(cli, mode="strong", x="1,2,3"):
    cli("setup", "--mode", mode, "--ell", "3", "--bound", "1000", "--out", "pp.bin", "--attester-out", "att.key")
    cli("advertise", "--params", "pp.bin", "--attester", "att.key", "--x", x, "--out", "advt.bin",
        "--state", "s.st", "--allow-insecure-nizk")
    cli("keygen", "--out", "b.key")
    cli("request", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--y", "4,5,6",
        "--message", "pay", "--out", "req.bin", "--allow-insecure-nizk")


def test_strong_flow(cli):
    seller_setup(cli)
    cli("aux", "--params", "pp.bin", "--advt", "advt.bin", "--state", "s.st", "--request", "req.bin",
        "--out", "aux.bin")
    cli("presign", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--request", "req.bin",
        "--aux", "aux.bin", "--out", "pre.bin", "--allow-insecure-nizk")
    cli("adapt", "--params", "pp.bin", "--advt", "advt.bin", "--state", "s.st", "--request", "req.bin",
        "--aux", "aux.bin", "--presig", "pre.bin", "--out", "sig.bin")
    res = cli("extract", "--params", "pp.bin", "--advt", "advt.bin", "--request", "req.bin",
              "--aux", "aux.bin", "--presig", "pre.bin", "--sig", "sig.bin")
    assert res.output.strip() == "32"


def test_weak_flow_skips_aux(cli):
    seller_setup(cli, "weak")
    cli("presign", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--request", "req.bin",
        "--out", "pre.bin", "--allow-insecure-nizk")
    cli("adapt", "--params", "pp.bin", "--advt", "advt.bin", "--state", "s.st", "--request", "req.bin",
        "--presig", "pre.bin", "--out", "sig.bin")
    res = cli("extract", "--params", "pp.bin", "--advt", "advt.bin", "--request", "req.bin",
              "--presig", "pre.bin", "--sig", "sig.bin")
    assert res.output.strip() == "32"


def test_tampered_aux_aborts(cli, tmp_path):
    seller_setup(cli)
    cli("aux", "--params", "pp.bin", "--advt", "advt.bin", "--state", "s.st", "--request", "req.bin",
        "--out", "aux.bin")
    data = bytearray((tmp_path / "aux.bin").read_bytes())
    data[-1] ^= 1
    (tmp_path / "aux.bin").write_bytes(bytes(data))
    cli("presign", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--request", "req.bin",
        "--aux", "aux.bin", "--out", "pre.bin", "--allow-insecure-nizk", code=Exit.AUX_VERIFY)


def test_insecure_backend_refused(cli):
    cli("setup", "--ell", "3", "--bound", "1000", "--out", "pp.bin", "--attester-out", "att.key")
    cli("advertise", "--params", "pp.bin", "--attester", "att.key", "--x", "1,2,3", "--out", "advt.bin",
        "--state", "s.st", code=Exit.INSECURE_NIZK)
    cli("demo", code=Exit.INSECURE_NIZK)


def test_corrupt_state_and_wrong_passphrase(cli, tmp_path):
    seller_setup(cli)
    blob = bytearray((tmp_path / "s.st").read_bytes())
    blob[-3] ^= 0x40
    (tmp_path / "bad.st").write_bytes(bytes(blob))
    cli("aux", "--params", "pp.bin", "--advt", "advt.bin", "--state", "bad.st", "--request", "req.bin",
        "--out", "aux.bin", code=Exit.STATE)
    cli("aux", "--params", "pp.bin", "--advt", "advt.bin", "--state", "s.st", "--request", "req.bin",
        "--out", "aux.bin", "--passphrase", "other", code=Exit.STATE)


def test_tampered_advertisement(cli, tmp_path):
    seller_setup(cli)
    data = bytearray((tmp_path / "advt.bin").read_bytes())
    data[60] ^= 1
    (tmp_path / "advt.bin").write_bytes(bytes(data))
    res = CliRunner().invoke(main, ["request", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key",
                                    "--y", "4,5,6", "--message", "pay", "--out", "r2.bin",
                                    "--allow-insecure-nizk"])
    assert res.exit_code in (Exit.AD_VERIFY, Exit.ENVELOPE)


def test_bound_exceeded_and_extract_failures(cli):
    seller_setup(cli, "weak")
    cli("request", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--y", "0,0,400",
        "--message", "pay", "--out", "big.bin", "--allow-insecure-nizk")
    cli("presign", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--request", "big.bin",
        "--out", "pre.bin", "--allow-insecure-nizk")
    cli("adapt", "--params", "pp.bin", "--advt", "advt.bin", "--state", "s.st", "--request", "big.bin",
        "--presig", "pre.bin", "--out", "sig.bin", code=Exit.BOUND_EXCEEDED)
    # a different pre-signature than the one that was adapted
    cli("presign", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--request", "req.bin",
        "--out", "pre1.bin", "--allow-insecure-nizk")
    cli("presign", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--request", "req.bin",
        "--out", "pre2.bin", "--allow-insecure-nizk")
    cli("adapt", "--params", "pp.bin", "--advt", "advt.bin", "--state", "s.st", "--request", "req.bin",
        "--presig", "pre1.bin", "--out", "sig.bin")
    cli("extract", "--params", "pp.bin", "--advt", "advt.bin", "--request", "req.bin",
        "--presig", "pre2.bin", "--sig", "sig.bin", code=Exit.EXTRACT_FAILED)


def test_pre_verify_failure(cli):
    seller_setup(cli, "weak")
    cli("request", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--y", "1,1,1",
        "--message", "pay", "--out", "req2.bin", "--allow-insecure-nizk")
    cli("presign", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--request", "req2.bin",
        "--out", "pre.bin", "--allow-insecure-nizk")
    cli("adapt", "--params", "pp.bin", "--advt", "advt.bin", "--state", "s.st", "--request", "req.bin",
        "--presig", "pre.bin", "--out", "sig.bin", code=Exit.PRE_VERIFY)


def test_dlog_out_of_range_exit(cli, tmp_path):
    # a seller that advertises an x the bound cannot cover: the buyer pays but cannot decrypt
    from fas import protocol as P
    from fas import wire
    seller_setup(cli, "weak")
    cli("request", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--y", "0,0,400",
        "--message", "pay", "--out", "big.bin", "--allow-insecure-nizk")
    cli("presign", "--params", "pp.bin", "--advt", "advt.bin", "--key", "b.key", "--request", "big.bin",
        "--out", "pre.bin", "--allow-insecure-nizk")
    pp = wire.decode_params((tmp_path / "pp.bin").read_bytes())
    X, advt = wire.decode_advt((tmp_path / "advt.bin").read_bytes())
    st, x = wire.decode_state(sealed.unseal((tmp_path / "s.st").read_bytes(), "pw"))
    y, vk, m = wire.decode_request((tmp_path / "big.bin").read_bytes())
    pre = wire.decode_presig((tmp_path / "pre.bin").read_bytes())
    sig = P.adapt(pp, advt, st, vk, m, X, None, y, P.WEAK_AUX, pre)
    (tmp_path / "sig.bin").write_bytes(wire.encode_sig(pp.mode, sig))
    cli("extract", "--params", "pp.bin", "--advt", "advt.bin", "--request", "big.bin",
        "--presig", "pre.bin", "--sig", "sig.bin", code=Exit.DLOG_OUT_OF_RANGE)


def test_demo_and_replay(cli, tmp_path):
    res = cli("demo", "--allow-insecure-nizk", "--seed", "1", "--transcript", "t.json")
    assert res.output.strip().splitlines()[-1] == "32"
    assert cli("replay", "t.json").output.strip() == "32"
    d = json.loads((tmp_path / "t.json").read_text())
    d["value"] = 33
    (tmp_path / "t2.json").write_text(json.dumps(d))
    cli("replay", "t2.json", code=Exit.EXTRACT_FAILED)


def test_demo_variants(cli):
    assert cli("demo", "--mode", "weak", "--tcp", "--allow-insecure-nizk").output.strip().endswith("32")
    assert cli("demo", "--nizk", "sigma", "--ell", "2", "--x", "5,6", "--y", "7,8").output.strip().endswith("83")


def test_bench_csv(cli, tmp_path):
    from fas import group
    prev = group.backend_name()
    try:
        cli("--kernel", "pure", "bench", "--grid", "1:100,2:1e3", "--reps", "1", "--csv", "b.csv")
    finally:
        group.set_backend(prev)
    lines = (tmp_path / "b.csv").read_text().splitlines()
    assert lines[0] == "ell,B,auxgen_s,auxverify_s,fpresign_s,fpreverify_s,adapt_s,fext_s"
    assert len(lines) == 3
    cli("bench", "--grid", "nonsense", code=2)
