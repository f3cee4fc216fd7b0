import subprocess
import sys

import pytest

from dtms import fileformat as ff
from dtms.cli import demo_rows, main


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def world(tmp_path):
    """A 16-bit group, five members and a receiver, all on disk."""
    d = tmp_path
    assert run("gen-params", "--q-bits", 16, "--p-bits", 40, "--seed", 7, "--out", d / "params.rec") == 0
    lines = []
    for uid in range(1, 6):
        assert run("keygen", "--params", d / "params.rec", "--uid", uid, "--seed", uid, "--out", d / f"m{uid}.rec") == 0
        kp, _ = ff.keypair_from_record(ff.read_record(d / f"m{uid}.rec"))
        lines.append(f"{uid:x},{kp.y:x}")
    (d / "members.txt").write_text("# uid,y\n" + "\n".join(lines) + "\n")
    assert run("keygen", "--params", d / "params.rec", "--seed", 99, "--out", d / "r.rec") == 0
    assert run("dealer-setup", "--params", d / "params.rec", "--t", 3, "--members", d / "members.txt",
               "--seed", 1, "--out", d / "board.rec") == 0
    return d


def _sign(d, uids, seed=5, message="pay 10"):
    secrets = [d / f"m{u}.rec" for u in uids]
    return run("sign", "--board", d / "board.rec", "--member-secret", *secrets, "--receiver-pub", d / "r.rec",
               "--message", message, "--seed", seed, "--out-dir", d / "parts")


def test_full_pipeline(world, capsys):
    d = world
    assert _sign(d, (1, 3, 4)) == 0
    parts = sorted((d / "parts").glob("partial-*.rec"))
    assert len(parts) == 3
    assert run("combine", "--board", d / "board.rec", "--partials", *parts, "--out", d / "sig.rec") == 0
    assert run("verify", "--sig", d / "sig.rec", "--board", d / "board.rec", "--receiver-secret", d / "r.rec") == 0
    assert run("verify", "--sig", d / "sig.rec", "--board", d / "board.rec", "--receiver-secret", d / "m1.rec") == 1
    assert run("confirm", "--sig", d / "sig.rec", "--board", d / "board.rec", "--receiver-secret", d / "r.rec",
               "--seed", 3, "--out-package", d / "pkg.rec", "--out-transcript", d / "zk.rec") == 0
    tr = ff.transcript_from_record(ff.read_record(d / "zk.rec", "transcript"))
    assert tr.accepted
    assert "ACCEPT" in capsys.readouterr().out


def test_tampered_partial_rejected(world, capsys):
    d = world
    _sign(d, (1, 2, 5))
    path = d / "parts" / "partial-2.rec"
    rec = ff.read_record(path)
    rec.fields["s"] = format((int(rec.fields["s"], 16) + 1), "x")
    ff.write_record(path, rec)
    parts = sorted((d / "parts").glob("partial-*.rec"))
    assert run("combine", "--board", d / "board.rec", "--partials", *parts, "--out", d / "sig.rec") == 1
    assert "uid 2" in capsys.readouterr().out
    assert not (d / "sig.rec").exists()


def test_tampered_signature_rejected(world):
    d = world
    _sign(d, (2, 3, 4))
    run("combine", "--board", d / "board.rec", "--partials", *sorted((d / "parts").glob("*.rec")), "--out", d / "sig.rec")
    rec = ff.read_record(d / "sig.rec")
    rec.fields["msg"] = b"pay 99".hex()
    ff.write_record(d / "sig.rec", rec)
    assert run("verify", "--sig", d / "sig.rec", "--board", d / "board.rec", "--receiver-secret", d / "r.rec") == 1


def test_mixed_sessions_rejected(world):
    d = world
    _sign(d, (1, 2, 3), seed=1)
    (d / "parts" / "partial-3.rec").rename(d / "keep.rec")
    _sign(d, (3, 4, 5), seed=2, message="other")
    parts = [d / "parts" / "partial-1.rec", d / "parts" / "partial-2.rec", d / "parts" / "partial-3.rec"]
    assert run("combine", "--board", d / "board.rec", "--partials", *parts, "--out", d / "sig.rec") == 1


def test_fixture_commands(tmp_path, capsys):
    d = tmp_path
    assert run("dealer-setup", "--fixture", "paper5", "--out", d / "board.rec") == 0
    assert run("sign", "--fixture", "paper5", "--out-dir", d) == 0
    parts = sorted(d.glob("partial-*.rec"))
    assert len(parts) == 5
    assert run("combine", "--board", d / "board.rec", "--partials", *parts, "--out", d / "sig.rec") == 0
    sig = ff.signature_from_record(ff.read_record(d / "sig.rec"))
    assert (sig.s_s, sig.u_s, sig.w_s) == (2, 8, 14)
    (d / "r.rec").write_text("%DTMS v1 keypair\nx = 9\ny = 2\n")
    assert run("verify", "--sig", d / "sig.rec", "--board", d / "board.rec", "--receiver-secret", d / "r.rec") == 0
    assert run("confirm", "--sig", d / "sig.rec", "--board", d / "board.rec", "--receiver-secret", d / "r.rec",
               "--fixture", "paper5", "--out-transcript", d / "zk.rec") == 0
    tr = ff.transcript_from_record(ff.read_record(d / "zk.rec"))
    assert (tr.w, tr.beta, tr.gamma) == (25, 36, 9)


def test_demo_worked_example(capsys):
    assert run("demo-paper") == 0
    out = capsys.readouterr().out
    assert out.rstrip().endswith("verdict ACCEPT")
    assert "MISMATCH" not in out
    assert all(expected == computed for _, expected, computed in demo_rows())


@pytest.mark.parametrize("scenario, code", [
    ("honest", 0), ("impersonate", 1), ("tamper_partial", 1),
    ("forge_signature", 1), ("collude_reconstruct", 1), ("wrong_receiver", 1),
])
def test_simulate_exit_codes(scenario, code, tmp_path, capsys):
    out = tmp_path / "t.txt"
    assert run("simulate", "--scenario", scenario, "--seed", 3, "--out", out) == code
    assert out.read_text() == capsys.readouterr().out


def test_simulate_fixture(capsys):
    assert run("simulate", "--fixture", "paper5") == 0
    assert "outcome | accept" in capsys.readouterr().out


def test_gen_params_fixed_and_invalid(tmp_path, capsys):
    assert run("gen-params", "--fixed", "47,23,25", "--fixture-hash", "challenge=9", "--out", tmp_path / "p.rec") == 0
    assert ff.read_record(tmp_path / "p.rec").fields["hash"] == "fixture/challenge:9"
    assert run("gen-params", "--fixed", "47,23,5", "--out", tmp_path / "bad.rec") == 1
    assert "g^q" in capsys.readouterr().out
    assert run("gen-params", "--fixed", "47,23", "--out", tmp_path / "bad.rec") == 2


@pytest.mark.parametrize("argv", [
    ["verify", "--sig", "missing.rec", "--board", "missing.rec", "--receiver-secret", "x"],
    ["dealer-setup", "--out", "b.rec"],
    ["sign", "--out-dir", "."],
    ["keygen", "--params", "nope.rec", "--out", "k.rec"],
])
def test_usage_errors_exit_two(argv, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 2


def test_argparse_errors_exit_two():
    with pytest.raises(SystemExit) as info:
        main(["simulate", "--scenario", "nope"])
    assert info.value.code == 2


def test_malformed_record_exit_two(tmp_path):
    (tmp_path / "b.rec").write_text("%DTMS v1 board\np = 0x2f\n")
    (tmp_path / "s.rec").write_text("%DTMS v1 sig\n")
    assert run("verify", "--sig", tmp_path / "s.rec", "--board", tmp_path / "b.rec", "--receiver-secret", tmp_path / "s.rec") == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dtms", "simulate", "--seed", "1"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.rstrip().endswith("signature verified and confirmed")
