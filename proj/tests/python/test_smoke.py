import json
import os
import subprocess
import sys

sys.path.insert(0, os.environ.get("PYMFKIT_DIR", "."))

import pymfkit  # noqa: E402


def test_field_roots():
    f = pymfkit.make_field(3)
    assert (f["p"], f["zeta"], f["omega"], f["mu"]) == (7, 3, 2, 3)
    f2 = pymfkit.make_field(2)
    assert (f2["p"], f2["zeta"]) == (5, 2)


def test_corpus_shift_roundtrip():
    x = pymfkit.corpus_emit("e6.X_beta")
    info = pymfkit.mf_verify(x)
    assert info["size"] == 1 and info["arity"] == 3 and info["reduced"]
    assert pymfkit.mf_shift(pymfkit.mf_shift(pymfkit.mf_shift(x, 1), 1), 1) == x
    gens = pymfkit.mf_entry_ideal(x)
    assert gens == ["y", "y^2"]


def test_flat_decomposes():
    m1 = pymfkit.corpus_emit("e6.M1")
    fl = pymfkit.flat(m1)
    assert pymfkit.order_of(fl, 8) == 1
    r = pymfkit.decompose(fl, 8, 2)
    assert r["status"] == "CertifiedSplit"
    assert len(r["summands"]) == 3
    ok, detail = pymfkit.recheck_certificate(r["certificate"])
    assert ok, detail


def test_iso_verdicts():
    x = pymfkit.corpus_emit("e6.X_phi1")
    assert pymfkit.is_isomorphic(x, x, 8)["status"] == "CertifiedIso"
    assert pymfkit.is_isomorphic(x, pymfkit.mf_shift(x, 1), 8)["status"] == "NotIsoModN"
    assert pymfkit.hom_dim(x, x, 1) == 1


def test_sharp_and_ulrich():
    x = pymfkit.corpus_emit("e6.X_phi1")
    sh = pymfkit.sharp(x)
    assert pymfkit.module_verify(sh)["rank"] == 3
    u = pymfkit.corpus_emit("ulrich.a3")
    mod = json.dumps(json.loads(u)["module"])
    assert pymfkit.is_ulrich(mod)["status"] == "Ulrich"
    assert pymfkit.num_generators(mod) == 3
    assert pymfkit.rank_over_cover(mod) == 1


def test_equivariant_roundtrip():
    x = pymfkit.corpus_emit("e6.X_xi")
    assert pymfkit.equivariant_A(pymfkit.equivariant_B(x)) == x


def test_classify():
    assert pymfkit.classify(3, 5) == "Finite (A_2 row)"
    assert pymfkit.classify(3, 6) == "Infinite"
    assert pymfkit.classify_consistent()


def test_corpus_entry_report():
    rep = pymfkit.corpus_check("ulrich.a2")
    assert pymfkit.report_all_pass(rep)
    summary = pymfkit.recheck_report(rep)
    assert summary["ok"] and summary["certificates"] > 0


def test_cli_determinism_and_recheck(tmp_path):
    cli = os.environ["MFKIT_CLI"]
    args = [cli, "corpus", "check", "--seed", "0", "--format", "json"]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and len(a) > 1000
    report = tmp_path / "report.json"
    report.write_bytes(a)
    rc = subprocess.run([cli, "--recheck", str(report)], capture_output=True, text=True)
    assert rc.returncode == 0
    assert "certificates verified" in rc.stdout


def test_cli_exit_codes(tmp_path):
    cli = os.environ["MFKIT_CLI"]
    out = subprocess.run([cli, "corpus", "emit", "e6.X_beta"], capture_output=True, check=True).stdout
    f = tmp_path / "xbeta.json"
    f.write_bytes(out)
    ok = subprocess.run([cli, "verify", "--file", str(f)])
    assert ok.returncode == 0
    broken = json.loads(out)
    broken["factors"][0][0][0][0][0] = 2
    g = tmp_path / "broken.json"
    g.write_text(json.dumps(broken))
    bad = subprocess.run([cli, "verify", "--file", str(g)], capture_output=True)
    assert bad.returncode == 1
    usage = subprocess.run([cli, "verify", "--file", "/does/not/exist.json"], capture_output=True)
    assert usage.returncode == 2


def test_cli_save_load_byte_identity(tmp_path):
    cli = os.environ["MFKIT_CLI"]
    emitted = subprocess.run([cli, "corpus", "emit", "e6.X_xi"], capture_output=True, check=True).stdout
    f = tmp_path / "xxi.json"
    f.write_bytes(emitted)
    # a full-cycle rotation is the identity, so load + save must reproduce the bytes
    out = subprocess.run([cli, "shift", "--file", str(f), "--k", "3"], capture_output=True, check=True).stdout
    assert out == emitted
