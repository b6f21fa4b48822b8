#!/usr/bin/env python3
# End-to-end checks of the seer binary: output shapes, exit codes, config fallback.
import json
import math
import os
import subprocess
import sys
import tempfile

SEER = sys.argv[1]
FIXTURES = sys.argv[2]
failures = []


def run(*args, env=None, stdin=None):
    full_env = dict(os.environ)
    full_env.pop("SEER_CONFIG", None)
    if env:
        full_env.update(env)
    return subprocess.run([SEER, *args], capture_output=True, text=True, env=full_env, input=stdin)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f"  ({detail})" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def star_entropy(n):
    ev = [1.0] * (n - 2) + [float(n)]
    total = sum(ev)
    return -sum(x / total * math.log2(x / total) for x in ev)


with tempfile.TemporaryDirectory() as tmp:
    r = run("report-anchors")
    rows = json.loads(r.stdout)["rows"]
    check("report-anchors exit 0", r.returncode == 0)
    check("report-anchors symbol order", [x["ascii"] for x in rows] == ["PSI", "DELTA", "THETA", "PI", "A-Z"])
    check("report-anchors generic marker", rows[-1]["entropy_bits"] == "role-specific")

    r = run("report-anchors", "--n-static", "7")
    theta = json.loads(r.stdout)["rows"][2]
    check("--n-static recalibrates", abs(theta["entropy_bits"] - star_entropy(7)) < 1e-9 and theta["micrograph"] == "S7",
          str(theta))

    cfg = os.path.join(tmp, "cfg.json")
    with open(cfg, "w") as f:
        json.dump({"micrographs": {"n_static": 7}}, f)
    r = run("report-anchors", env={"SEER_CONFIG": cfg})
    check("SEER_CONFIG fallback", json.loads(r.stdout)["rows"][2]["micrograph"] == "S7", r.stdout[:200])
    r = run("--config", cfg, "report-anchors")
    check("--config", json.loads(r.stdout)["rows"][2]["micrograph"] == "S7")

    r = run("--csv", "report-anchors")
    lines = r.stdout.strip().splitlines()
    check("report-anchors csv", lines[0] == "symbol,ascii,role,micrograph,entropy_bits" and len(lines) == 6)

    r = run("entropy", os.path.join(FIXTURES, "AppLogger.json"))
    check("entropy of star fixture", abs(json.loads(r.stdout)["entropy_bits"] - star_entropy(5)) < 1e-9)

    bad_graph = os.path.join(tmp, "extra.json")
    with open(os.path.join(FIXTURES, "AppLogger.json")) as f:
        doc = json.load(f)
    doc["unexpected"] = 1
    with open(bad_graph, "w") as f:
        json.dump(doc, f)
    r = run("--strict", "entropy", bad_graph)
    check("--strict rejects unknown field", r.returncode == 1 and "schema_violation" in r.stderr, r.stderr)

    r = run("entropy", os.path.join(tmp, "missing.json"))
    err = json.loads(r.stderr)
    check("missing file exit 1 with json error", r.returncode == 1 and err["error"] == "io_failure")
    check("no subcommand exit 2", run().returncode == 2)
    check("unknown flag exit 2", run("report-anchors", "--nope").returncode == 2)
    check("--help exit 0", run("--help").returncode == 0)

    bad_timing = os.path.join(tmp, "timing.json")
    with open(bad_timing, "w") as f:
        json.dump({"timing": {"multipliers": {"PHI": 9.0}}}, f)
    r = run("--config", bad_timing, "synth", "--total", "8")
    check("timing ordering violation rejected", r.returncode == 1 and "ordering_violation" in r.stderr, r.stderr)

    corpus = os.path.join(tmp, "corpus.jsonl")
    r = run("--seed", "7", "synth", "--total", "80")
    with open(corpus, "w") as f:
        f.write(r.stdout)
    check("synth writes 80 sequences", r.returncode == 0 and len(r.stdout.strip().splitlines()) == 80)

    r = run("--seed", "3", "augment", corpus, "--factor", "2")
    check("augment triples the corpus", len(r.stdout.strip().splitlines()) == 240)

    small = os.path.join(tmp, "small.json")
    with open(small, "w") as f:
        json.dump({"model": {"epochs": 1, "d_model": 16, "d_ff": 64}}, f)
    r = run("--config", small, "ablate", "--corpus", corpus)
    out = json.loads(r.stdout) if r.returncode == 0 else []
    check("ablate emits 4 rows in order", [x.get("variant") for x in out] == ["baseline", "time-only", "roles-only", "both"],
          r.stderr or r.stdout[:200])

    ckpt = os.path.join(tmp, "model.seer")
    r = run("--config", small, "train", "--corpus", corpus, "--out", ckpt)
    check("train writes checkpoint", r.returncode == 0 and os.path.getsize(ckpt) > 0, r.stderr)
    r = run("eval", "--ckpt", ckpt, "--corpus", corpus)
    check("eval on checkpoint", r.returncode == 0 and 0.0 <= json.loads(r.stdout)["accuracy"] <= 1.0, r.stderr)

    r = run("--config", small, "gradcheck", "--corpus", corpus)
    rep = json.loads(r.stdout) if r.returncode == 0 else {}
    check("gradcheck bounds", rep.get("full", {}).get("max_rel_error", 1) <= 1e-3 and
          rep.get("head", {}).get("max_rel_error", 1) <= 1e-6, r.stdout[:300] + r.stderr)

print(f"{len(failures)} failures")
sys.exit(1 if failures else 0)
