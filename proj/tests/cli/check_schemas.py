"""Run every CLI command with --json and validate the output against the published schemas."""

import json
import os
import subprocess
import sys
import tempfile

try:
    import jsonschema
except ImportError:
    print("jsonschema not installed; skipping")
    sys.exit(77)

CLI, SCHEMAS = sys.argv[1], sys.argv[2]


def schema(name):
    with open(os.path.join(SCHEMAS, name + ".schema.json")) as f:
        return json.load(f)


def run(args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    if proc.returncode != expect:
        sys.exit(f"{' '.join(args)}: exit {proc.returncode} (expected {expect})\n{proc.stderr}")
    return proc.stdout


def check(name, args, expect=0):
    doc = json.loads(run(args, expect))
    jsonschema.validate(doc, schema(name))
    print(f"ok  {name:<18} {' '.join(args)}")
    return doc


with tempfile.TemporaryDirectory() as tmp:
    check("bipartite_bound", ["bipartite-bound", "--json"])
    check("bipartite_bound", ["bipartite-bound", "--sphere", "--json"])
    check("bipartite_bound", ["bipartite-bound", "--resolution", "16", "--json"], expect=2)
    check("work_report", ["work", "--state", "w", "--z", "0,0", "--json"])
    check("sphere_optimum", ["scan", "--state", "ghz", "--grid", "8x8", "--json"])
    check("threshold_result", ["threshold", "--family", "ghz-werner", "--criterion", "mermin", "--json"])
    check("protocol_estimate", ["simulate", "--shots", "2000", "--json"])
    check("protocol_estimate", ["simulate", "--bipartite", "--shots", "2000", "--json"])

    state = os.path.join(tmp, "w.json")
    amp = [{"re": 0.0, "im": 0.0} for _ in range(8)]
    for i in (1, 2, 4):
        amp[i]["re"] = 3 ** -0.5
    doc = {"n_qubits": 3, "amplitudes": amp}
    jsonschema.validate(doc, schema("state_file"))
    with open(state, "w") as f:
        json.dump(doc, f)
    check("classification", ["classify", "--state", state, "--json"])

    manifest = os.path.join(tmp, "manifest.json")
    run(["simulate", "--shots", "100", "--manifest", manifest])
    with open(manifest) as f:
        jsonschema.validate(json.load(f), schema("run_manifest"))
    print("ok  run_manifest")

    # table1 exits 2 when a cell misses its reference value; the payload is
    # still emitted and must validate either way.
    proc = subprocess.run([CLI, "table1", "--no-sphere", "--json"], capture_output=True, text=True)
    if proc.returncode not in (0, 2):
        sys.exit(f"table1: exit {proc.returncode}\n{proc.stderr}")
    jsonschema.validate(json.loads(proc.stdout), schema("table1"))
    print("ok  table1")
