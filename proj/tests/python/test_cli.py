"""End-to-end CLI checks: construct, gallery, analyze on a coarse grid."""
import json
import math
import os
import subprocess
import sys

binary, out_root = sys.argv[1], sys.argv[2]


def run(*args):
    cmd = [binary] + list(args)
    print("+", " ".join(cmd))
    return subprocess.run(cmd, capture_output=True, text=True)


failures = []


def check(name, cond):
    if not cond:
        failures.append(name)
        print(f"FAIL {name}")
    else:
        print(f"ok   {name}")


d1 = os.path.join(out_root, "c1")
r = run("--out", d1, "construct", "--dim", "1", "--radii", "1,0.5")
check("construct_exit", r.returncode == 0)
with open(os.path.join(d1, "set1d.json")) as fh:
    set1d = json.load(fh)
check("construct_points", [float(p) for p in set1d["points"]] == [0.0, 2.0, 3.0])

d2 = os.path.join(out_root, "c2")
r = run("--out", d2, "gallery", "--q", "0.111111", "--alpha", "0.5", "--depth", "14")
check("gallery_exit", r.returncode == 0)
with open(os.path.join(d2, "gallery.json")) as fh:
    gal = json.load(fh)
# q is close to (not exactly) 1/9, so compare against the formula at that q.
q = 0.111111
closed = math.sqrt(1 - 2 * q) / (1 - 2 * math.sqrt(q))
check("gallery_gap_sum", abs(float(gal["gap_sum_with_tail"]) - closed) < 1e-6)
check("gallery_conditions", gal["conditions_rearranged"]["verdict_ii"] is True)

d3 = os.path.join(out_root, "c3")
r = run("--out", d3, "analyze", "--geometry", "rectboundary:1", "--h", "0.01",
        "--band", "0.2", "--band-hi", "1.3", "--threshold", "0.5")
check("analyze_exit", r.returncode == 0)
with open(os.path.join(d3, "nondiff_report.json")) as fh:
    rep = json.load(fh)
check("analyze_one_detection", len(rep["detected"]) == 1)
if rep["detected"]:
    check("analyze_position", abs(float(rep["detected"][0]["r"]) - 1.0) <= 0.02)

# Determinism: identical config gives byte-identical outputs.
d4 = os.path.join(out_root, "c4")
run("--out", d4, "gallery", "--q", "0.111111", "--alpha", "0.5", "--depth", "14")
with open(os.path.join(d2, "gallery.json")) as a, open(os.path.join(d4, "gallery.json")) as b:
    check("gallery_deterministic", a.read() == b.read())

d5 = os.path.join(out_root, "c5")
r = run("--out", d5, "construct", "--dim", "2", "--radii", "1,0.5", "--gamma0", "0.1")
check("construct2_exit", r.returncode == 0)
with open(os.path.join(d5, "construction.json")) as fh:
    cons = json.load(fh)
check("construct2_jumps", [float(v) for v in cons["predicted_jumps"]] == [0.1, 0.05])
check("construct2_geometry", os.path.exists(os.path.join(d5, "geometry.json")))

d6 = os.path.join(out_root, "c6")
r = run("--out", d6, "construct", "--boxes-dim", "3", "--radii", "1,0.5")
check("boxes_exit", r.returncode == 0)
with open(os.path.join(d6, "boxes.json")) as fh:
    boxes = json.load(fh)
check("boxes_sizes", [float(v) for v in boxes["boxes"][0]["size"]] == [3.0, 3.0, 2.0])

d7 = os.path.join(out_root, "c7")
r = run("--out", d7, "convergence", "--geometry", "disk:1", "--r0", "0.3",
        "--delta", "0.1", "--k", "3", "--h", "0.01")
check("convergence_exit", r.returncode == 0)
with open(os.path.join(d7, "convergence.json")) as fh:
    conv = json.load(fh)
check("convergence_rows", len(conv["rows"]) == 3)
check("convergence_decreasing", conv["eventually_decreasing_below"] is True)

r = run("construct", "--dim", "1", "--radii", "")
check("bad_input_exit", r.returncode != 0)

if failures:
    print("FAILURES:", failures)
    sys.exit(1)
print("cli smoke: all ok")
