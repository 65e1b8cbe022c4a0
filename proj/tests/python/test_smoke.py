"""Smoke tests for the python module built by CMake (or scikit-build-core)."""
import math
import sys

if len(sys.argv) > 1:
    sys.path.insert(0, sys.argv[1])

import _paraset as ps  # noqa: E402

failures = []


def check(name, cond):
    if not cond:
        failures.append(name)
        print(f"FAIL {name}")
    else:
        print(f"ok   {name}")


pts = ps.construct_dim1([1.0, 0.5])
check("construct_dim1", pts == [0.0, 2.0, 3.0])
check("round_trip", ps.predicted_nondiff_1d(pts) == [1.0, 0.5])

check("gap_sum_sqrt7", abs(ps.cantor_gap_sum(1 / 9, 14, 0.5) - math.sqrt(7)) < 1e-9)
check("gap_sum_divergent", math.isinf(ps.cantor_gap_sum(1 / 3, 10, 0.5)))
check("closed_form", abs(ps.cantor_closed_form(1 / 9, 0.5) - math.sqrt(7)) < 1e-12)

check("integral_rearranged", ps.integral_verdict("rearranged", 0.3, 16) == "finite")
check("integral_endpoints", ps.integral_verdict("endpoints", 0.3, 12) == "infinite")

check("volume_1d", ps.volume_1d([0.0, 2.0, 3.0], 0.75) == 4.0)
check("oracle_two_points", abs(ps.exact_volume("two_points", [2.0], 1.0) - 2 * math.pi) < 1e-12)

disk = ps.disk(0.0, 0.0, 1.0)
check("disk_distance", abs(disk.distance(3.0, 0.0) - 2.0) < 1e-12)
check("disk_contains", disk.contains(0.5, 0.5))

g = ps.Geometry.from_json(disk.to_json())
check("json_round_trip", g.distance(3.0, 0.0) == disk.distance(3.0, 0.0))

res = ps.analyze(ps.rect_boundary(1.0), h=0.01, lo=0.2, hi=1.3, threshold=0.5)
det = res["nondiff"]["detected"]
check("analyze_detects_s", len(det) == 1 and abs(det[0]["r"] - 1.0) < 0.02)
check("analyze_jump", abs(det[0]["jump"] - 2.0) < 0.3 if det else False)

cons = ps.construct_dim2([1.0, 0.5], 0.1)
check("construct_dim2_jumps", cons["predicted_jumps"] == [0.1, 0.05])

if failures:
    print("FAILURES:", failures)
    sys.exit(1)
print("python smoke: all ok")
