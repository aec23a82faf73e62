"""Smoke test for the hyperlc extension module.

Build and stage the module, then run this script:

    cargo build --release -p hyperlc-py --features extension-module
    cp target/release/libhyperlc_py.so python/hyperlc.so
    python3 python/smoke_test.py
"""

import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import hyperlc


def check(name, ok, detail=""):
    print(f"{'PASS' if ok else 'FAIL'} {name} {detail}".rstrip())
    if not ok:
        sys.exit(1)


def matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def main():
    grid = hyperlc.Grid(16, 4.0)
    check("grid", grid.points_per_axis == 16 and grid.box_length == 4.0, repr(grid))

    coeffs = hyperlc.Coefficients(0.5, 1.0, 0.3)
    xi = [0.3, -1.2, 0.7]
    l = coeffs.symbol(xi)
    k2 = sum(x * x for x in xi)
    check("symbol positivity", min(l) >= coeffs.parabolicity() * k2 - 1e-12, str(l))

    try:
        hyperlc.Coefficients(1.0, -1.0, 0.0)
        check("inadmissible coefficients rejected", False)
    except ValueError:
        check("inadmissible coefficients rejected", True)

    u = hyperlc.diagonalizer(xi)
    uu = matmul(u, u)
    err = max(abs(uu[i][j] - (1.0 if i == j else 0.0)) for i in range(3) for j in range(3))
    check("U^2 = I", err < 1e-12, f"{err:.1e}")
    p = hyperlc.leray_symbol(xi)
    pp = matmul(p, p)
    err = max(abs(pp[i][j] - p[i][j]) for i in range(3) for j in range(3))
    check("P^2 = P", err < 1e-12, f"{err:.1e}")

    s0 = hyperlc.initial_data(grid, 1e-3, [0.2, 0.6], "random-band", 7)
    e_start = s0.energy()
    final, series = hyperlc.run(s0, coeffs, 0.05, 0.5, "ETD2", 2)
    check("run reaches t_end", abs(final.t - 0.5) < 1e-12, repr(final))
    ratio = max(series["E0"]) / e_start
    check("energy bounded", ratio <= 1 + 1e-4, f"max E0/E0(0) = {ratio:.8f}")
    check("series lengths", len(series["t"]) == len(series["E0"]) > 1)
    d = final.director()
    defect = max(abs(math.sqrt(a * a + b * b + c * c) - 1.0) for a, b, c in zip(*d))
    check("unit director", defect < 1e-10, f"{defect:.1e}")

    with tempfile.TemporaryDirectory() as tmp:
        path = os.path.join(tmp, "state.bin")
        final.save(path, coeffs, 7)
        back, c2, seed = hyperlc.load_snapshot(path)
        check("snapshot roundtrip", seed == 7 and back.t == final.t and back.energy() == final.energy())
        with open(path, "rb") as f:
            check("snapshot magic", f.read(8) == hyperlc.SNAPSHOT_MAGIC)

    ts = [2.0 ** (k / 3) for k in range(10)]
    slope, _, prefactor = hyperlc.decay_fit(ts, [3.0 * t ** -1.5 for t in ts], [1.0, 8.0])
    check("decay fit", abs(slope + 1.5) < 1e-12 and abs(prefactor - 3.0) < 1e-12, f"{slope:.6f}")

    try:
        hyperlc.canonical_config("scenario = 3\n")
        check("bad config rejected", False)
    except ValueError as e:
        check("bad config rejected", True, str(e).splitlines()[0])

    print("all smoke checks passed")


if __name__ == "__main__":
    main()
