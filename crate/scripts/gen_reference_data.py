"""Reference fixtures for the test suites, computed with mpmath.

Writes tests/data/zeros100.txt (first 100 zero ordinates, 20 digits) and
tests/data/hardy_z.txt (pairs t, Z(t)).
"""
import sys
from pathlib import Path

import mpmath as mp

mp.mp.dps = 30
out = Path(sys.argv[1] if len(sys.argv) > 1 else "crates/core/tests/data")
out.mkdir(parents=True, exist_ok=True)

with open(out / "zeros100.txt", "w") as f:
    f.write("# source: mpmath.zetazero\n# count: 100\n")
    for k in range(1, 101):
        f.write(mp.nstr(mp.zetazero(k).imag, 20, strip_zeros=False) + "\n")

heights = [10.5, 14.0, 17.8455995404, 50.0, 100.0, 500.0, 999.0, 1000.5,
           1234.5, 5000.0, 10000.0, 54321.0, 100000.0, 250000.0, 1000000.0]
with open(out / "hardy_z.txt", "w") as f:
    f.write("# t Z(t) via mpmath.siegelz\n")
    for t in heights:
        f.write(f"{mp.nstr(mp.mpf(t), 20)} {mp.nstr(mp.siegelz(t), 20)}\n")
