"""Chebyshev fits of the Riemann-Siegel correction functions C0..C4 on p in [0, 1].

Prints a Rust array literal per coefficient function. Run with mpmath installed.
"""
import mpmath as mp

mp.mp.dps = 60
DEG = 44


def psi(p):
    return mp.cos(2 * mp.pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * p)


def derivs(p, n):
    return mp.diffs(psi, p, n)


def corrections(p):
    d = list(derivs(p, 12))
    pi = mp.pi
    c0 = d[0]
    c1 = -d[3] / (96 * pi**2)
    c2 = d[2] / (64 * pi**2) + d[6] / (18432 * pi**4)
    c3 = -d[1] / (64 * pi**2) - d[5] / (3840 * pi**4) - d[9] / (5308416 * pi**6)
    c4 = (d[0] / (128 * pi**2) + 19 * d[4] / (24576 * pi**4)
          + 11 * d[8] / (5898240 * pi**6) + d[12] / (2038431744 * pi**8))
    return [c0, c1, c2, c3, c4]


HEADER = """//! Chebyshev coefficients of the Riemann–Siegel correction functions
//! `C_0 … C_4` on `p ∈ [0, 1]`, in the variable `z = 2p − 1`.
//!
//! Generated by `scripts/gen_rs_coeffs.py` (60-digit mpmath derivatives of
//! `Ψ(p) = cos 2π(p² − p − 1/16) / cos 2πp`). Coefficients below 1e-40 are
//! structural zeros from the parity of each `C_j` and are written as 0.
"""


def main():
    n = DEG + 1
    nodes = [mp.cos(mp.pi * (j + mp.mpf(1) / 2) / n) for j in range(n)]
    vals = [corrections((x + 1) / 2) for x in nodes]
    out = [HEADER]
    for which in range(5):
        cs = []
        for k in range(n):
            s = mp.fsum(vals[j][which] * mp.cos(mp.pi * k * (j + mp.mpf(1) / 2) / n) for j in range(n))
            cs.append(2 * s / n)
        cs[0] /= 2
        cs = [float(c) if abs(c) > 1e-40 else 0.0 for c in cs]
        while cs and abs(cs[-1]) < 1e-19:
            cs.pop()
        out.append(f"pub(crate) const C{which}: [f64; {len(cs)}] = [")
        out.extend(f"    {c!r}," for c in cs)
        out.append("];\n")
    print("\n".join(out), end="")


if __name__ == "__main__":
    main()
