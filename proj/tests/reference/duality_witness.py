#!/usr/bin/env python3
"""Oracle for the power-law duality round trip and the non-inverse witness.

Classical power law (rate-explicit dual exists in closed form):

    |S| = g(d) = 2 nu (d/dstar)^(r-2) d
    inverse:  d = (1/(2 nu)) (s/(2 nu dstar))^(r'-2) s,   r' = r/(r-1)

Round trip must be identity for all r in (1, inf) — checked symbolically here
by composing the two closed forms on a wide magnitude range.

The *generalized* pair, by contrast, is NOT mutually inverse:

    gen power law (rate form):    |S| = 2 nu (1/2 + |D|^2/(2 dstar^2))^((r-2)/2) |D|
    gen power law (stress form):  |D| = (1/(2 nu)) (1/2 + |S|^2/(2 (2 nu dstar)^2))^((r'-2)/2) |S|

With nu = dstar = 1, r = 1.5 (so r' = 3) the composition deviates from the
identity by more than 1% somewhere in |D| in [0.1, 10].  This script scans a
dense grid and prints the worst witness for freezing into tests.
"""
import numpy as np

nu = 1.0
dstar = 1.0


def powerlaw_fwd(d, r):
    return 2 * nu * (d / dstar) ** (r - 2) * d


def powerlaw_inv(s, r):
    rp = r / (r - 1)
    return (1 / (2 * nu)) * (s / (2 * nu * dstar)) ** (rp - 2) * s


def gen_fwd(d, r):
    return 2 * nu * (0.5 + 0.5 * (d / dstar) ** 2) ** ((r - 2) / 2) * d


def gen_stress_inv(s, rp):
    return (1 / (2 * nu)) * (0.5 + 0.5 * (s / (2 * nu * dstar)) ** 2) ** ((rp - 2) / 2) * s


if __name__ == "__main__":
    # classical duality: relative round-trip error over twelve decades
    d = np.geomspace(1e-6, 1e6, 200001)
    worst = 0.0
    for r in (1.5, 2.0, 2.5, 3.0):
        err = np.abs(powerlaw_inv(powerlaw_fwd(d, r), r) - d) / d
        worst = max(worst, err.max())
        print(f"power law r={r}: max roundtrip rel err = {err.max():.3e}")
    assert worst <= 1e-10, "duality oracle failed"

    # non-inverse witness for the generalized pair, r = 1.5 vs r' = 3
    d = np.geomspace(0.1, 10.0, 200001)
    err = np.abs(gen_stress_inv(gen_fwd(d, 1.5), 3.0) - d) / d
    i = err.argmax()
    print(f"generalized pair r=1.5/r'=3: max rel deviation = {err[i]:.17g} at |D| = {d[i]:.17g}")
    print(f"  deviation at |D|=0.5: {abs(gen_stress_inv(gen_fwd(0.5,1.5),3.0)-0.5)/0.5:.17g}")
    print(f"  deviation at |D|=1.0: {abs(gen_stress_inv(gen_fwd(1.0,1.5),3.0)-1.0):.3e} (exact match point)")
    assert err.max() > 1e-2, "non-inverse witness not found"
    print("ALL OK")
