#!/usr/bin/env python3
"""Phase functions of Hermite-Biehler products, step by step.

Builds a few specs, prints their unwrapped phase, its derivative and
supremum, and shows how the zeros of A_beta and B_beta fall out of phase
level crossings and interlace.
"""

import math

import numpy as np

from debranges import (
    HBSpec,
    PhaseProfile,
    eval_AB,
    level_crossings,
    phase,
    phase_derivative,
    phase_derivative_sup,
    theta,
)


def show(title):
    print()
    print(title)
    print("-" * len(title))


def main():
    show("The Paley-Wiener prototype E(z) = e^{-i pi z}")
    s_pi = HBSpec(exp_rate=math.pi)
    prof = PhaseProfile(s_pi)
    print("phi(x) = 2 pi x exactly; a few samples:")
    for x in (0.0, 0.25, 0.5, 1.0):
        print(f"  phi({x}) = {phase(prof, x):.12f}   (2 pi x = {2*math.pi*x:.12f})")
    sup = phase_derivative_sup(s_pi)
    print(f"phi' is constant: sup = {sup.value:.12f} = 2 pi, attained {sup.location!r}")

    show("One zero at -i: E(z) = z + i")
    one = HBSpec(zeros=[-1j])
    prof1 = PhaseProfile(one)
    print("phi(x) = pi + 2 arctan(x); phi(1) =", phase(prof1, 1.0))
    print("phi'(0) =", phase_derivative(one, 0.0), " (the bump peaks at the zero's real part)")
    print("B_0 is constant: no level crossings ->", level_crossings(prof1, 0.0, (-10, 10)))

    show("A double zero: E(z) = (z+i)^2, so A_0 = x^2 - 1 and B_0 = 2x")
    two = HBSpec(zeros=[-1j, -1j])
    prof2 = PhaseProfile(two)
    za = level_crossings(prof2, math.pi, (-10, 10))
    zb = level_crossings(prof2, 0.0, (-10, 10))
    print("zeros of A_0 from the 'phi = pi mod 2 pi' level:", za)
    print("zeros of B_0 from the 'phi = 0 mod 2 pi' level:", zb)
    a, b = eval_AB(two, 0.0, 2.0)
    print(f"direct check at x=2: A = {a} (= 3), B = {b} (= 4)")

    show("A random spec: interlacing and the unimodularity of Theta_E")
    rng = np.random.default_rng(4)
    zeros = [complex(rng.uniform(-3, 3), rng.uniform(-2, -0.2)) for _ in range(6)]
    spec = HBSpec(zeros=zeros)
    prof = PhaseProfile(spec)
    beta = 0.7
    za = level_crossings(prof, 2 * beta + math.pi, (-10, 10))
    zb = level_crossings(prof, 2 * beta, (-10, 10))
    merged = sorted([(z, "A") for z in za] + [(z, "B") for z in zb])
    print("merged zero sequence (types must alternate):")
    print("  " + " ".join(f"{t}@{z:+.3f}" for z, t in merged))
    xs = rng.uniform(-8, 8, size=5)
    worst = max(abs(np.exp(1j * phase(prof, x)) - complex(theta(spec, x))) for x in xs)
    print(f"|e^(i phi) - Theta_E| on random samples: {worst:.2e}")
    sup = phase_derivative_sup(spec)
    gaps = np.diff(za)
    print(f"sup phi' = {sup.value:.6f} at x = {sup.location:+.6f}")
    print(f"A-zero gaps {np.round(gaps, 4)} all clear 2 pi / sup = {2*math.pi/sup.value:.4f}")


if __name__ == "__main__":
    main()
