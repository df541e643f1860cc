#!/usr/bin/env python3
"""The generalized cosine lower bound, margin-checked end to end.

A real entire member attaining f(xi) = |E(xi)| ||f/E||_inf dominates
||f/E||_inf A_alpha between the neighboring zeros of B_alpha.  The classical
statement (type pi, E = e^{-i pi z}) says a normalized function cannot decay
faster than cos(pi x) on (-1, 1); this script walks both the classical and
the product-form cases and prints margin profiles.
"""

import math

import numpy as np

from debranges import (
    HBSpec,
    Kernel,
    RealPolynomial,
    RotationRealPart,
    verify_sign_free,
    verify_theorem1,
)

S_PI = HBSpec(exp_rate=math.pi)


def sinc2(x):
    u = np.pi * np.asarray(x, dtype=float) / 2
    safe = np.where(np.abs(u) < 1e-8, 1.0, u)
    return np.where(np.abs(u) < 1e-8, 1.0 - u * u / 3, (np.sin(safe) / safe) ** 2)


def describe(name, rep):
    print(f"{name}:")
    print(f"  xi = {rep.xi:+.9f}, alpha = {rep.alpha:+.9f}, norm = {rep.norm:.9f}")
    print(f"  bracket = ({rep.bracket[0]:+.9f}, {rep.bracket[1]:+.9f})")
    print(f"  min scaled margin = {rep.min_margin_scaled:+.3e}  -> passed = {rep.passed}")
    loc = rep.local
    print(
        f"  local data: Omega''(xi) = {loc.omega_d2:+.6f} > 0, "
        f"Gamma'(xi) = {loc.gamma_d1:+.6f} > 0"
    )
    print()


def main():
    print("=== Classical type-pi cases ===\n")
    describe("sinc^2 against cos(pi x) on (-1, 1)",
             verify_theorem1(sinc2, S_PI, window=(-3, 3)))
    i = None
    rep = verify_theorem1(sinc2, S_PI, window=(-3, 3))
    i = int(np.argmin(np.abs(rep.margin_x - 1.0)))
    print(f"margin at the bracket edge x = 1: {rep.margin[i]:.6f}"
          f"  (sinc^2(1) - cos(pi) = (2/pi)^2 + 1 = {(2/math.pi)**2 + 1:.6f})\n")

    describe("a translated cosine (the sharpness case: margins vanish)",
             verify_theorem1(RotationRealPart(S_PI, math.pi * 0.3), S_PI))

    describe("a reproducing kernel of half type",
             verify_theorem1(Kernel(HBSpec(exp_rate=math.pi / 2), 0.0), S_PI,
                             window=(-4, 4)))

    print("=== Product-form Hermite-Biehler cases ===\n")
    three = HBSpec(zeros=[-1j] * 3)
    describe("the constant 1 over E = (z+i)^3", verify_theorem1(RealPolynomial([1.0]), three))

    rng = np.random.default_rng(11)
    zeros = [complex(rng.uniform(-3, 3), rng.uniform(-2.5, -0.2)) for _ in range(7)]
    spec = HBSpec(zeros=zeros)
    describe("a rotation A_beta on a random degree-7 spec (equality case)",
             verify_theorem1(RotationRealPart(spec, 0.9), spec))

    describe("|f| variant on the A-zero bracket (sign-free corollary)",
             verify_sign_free(RealPolynomial([1.0]), HBSpec(zeros=[-1j, -1j])))


if __name__ == "__main__":
    main()
