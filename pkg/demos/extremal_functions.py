#!/usr/bin/env python3
"""Point-evaluation extremal functions on finite-dimensional slices.

Solves min ||f/E||_p subject to f(xi) = |E(xi)| on polynomial de Branges
spaces, inspects the optimizer's certificates (unit norm, KKT residual,
zero-pair orthogonality), and shows the structural facts: real simple zeros,
uniform separation on the phi' scale, uniqueness for p >= 1, and the exact
p = 2 agreement with the reproducing kernel.
"""

import math

import numpy as np

from debranges import (
    C2_exact,
    ExtremalProblem,
    HBSpec,
    PolynomialBasis,
    KernelNodeBasis,
    mean_type_diagnostic,
    separation_report,
    solve,
)


def main():
    print("=== p = 2: the solver reproduces the kernel constant ===")
    four = HBSpec(zeros=[-1j] * 4)
    prob = ExtremalProblem(p=2.0, spec=four, xi=0.0, basis=PolynomialBasis(2))
    sol = solve(prob)
    print(f"C from the convex solver: {sol.C_value:.14f}")
    print(f"sqrt(phi'(0) / 2 pi):     {C2_exact(four, 0.0):.14f}")
    print(f"zeros (the kernel 4(1-z^2)/pi): {np.round(sol.zeros, 12)}")
    print(f"unit-norm residual {sol.norm_residual:.1e}, KKT residual {sol.kkt_residual:.1e}")

    print("\n=== a p sweep on a random degree-8 spec ===")
    rng = np.random.default_rng(21)
    spec = HBSpec(zeros=[complex(rng.uniform(-2.5, 2.5), rng.uniform(-2, -0.2)) for _ in range(8)])
    print(f"{'p':>5} {'C(p,E,xi)':>12} {'#zeros':>7} {'min gap':>9} {'max |orth|':>11} {'mean type':>10}")
    for p in (1.0, 1.5, 2.0, 3.0):
        prob = ExtremalProblem(p=p, spec=spec, xi=0.3, basis=PolynomialBasis(6))
        sol = solve(prob)
        worst = max((abs(r) for r in sol.orthogonality_residuals), default=0.0)
        mt = mean_type_diagnostic(sol, prob)
        print(f"{p:5.1f} {sol.C_value:12.8f} {len(sol.zeros):7d} "
              f"{sol.min_zero_gap:9.4f} {worst:11.2e} {mt:10.2e}")
    rep = separation_report(sol, prob)
    print(f"separation scales: delta = pi/(2 sup phi') = {rep.delta:.4f}, "
          f"A-zero gap = {rep.a_zero_gap:.4f}; observed min gap = {rep.min_gap:.4f}")

    print("\n=== uniqueness for p >= 1: two random starts meet ===")
    prob = ExtremalProblem(p=1.5, spec=spec, xi=0.3, basis=PolynomialBasis(6))
    s1, s2 = solve(prob, seed=1), solve(prob, seed=2)
    c1 = s1.coefficients / np.linalg.norm(s1.coefficients)
    c2 = s2.coefficients / np.linalg.norm(s2.coefficients)
    print(f"normalized coefficient distance: {np.linalg.norm(c1 - c2):.2e}")

    print("\n=== truncated Paley-Wiener mode (kernel-node basis) ===")
    s_pi = HBSpec(exp_rate=math.pi)
    nodes = tuple(float(t) for t in np.arange(-6, 7))
    prob = ExtremalProblem(p=2.0, spec=s_pi, xi=0.0,
                           basis=KernelNodeBasis(nodes), window=(-12.0, 12.0))
    sol = solve(prob)
    inner = [z for z in sol.zeros if abs(z) < 4.5]
    print(f"truncated = {sol.truncated}; C = {sol.C_value:.6f} "
          "(the window cut biases it above the classical constant 1)")
    print(f"zeros near the origin: {np.round(inner, 4)} (the sinc pattern: "
          "no zero at 0, unit spacing elsewhere)")


if __name__ == "__main__":
    main()
