#!/usr/bin/env python3
"""K(p), embedding-norm bounds, and the exact p = 2 constant.

Prints the K(p) Beta/Gamma identity against direct quadrature, the bound
||phi'||_inf^{1/p} / (2^{1/p} K(p)) with its explicit p-th power relaxation,
the large-p asymptote, the interval-energy inequality behind the proof, and
the reproducing-kernel route to C(2, E).
"""

import math

import numpy as np

from debranges import (
    C2_exact,
    HBSpec,
    K_p_closed,
    K_p_quadrature,
    PhaseProfile,
    asymptotic_check,
    embedding_bound,
    interval_energy,
    kernel_eval,
    level_crossings,
    nonasymptotic_bound_pth_power,
    phase_derivative_sup,
)


def main():
    print("K(p): quadrature of |cos|^p vs the Gamma closed form")
    print(f"{'p':>6} {'quadrature':>18} {'closed form':>18} {'rel err':>10}")
    for p in (0.5, 1.0, 2.0, 3.0, 7.5, 20.0):
        kq, kc = K_p_quadrature(p), K_p_closed(p)
        print(f"{p:6.1f} {kq:18.14f} {kc:18.14f} {abs(kq-kc)/kc:10.1e}")
    print(f"\nK(1) = {K_p_closed(1.0)} (exactly 2), "
          f"K(2) = {K_p_closed(2.0)} (sqrt(pi/2) = {math.sqrt(math.pi/2)})")

    print("\nPaley-Wiener bounds (phase_sup = 2 pi):")
    two_pi = 2 * math.pi
    print(f"{'p':>6} {'bound^p':>14} {'explicit form':>14} {'sqrt(pi p/2)':>14} {'ratio->1':>10}")
    for p in (1.0, 2.0, 10.0, 100.0, 1000.0):
        bp = embedding_bound(p, two_pi) ** p
        na = nonasymptotic_bound_pth_power(p, two_pi)
        print(f"{p:6.0f} {bp:14.6f} {na:14.6f} {math.sqrt(math.pi*p/2):14.6f} "
              f"{asymptotic_check(p):10.6f}")
    print("(the bound's p-th power always sits below the explicit form: the "
          "Gamma-quotient inequality chain)")

    print("\nInterval energy over consecutive A_alpha-zero pairs:")
    s_pi = HBSpec(exp_rate=math.pi)
    val = interval_energy(s_pi, 0.0, 2.0, (0.5, 1.5))
    print(f"  S_pi, p=2: I = {val} = 1/2 exactly; the crux bound "
          f"2 K(2)^2 / (2 pi) = {2*K_p_closed(2.0)**2/two_pi} is attained "
          "(phi' constant)")
    rng = np.random.default_rng(2)
    spec = HBSpec(zeros=[complex(rng.uniform(-2, 2), rng.uniform(-2, -0.2)) for _ in range(5)])
    sup = phase_derivative_sup(spec).value
    prof = PhaseProfile(spec)
    roots = level_crossings(prof, 0.4 * 2 + math.pi, (-8, 8))
    for i in range(len(roots) - 1):
        I = interval_energy(spec, 0.4, 1.5, (roots[i], roots[i + 1]))
        floor = 2 * K_p_closed(1.5) ** 1.5 / sup
        print(f"  random spec, pair {i}: I = {I:.6f} >= {floor:.6f}")

    print("\nReproducing kernels and the exact p = 2 constant:")
    one = HBSpec(zeros=[-1j])
    two = HBSpec(zeros=[-1j, -1j])
    print(f"  E = z+i:     K_0 is the constant {complex(kernel_eval(one, 0.0, 1.7)).real:.12f} "
          f"(1/pi = {1/math.pi:.12f})")
    print(f"  E = (z+i)^2: K_0 is the constant {complex(kernel_eval(two, 0.0, -0.3)).real:.12f} "
          f"(2/pi = {2/math.pi:.12f})")
    print(f"  C(2, E, 0) = sqrt(phi'(0)/2 pi): {C2_exact(two, 0.0):.12f} "
          f"(sqrt(2/pi) = {math.sqrt(2/math.pi):.12f})")


if __name__ == "__main__":
    main()
