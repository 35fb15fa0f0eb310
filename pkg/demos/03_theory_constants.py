"""
Amplitude constants
===================

The second-order constant c_2 has a closed form for every H, the fourth-
order one only at H = 1/2. Elsewhere it is a singular double integral,
evaluated here by nested adaptive quadrature with an error estimate.
"""

from mfou import theory

T = 1.0
print("closed form vs quadrature at H = 1/2")
for g2 in (0.0, 0.02, 0.04, 0.1):
    q, err = theory.c2n_quadrature(0.5, g2, 2, T)
    print(f"  gamma^2={g2:<5}  c4 closed {theory.c4_half_closed(g2, T):.8f}  quad {q:.8f} +- {err:.1e}")

print("\nGaussian limit: c4 must equal c2^2")
for h in (1 / 3, 2 / 3):
    q, err = theory.c2n_quadrature(h, 0.0, 2, T)
    print(f"  H={h:.4f}  quad {q:.8f}  c2^2 {theory.c2(h, T) ** 2:.8f}")

print("\nflatness amplitude c4 / c2^2 at gamma^2 = 0.04")
for h in (1 / 3, 1 / 2, 2 / 3):
    print(f"  H={h:.4f}  {theory.flatness_amplitude(h, 0.04, T):.5f}")

print(f"\ng(0) = {theory.g_at_zero():.8f}")

# Moments stop existing once gamma^2 is too large for the order.
for n in (2, 3):
    try:
        theory.check_moment_range(1 / 3, 0.2, n)
        print(f"order {2 * n} exists at H=1/3, gamma^2=0.2")
    except ValueError as exc:
        print(f"order {2 * n}: {exc}")
