"""Compare E0 with the two candidate lower bounds and test the Fock-space sandwich.

For a single mode h = 1, k = g the exact ground energy is (sqrt(1 - g^2) - 1)/2.
The bound -(g/2) g^2 fails for every g below 0.54369 (the root of
1 - sqrt(1 - g^2) = g^3), while -g^2/2 always holds.
The sandwich H >= (1 - g) dGamma(h) - c holds with c = T/(2g) and fails with
c = (g/2) T, where T = Tr(k h^{-1} k^*).
"""

import numpy as np

from bogoliubov.diagonalizer import bosonic_diagonalize
from bogoliubov.fock import lower_bound_sandwich_check, lower_bounds
from bogoliubov.generate import generate
from bogoliubov.nambu import validate_problem


def main():
    print(f"{'g':>5} {'E0':>12} {'-T/2':>12} {'-(g/2)T':>12}  refined holds")
    for g in (0.1, 0.3, 0.6, 0.9):
        p = validate_problem(np.eye(1), g * np.eye(1))
        e0 = bosonic_diagonalize(p).ground_energy
        half, refined = lower_bounds(p)
        print(f"{g:>5} {e0:>12.6f} {half:>12.6f} {refined:>12.6f}  {e0 >= refined}")

    print("\nFock sandwich, minimum eigenvalue of each side (negative = violated):")
    cases = [("single g=0.6", validate_problem(np.eye(1), 0.6 * np.eye(1)), 40),
             ("two-mode", validate_problem(np.diag([1.0, 2.0]), np.diag([0.5, 0.6])), 20),
             ("random n=2 g=0.5", generate("random", 2, 0.5, 3), 16)]
    for name, p, n_max in cases:
        r = lower_bound_sandwich_check(p, n_max)
        print(f"  {name:<18} stated: {r['lower_min_eig_stated']:+.4f} {r['upper_min_eig_stated']:+.4f}"
              f"   proof: {r['lower_min_eig_proof']:+.4f} {r['upper_min_eig_proof']:+.4f}")


if __name__ == "__main__":
    main()
