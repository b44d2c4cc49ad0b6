"""Single-mode scaling of ||V||, ||V||_HS and E0 as ||G|| approaches 1.

Prints the three asymptotic ratios and the saturation of the operator-norm
bound on a logarithmic grid in 1 - g.
"""

import numpy as np

from bogoliubov.oracle import commutative_scaling_relations


def main():
    g = 1.0 - np.logspace(-6, np.log10(0.99), 25)[::-1]
    rep = commutative_scaling_relations(g)
    print(f"{'g':>12} {'||V||(1-g)^1/4':>16} {'HS ratio':>10} {'|E0|/g^2':>10} {'saturation':>11}")
    for row in zip(rep.g, rep.v_ratio, rep.v_hs_ratio, rep.energy_ratio, rep.saturation):
        print("{:>12.6g} {:>16.6f} {:>10.6f} {:>10.6f} {:>11.12f}".format(*row))
    lo, hi = rep.bracket
    print(f"all ratios within [{lo}, {hi}]: {rep.within_brackets}")


if __name__ == "__main__":
    main()
