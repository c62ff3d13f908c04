"""Grid-convergence data behind the oracle and intertwining tolerances.

Prints the oscillator eigenvalue errors against N (second order) and the
zero-mode residual of the grid B- operator against h (fourth order).
"""
import numpy as np

from susyqes.genfunc import HermiteOdd, SinhFamily
from susyqes.oracle import Grid, solve
from susyqes.susy import EigenPair, apply_B, superpotentials_from_phi


def oscillator(L=10.0, sizes=(1001, 2001, 2301, 4001, 8001), levels=5):
    print("V = x^2/2 on [-L, L]: |E_n - (n + 1/2)|")
    print(f"{'N':>6} {'h':>8} " + " ".join(f"{'n=' + str(n):>10}" for n in range(levels)))
    exact = np.arange(levels) + 0.5
    for n_points in sizes:
        g = Grid(L, n_points)
        err = np.abs(solve(lambda x: 0.5 * x * x, g, m=levels).eigenvalues - exact)
        print(f"{n_points:>6} {g.h:8.4f} " + " ".join(f"{e:10.2e}" for e in err))
    # leading stencil error h^2 <p^4> / 24 with <p^4> = 3(2n^2 + 2n + 1)/4
    n = np.arange(levels)
    print("predicted at h = 0.01:", " ".join(f"{1e-4 * 0.75 * (2 * n * n + 2 * n + 1) / 24:.2e}" for n in n))


def zero_mode(cases=((HermiteOdd(1), 3.0), (HermiteOdd(2), 1.7), (SinhFamily(3, 2.5), 12.0))):
    print("\nmax|B- psi0| / max|psi0| on [-8, 8]")
    steps = (0.02, 0.01, 0.005, 0.0025)
    print(f"{'case':>34} " + " ".join(f"{'h=' + str(h):>10}" for h in steps))
    for g, eps in cases:
        W, _ = superpotentials_from_phi(g, eps)
        ep = EigenPair(g, eps)
        row = []
        for h in steps:
            x = np.linspace(-8, 8, int(round(16 / h)) + 1)
            psi = ep.psi0(x)
            row.append(np.max(np.abs(apply_B("minus", W, psi, x))) / np.max(psi))
        params = ", ".join(f"{k}={v}" for k, v in g.describe().items() if k != "family")
        print(f"{g.family + '(' + params + ') eps=' + str(eps):>34} " + " ".join(f"{r:10.2e}" for r in row))


if __name__ == "__main__":
    oscillator()
    zero_mode()
