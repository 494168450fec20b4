"""Generate Taylor tables for the Riemann-Siegel correction terms C0..C4.

Each C_k(p) is tabulated as a polynomial in x = p - 1/2 on p in [0, 1).
Run once; the output is pasted into src/zeropair/_rs_coeffs.py.
"""

import mpmath as mp

mp.mp.dps = 60
DEG = 64


def psi(p):
    return mp.cos(2 * mp.pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * p)


def main():
    # Taylor coefficients of psi about p = 1/2
    a = mp.taylor(psi, mp.mpf(1) / 2, DEG + 14)

    def deriv(k):
        # coefficients of psi^(k)(1/2 + x)
        return [a[j + k] * mp.factorial(j + k) / mp.factorial(j) for j in range(DEG + 1)]

    pi = mp.pi
    combos = {
        0: [(0, 1)],
        1: [(3, -1 / (96 * pi**2))],
        2: [(2, 1 / (64 * pi**2)), (6, 1 / (18432 * pi**4))],
        3: [(1, -1 / (64 * pi**2)), (5, -1 / (3840 * pi**4)), (9, -1 / (5308416 * pi**6))],
        4: [
            (0, 1 / (128 * pi**2)),
            (4, 19 / (24576 * pi**4)),
            (8, 11 / (5898240 * pi**6)),
            (12, 1 / (2038431744 * pi**8)),
        ],
    }
    print("# Generated by tools/gen_rs_coeffs.py; do not edit.")
    print("# C_k(p) = sum_j COEFFS[k][j] * (p - 0.5)**j")
    print("COEFFS = (")
    for k in range(5):
        c = [mp.mpf(0)] * (DEG + 1)
        for order, w in combos[k]:
            d = deriv(order)
            for j in range(DEG + 1):
                c[j] += w * d[j]
        # trim negligible tail
        while len(c) > 1 and abs(c[-1]) * mp.mpf(0.5) ** (len(c) - 1) < mp.mpf(10) ** -22:
            c.pop()
        print("    (")
        for v in c:
            if abs(v) < mp.mpf(10) ** -40:
                v = mp.mpf(0)
            print(f"        {mp.nstr(v, 20, min_fixed=-1, max_fixed=-1)},")
        print("    ),")
    print(")")


if __name__ == "__main__":
    main()
