"""Write `n a_n` tables for an elliptic curve newform by counting points mod p.

usage: point_count.py LABEL LEVEL a1 a2 a3 a4 a6 BOUND > data/LABEL.txt
"""
import sys

import numpy as np


def primes_up_to(n):
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, int(n**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.nonzero(sieve)[0]


def a_p(p, a1, a2, a3, a4, a6):
    x = np.arange(p, dtype=np.int64)
    y = np.arange(p, dtype=np.int64)
    if p == 2:
        count = 0
        for xv in range(2):
            for yv in range(2):
                lhs = yv * yv + a1 * xv * yv + a3 * yv
                rhs = xv**3 + a2 * xv * xv + a4 * xv + a6
                count += (lhs - rhs) % 2 == 0
        return p - count
    # y² + (a1 x + a3) y = f(x)  ⇔  (2y + a1 x + a3)² = 4 f(x) + (a1 x + a3)²
    f = (x * x % p * x + a2 * x * x + a4 * x + a6) % p
    disc = (4 * f + (a1 * x + a3) ** 2) % p
    squares = np.zeros(p, dtype=np.int64)
    squares[(y * y) % p] = 1
    legendre = np.where(disc == 0, 0, 2 * squares[disc] - 1)
    return -int(legendre.sum())


def main():
    label, level = sys.argv[1], int(sys.argv[2])
    a1, a2, a3, a4, a6 = map(int, sys.argv[3:8])
    bound = int(sys.argv[8])
    ap = {int(p): a_p(int(p), a1, a2, a3, a4, a6) for p in primes_up_to(bound)}
    a = [0] * (bound + 1)
    a[1] = 1
    for p, v in ap.items():
        pk, prev, cur = p, 1, v
        while pk <= bound:
            a[pk] = cur
            bad = level % p == 0
            prev, cur = cur, v * cur - (0 if bad else p * prev)
            pk *= p
    for n in range(2, bound + 1):
        if a[n] == 0 and n not in ap:
            m, p = n, None
            for q in ap:
                if m % q == 0:
                    p = q
                    break
            pk = 1
            while m % p == 0:
                m //= p
                pk *= p
            if m > 1:
                a[n] = a[pk] * a[m]
    print(f"label {label}")
    print("weight 2")
    print(f"level {level}")
    print("base-field Q")
    for n in range(1, bound + 1):
        print(n, a[n])


main()
