#!/usr/bin/env python3
"""Brute-force oracle for the averaged-difference sequence over van der Corput points.

Builds each raw term by enumerating its support points, accumulating the
coefficients with exact fractions, and summing absolute values. Shares no code
with the C++ implementation; its output is frozen into the C++ tests.
"""
from fractions import Fraction


def vdc_prefix(k, bits=40):
    # binary digits of k, least significant first
    return tuple((k >> i) & 1 for i in range(bits))


def max_p(n):
    return 2 ** (n + 1) - 2


def raw_term(n):
    coeff = {}
    hi, lo = max_p(n + 1), max_p(n)
    for k in range(hi):
        coeff[vdc_prefix(k)] = coeff.get(vdc_prefix(k), Fraction(0)) + Fraction(1, hi)
    for k in range(lo):
        coeff[vdc_prefix(k)] = coeff.get(vdc_prefix(k), Fraction(0)) - Fraction(1, lo)
    return coeff


def max_cylinder(coeff, norm, depth):
    best = Fraction(0)
    for d in range(depth + 1):
        for s in range(2 ** d):
            word = tuple((s >> (d - 1 - i)) & 1 for i in range(d))
            v = sum(w for p, w in coeff.items() if p[:d] == word) / norm
            best = max(best, abs(v))
    return best


def main():
    # columns: n, norm of raw term, max |normalized term(U)| over cylinders of depth <= 6
    for n in range(1, 13):
        c = raw_term(n)
        norm = sum(abs(v) for v in c.values())
        m = max_cylinder(c, norm, 6)
        print(f"{n} {norm.numerator}/{norm.denominator} {m.numerator}/{m.denominator}")


if __name__ == "__main__":
    main()
