#!/usr/bin/env python3
"""Writes the 50-digit ln Gamma reference table used by the numerics tests.

Run once; the output is committed as tests/data/lgamma_reference.csv.
"""
import random
import sys

import mpmath

mpmath.mp.dps = 60

FIXED = [
    "0.001", "0.002", "0.01", "0.05", "0.1", "0.25", "0.3333", "0.5", "0.75",
    "0.8", "0.9", "0.99", "0.999", "1.001", "1.01", "1.1", "1.2", "1.25",
    "1.4616321449683623", "1.5", "1.75", "1.8", "1.9", "1.99", "1.999",
    "2.001", "2.01", "2.1", "2.2", "2.5", "3", "3.5", "4.25", "5", "7.5",
    "9", "10", "11", "12.5", "20", "27", "33.3", "50", "84", "100", "111",
    "250", "500", "1000", "1234.5", "5000", "10000", "50000", "100000",
    "500000", "1000000",
]


def main(path):
    rng = random.Random(20190417)
    # Evaluate at the exact binary64 value of each abscissa so the table is
    # free of decimal-to-double conversion error.
    xs = [mpmath.mpf(float(s)) for s in FIXED]
    for _ in range(64):
        # log-uniform over [1e-3, 1e6]
        e = rng.uniform(-3.0, 6.0)
        xs.append(mpmath.mpf(10.0 ** e))
    with open(path, "w", newline="\n") as out:
        out.write("x,lgamma\n")
        for x in xs:
            out.write("%s,%s\n" % (repr(float(x)), mpmath.nstr(mpmath.loggamma(x), 50)))


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "lgamma_reference.csv")
