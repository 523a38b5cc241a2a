#!/usr/bin/env python3
"""Tabulate compiled gate counts against the closed-form budgets.

Compiles encoder and decoder for a range of clone counts, prints measured
two-qubit counts next to the 4n / 15n+7 formulas and the overall 21n+11
budget, and (for small n) verifies the circuits against the dense unitaries.
"""
import argparse
import math
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from qclone.circuits import circuit_to_unitary, equivalence_up_to_global_phase
from qclone.compiler import compile_decoding, compile_encoding, gate_count_report
from qclone.protocol import AlphaCoefficients, decoding_unitary, encoding_unitary

VERIFY_MAX_N = 5  # dense decoder reconstruction is 2^(n+1) x 2^(n+1)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--nmax", type=int, default=8)
    args = parser.parse_args()

    header = f"{'n':>3} {'enc 2q':>7} {'dec 2q':>7} {'sum':>5} {'budget 21n+11':>14} {'verified':>9}"
    print(header)
    print("-" * len(header))
    ok = True
    for n in range(2, args.nmax + 1):
        report = gate_count_report(n)
        verified = "-"
        if n <= VERIFY_MAX_N:
            t = math.pi / 4
            enc = equivalence_up_to_global_phase(
                circuit_to_unitary(compile_encoding(n, t)), encoding_unitary(n, t)
            )
            alphas = AlphaCoefficients.standard(n)
            dec = equivalence_up_to_global_phase(
                circuit_to_unitary(compile_decoding(n, alphas)),
                decoding_unitary(n, alphas),
            )
            verified = "yes" if (enc.equivalent and dec.equivalent) else "NO"
            ok = ok and enc.equivalent and dec.equivalent
        print(
            f"{n:>3} {report.enc_2q:>7} {report.dec_2q:>7} {report.measured_total:>5}"
            f" {report.total_2q:>14} {verified:>9}"
        )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
