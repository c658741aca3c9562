#!/usr/bin/env python3
"""Sweep the redundancy-bound table for a composite alphabet.

Writes the same CSV as `compodna bounds`, defaulting to the DNA-sized
alphabet (q=4, M=6 -> Q=84, R=56) over a grid of window lengths and
sequence lengths. Intended for plotting bound tightness elsewhere.
"""

import argparse
import sys

from compodna import AlphabetParams, alphabet_size, restricted_symbol_count
from compodna.rll import SWEEP_CSV_HEADER, sweep_csv_rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--q", type=int, default=4)
    parser.add_argument("--M", type=int, default=6)
    parser.add_argument("--max-ell", type=int, default=10)
    parser.add_argument("--max-n", type=int, default=400)
    parser.add_argument("--n-step", type=int, default=20)
    parser.add_argument("--out", default="-", help="output CSV path, - for stdout")
    args = parser.parse_args()

    alphabet = AlphabetParams(q=args.q, M=args.M)
    Q = alphabet_size(alphabet)
    R = restricted_symbol_count(alphabet, 1)
    ells = list(range(1, args.max_ell + 1))
    ns = list(range(args.n_step, args.max_n + 1, args.n_step))

    lines = [SWEEP_CSV_HEADER] + sweep_csv_rows(Q, R, ells, ns)
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(lines) - 1} rows to {args.out}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
