#!/usr/bin/env python3
"""Run the composite verification suite.

Defaults to the desk-scale range (genus 0..4, a few seconds).  With
--large the genus-5 record is added; expect two honest mismatches there
(closure_spans and basis_unimodular) and exit status 1 -- that genus is
where the special family stops being an integer basis.
"""

import argparse

from polarspan.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--large", action="store_true", help="include genus 5 (about half a minute)")
    ap.add_argument("--stretch", action="store_true", help="also the genus-5 GF(2) rank (hours)")
    ns = ap.parse_args()
    argv = ["verify", "--genus-min", "0", "--genus-max", "5" if ns.large else "4"]
    if ns.large:
        argv.append("--allow-large")
    if ns.stretch:
        argv.append("--stretch")
    raise SystemExit(main(argv))
