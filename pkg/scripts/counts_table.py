#!/usr/bin/env python3
"""Print the diagram counting table; the numbers are also wired into tests."""

import argparse

from polarspan.cli import main

if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--genus-max", type=int, default=7)
    ap.add_argument("--format", default="text", choices=["text", "csv", "json"])
    ns = ap.parse_args()
    raise SystemExit(
        main(["counts", "--genus-max", str(ns.genus_max), "--format", ns.format])
    )
