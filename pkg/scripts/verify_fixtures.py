#!/usr/bin/env python3
"""Run the full verification suite over every bundled fixture."""

import argparse
import sys

from gpdext.cli import _fixture_dir, cmd_verify_all, load_spec


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--samples", type=int, default=10)
    args = ap.parse_args()

    failures = 0
    for path in sorted(_fixture_dir().glob("*.json")):
        spec, source = load_spec(None, path.stem)
        report = cmd_verify_all(spec, source, args.seed, args.samples)
        print(report.to_human())
        print()
        failures += 0 if report.passed else 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
