#!/usr/bin/env python3
"""Run the full built-in verification suite and print the report.

Usage: python scripts/run_verify.py [SEED]
"""

import sys

from lamconn.verify import verify_paper


def main() -> int:
    seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
    report = verify_paper(seed)
    print(report.to_text())
    return report.exit_code()


if __name__ == "__main__":
    raise SystemExit(main())
