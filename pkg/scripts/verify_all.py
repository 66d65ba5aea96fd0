"""Run every built-in check and write a JSON report.

    python3 scripts/verify_all.py [report.json]
"""
import os
import sys

from skeintrace.cli import main

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else "verify_all.json"
    jobs = str(min(4, os.cpu_count() or 1))
    sys.exit(main(["verify-all", "--jobs", jobs, "--out", out]))
