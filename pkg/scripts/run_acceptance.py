#!/usr/bin/env python3
"""Run the acceptance suite and print one PASS/FAIL line per criterion."""
import subprocess
import sys
from pathlib import Path


def main() -> int:
    root = Path(__file__).resolve().parent.parent
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", str(root / "tests" / "test_acceptance.py"), "-q", "-s"],
        cwd=root,
    )
    return proc.returncode


if __name__ == "__main__":
    sys.exit(main())
