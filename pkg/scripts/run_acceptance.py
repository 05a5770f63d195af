"""Run the acceptance suite and print its PASS/FAIL table.

    python3 scripts/run_acceptance.py [extra pytest args]
"""
import os
import sys

import pytest

HERE = os.path.dirname(os.path.abspath(__file__))

if __name__ == "__main__":
    target = os.path.join(HERE, os.pardir, "tests", "test_acceptance.py")
    raise SystemExit(pytest.main(["-q", "-p", "no:cacheprovider", target, *sys.argv[1:]]))
