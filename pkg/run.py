#!/usr/bin/env python3
"""
Runner script for fraclab experiments
Exit codes: 0 all invariants hold, 1 usage/config error, 2 invariant failure
"""
import sys
import os

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from fraclab.app.cli import main

if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
