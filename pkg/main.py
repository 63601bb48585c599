#!/usr/bin/env python3
"""
Impartial Selection Toolkit

Command-line access to the 2-partition, k-partition and permutation
mechanisms, their exact selection laws, performance bounds, verification
suites, worst-case search and Monte Carlo estimates.
"""
import sys

from app.core import main

if __name__ == "__main__":
    sys.exit(main())
