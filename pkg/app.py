#!/usr/bin/env python3
"""
Entry point for the quantum neural network experiment runner.
"""
import sys

from quann.cli import main

if __name__ == "__main__":
    sys.exit(main())
