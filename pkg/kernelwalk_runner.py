#!/usr/bin/env python3
"""
kernelwalk runner
Runs the command-line driver from a source checkout.

Usage:
    python kernelwalk_runner.py classify walks/simple.walk
    python kernelwalk_runner.py analyze walks/tandem.walk --json --output reports/tandem.json
"""

from kernelwalk.cli import main

if __name__ == "__main__":
    main()
