#!/usr/bin/env python3
"""Thin launcher: plot_spectrum.py --csv spec.csv --out fig2.svg --title "..." """

import sys

from plotkit import main

if __name__ == "__main__":
    sys.exit(main())
