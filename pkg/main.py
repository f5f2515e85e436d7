"""
Minkowski question mark measure toolkit
Entry point: python main.py <command> [options]
"""

import sys

from minkowski.cli import main

if __name__ == "__main__":
    sys.exit(main())
