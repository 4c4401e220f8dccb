"""
Main module for the roadseg command line
"""
from roadseg.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
