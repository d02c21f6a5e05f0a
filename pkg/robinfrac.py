#!/usr/bin/env python3
"""
Main entry point for the fractional reaction-diffusion benchmarks.
"""
from src.cli import main

if __name__ == "__main__":
    main()
