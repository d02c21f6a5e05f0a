"""
Test package for the fractional reaction-diffusion solver.
"""
