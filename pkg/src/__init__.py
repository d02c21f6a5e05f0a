"""
Spectral collocation and FHBVM time stepping for time-fractional reaction-diffusion.
"""
