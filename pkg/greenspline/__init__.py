"""Green's functions, first-derivative smoothing splines and Gaussian processes on [0, 1]."""

__version__ = "0.1.0"
