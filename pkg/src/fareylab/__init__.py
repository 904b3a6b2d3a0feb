"""Exact-arithmetic laboratory for Farey-graph rays and their projective limits."""

import sys

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)

__version__ = "0.1.0"
