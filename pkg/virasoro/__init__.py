"""Exact computations for Virasoro Verma modules and their tensor products with intermediate series modules."""

__version__ = "1.0.0"
