"""pmatrix-toolkit - P-matrix detection, LCP enumeration and P-operators on truncated l2 sections."""

__version__ = "0.1.0"
