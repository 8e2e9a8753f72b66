"""Multi-mode project scheduling with cash-flow financing under fuzzy data."""

__version__ = "0.1.0"
