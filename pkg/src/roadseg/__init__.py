# roadseg package
"""
Ordinal road extraction from multi-resolution satellite time series.
"""
__version__ = "0.1.0"
