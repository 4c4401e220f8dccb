"""
Test package for roadseg
"""
