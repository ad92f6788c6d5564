"""
Test suite for semisep
"""
