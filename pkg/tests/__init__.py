"""
Tests for rainbowbounds package.
"""
