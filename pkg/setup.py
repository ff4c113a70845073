#!/usr/bin/env python3
"""
Setup script for feffcheck.
"""

from setuptools import setup

# Use pyproject.toml for package configuration
if __name__ == "__main__":
    setup()
