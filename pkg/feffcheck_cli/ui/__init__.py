"""
User interface components for feffcheck.
This module contains display formatting, colors and the banner.
"""
