"""
Command handling for feffcheck.
This module contains command-line argument parsing and execution.
"""
