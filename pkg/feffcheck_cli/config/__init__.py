"""
Configuration management for feffcheck.
This module contains the default configuration, loading, validation and overrides.
"""
