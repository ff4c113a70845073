#!/usr/bin/env python3
"""
feffcheck - entry point for `python -m feffcheck_cli`.
"""

from feffcheck_cli.commands.handler import main

if __name__ == "__main__":
    main()
