"""
Utility modules for feffcheck.
"""

from .env_loader import get_version, get_env, get_thread_cap
from .parallel import ordered_map, resolve_workers
