"""Exception types shared across the toolkit."""

from __future__ import annotations


class ConfigError(Exception):
    """A scenario configuration is malformed or inconsistent."""


class RegimeCapError(Exception):
    """A requested computation exceeds the desk-scale exhaustive-search caps."""
