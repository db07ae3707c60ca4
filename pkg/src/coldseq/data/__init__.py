"""Bundled fleet definitions and profile specs."""
