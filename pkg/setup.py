"""Setup script for backwards compatibility."""

from setuptools import setup  # type: ignore[import-untyped]

setup()
