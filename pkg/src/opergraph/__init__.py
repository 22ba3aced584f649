"""Exact computations with trees, operads, Hochschild cochains, ribbon graphs and star products."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.0.0"
