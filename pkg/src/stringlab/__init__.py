"""stringlab: exact verification laboratory for the (3,4) string equation."""

__version__ = "0.1.0"
