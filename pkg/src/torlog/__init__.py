"""torlog: exact logarithmic invariants of finite cochain models."""

__version__ = "0.1.0"
