"""honeylab - honeycomb certificates and tiling statistics for normed planes."""

__version__ = "0.1.0"
