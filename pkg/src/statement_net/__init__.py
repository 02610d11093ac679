"""Statement networks from news corpora and their temporal core-periphery structure."""

__version__ = "0.1.0"
