"""Hypergraph partitioning through vertex separators on the net
intersection graph."""

__version__ = "0.1.0"
