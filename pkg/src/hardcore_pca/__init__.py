"""Hard-core PCA workbench: envelope simulation, decorrelated islands, and
exact drift certificates for neighbourhoods of size 2 and 3."""

__version__ = "0.1.0"
