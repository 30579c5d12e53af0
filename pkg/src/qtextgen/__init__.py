"""Classical and hybrid quantum-classical language models, benchmarked at desk scale."""

__version__ = "0.1.0"
