"""polydraw: exact polytope geometry and polytopal graph drawing."""

__version__ = "0.1.0"
