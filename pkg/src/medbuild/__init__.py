"""medbuild: deterministic healthcare-facility pre-design engine."""

__version__ = "0.1.0"
