"""HealthGenie: KG-grounded recipe recommendation with a circular refine loop."""

__version__ = "0.1.0"
