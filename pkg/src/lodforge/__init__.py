"""Turn GLAM metadata dumps into audited Linked Open Data."""

__version__ = "0.1.0"
