"""Cost benchmark simulator for cloud event processing (FaaS vs. stream processing)."""

__version__ = "1.0.0"
