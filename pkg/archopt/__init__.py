"""The **archopt** package: sustainable deployment search for microservices."""

__version__ = "1.0.0"
