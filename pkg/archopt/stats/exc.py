"""Exceptions for the stats package."""


class ObjectiveMismatchError(Exception):
    """Two experiments do not report the same objectives."""
