"""Exceptions for the search package."""


class ConfigError(Exception):
    """The experiment configuration is invalid."""


class FrontFileError(Exception):
    """A front file could not be parsed."""
