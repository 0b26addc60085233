"""Exceptions for the results archive."""


class ConflictError(Exception):
    """An experiment with the same name is already archived."""


class NotFoundError(Exception):
    """No experiment with the given name is archived."""


class OrderByException(Exception):
    """Raised when an order_by parameter names an unknown key."""
