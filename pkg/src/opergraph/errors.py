"""Exceptions shared across modules."""


class BudgetError(RuntimeError):
    """A computation would exceed one of the desk-scale size caps."""
