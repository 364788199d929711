"""Exceptions shared across the package."""


class ForestRepError(Exception):
    pass


class ParseError(ForestRepError, ValueError):
    """Malformed input text (tree, forest, element literal, rational)."""


class ContractError(ForestRepError, ValueError):
    """A documented precondition was violated; the message names the contract."""
