"""Polynomial colouring encodings checked against graph minors."""

from .errors import DomainError, ResourceError
from .graph import SimpleGraph

__all__ = ["DomainError", "ResourceError", "SimpleGraph"]
