"""Orientational decoherence of anisotropic rotors (Python front end)."""

from ._core import *  # noqa: F401,F403
from ._core import DomainError, NumericalError, SchemaError  # noqa: F401

__all__ = [name for name in dir() if not name.startswith("_")]
