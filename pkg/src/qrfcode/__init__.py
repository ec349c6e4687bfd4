"""Stabilizer codes read as gauge theories: local and error-generated frames, error duality, surface codes."""

__version__ = "0.1.0"

from .pauli_core import Pauli, parse
from .stabilizer import StabilizerCode, build_code, load_code

__all__ = ["Pauli", "parse", "StabilizerCode", "build_code", "load_code", "__version__"]
