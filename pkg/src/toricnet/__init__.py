"""Exact string-net computations for the extended toric-code TQFT."""

from .spaces import LinearMap, StringNetSpace, space
from .surface import WiringDiagram, parse_diagram, validate

__all__ = ["LinearMap", "StringNetSpace", "WiringDiagram", "parse_diagram", "space", "validate"]
