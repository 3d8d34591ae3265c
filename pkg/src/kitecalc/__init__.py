"""Kite pseudo BL-algebras over Z^d: exact operations, identity checking, structure theory."""

from .kite import (
    Kind, KiteElement, KiteShape, L, ShapeError, Side, U, census, conjugates, cycle_shape,
    grid, join, ldiv, leq, lneg, meet, mul, one, path_shape, rdiv, rneg, zero,
)
from .lgroup import ConeSide, DimensionError, GroupVector
from .literals import LiteralError, format_element, format_shape, parse_element, parse_shape

__version__ = "0.1.0"
