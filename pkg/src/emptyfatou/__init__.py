"""Rational maps on P^1(K) with empty Fatou set, checked in exact p-adic arithmetic."""

from emptyfatou.errors import *  # noqa: F401,F403
from emptyfatou.field import (
    Element,
    Field,
    PadicScalar,
    ResidueField,
    format_element,
    make_field,
    parse_element,
    parse_field_spec,
    teichmuller,
)

__all__ = [
    "Element",
    "Field",
    "PadicScalar",
    "ResidueField",
    "format_element",
    "make_field",
    "parse_element",
    "parse_field_spec",
    "teichmuller",
]
