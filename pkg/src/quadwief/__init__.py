"""Exact arithmetic and Wieferich-prime machinery for quadratic fields."""

__version__ = "0.1.0"

from .quadfield import (  # noqa: F401
    FieldContext,
    FieldElement,
    UnitData,
    fundamental_unit,
    is_admissible_base,
    make_field,
    parse_element,
    pell_oracle,
)
