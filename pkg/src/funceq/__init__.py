"""Solution sets of g(x+y) - g(x) - g(y) = x f(y) + y f(x) over prime fields,
plus exact-rational checks of the matching inequality on dyadic grids."""

from funceq.prime_field import Elem, PrimeField, uniquely_divisible_by
from funceq.fn_table import FnTable, PairTable

__all__ = ["Elem", "PrimeField", "uniquely_divisible_by", "FnTable", "PairTable"]
__version__ = "0.1.0"
