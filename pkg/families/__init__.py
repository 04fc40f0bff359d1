from .expansions import MapExpansion, cubic_expansion, deg7_expansion, DEG7_Y0
from .maps import (
    Family, BimodalMap, make_map, FamilyError, ParamOutOfRange, NearCritical,
    chebyshev_polynomial, outer_polynomial, polynomial_schwarzian, deg7_x0,
    exponent_gap, exponent_gap_sides,
)

__all__ = [
    'MapExpansion', 'cubic_expansion', 'deg7_expansion', 'DEG7_Y0',
    'Family', 'BimodalMap', 'make_map', 'FamilyError', 'ParamOutOfRange', 'NearCritical',
    'chebyshev_polynomial', 'outer_polynomial', 'polynomial_schwarzian', 'deg7_x0',
    'exponent_gap', 'exponent_gap_sides',
]
