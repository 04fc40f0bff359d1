from .errors import (
    OrbitError, AmbiguousSymbol, NotAdmissible, NotRealizable, NoPreimage, NotFound,
)
from .itinerary import itinerary, kneading2, symbol_of, critical_value
from .branches import (
    lap_bounds, lap_image, inverse_point, inverse_branch, realize_bracket, realize_point,
    bracket_of, default_tolerance,
)
from .periodic import PeriodicOrbit, fixed_point_r, lap_multiplier, period2_orbits
from .diagnostics import OrbitDiagnostics, diagnostics, with_diagnostics, CSV_HEADER

__all__ = [
    'OrbitError', 'AmbiguousSymbol', 'NotAdmissible', 'NotRealizable', 'NoPreimage', 'NotFound',
    'itinerary', 'kneading2', 'symbol_of', 'critical_value',
    'lap_bounds', 'lap_image', 'inverse_point', 'inverse_branch', 'realize_bracket',
    'realize_point', 'bracket_of', 'default_tolerance',
    'PeriodicOrbit', 'fixed_point_r', 'lap_multiplier', 'period2_orbits',
    'OrbitDiagnostics', 'diagnostics', 'with_diagnostics', 'CSV_HEADER',
]
