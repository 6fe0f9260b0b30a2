"""Real motivic zeta functions and Milnor fibres of plane curve germs."""

__version__ = "0.1.0"

from .errors import MilnorFibreError  # noqa: E402
from .motives import BetaPoly, chi_c  # noqa: E402
from .polycore import GermFamily, Polynomial, milnor_number, parse_poly  # noqa: E402
from .resolve import embedded_resolution, extra_blowup  # noqa: E402
from .zeta import Symbol, acampo_lefschetz, motivic_fibre, series_expand, zeta_rational  # noqa: E402

__all__ = [
    "BetaPoly", "GermFamily", "MilnorFibreError", "Polynomial", "Symbol",
    "acampo_lefschetz", "chi_c", "embedded_resolution", "extra_blowup", "milnor_number",
    "motivic_fibre", "parse_poly", "series_expand", "zeta_rational",
]
