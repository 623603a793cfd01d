"""Multidimensional recurrence toolkit.

Constructs d-dimensional infinite words (morphic fixed points, rotation
words, gcd-placement words, Toeplitz fillings), extracts block words along
rational directions, decides sufficient conditions for strong uniform
recurrence, measures recurrence gaps empirically, and computes directional
return-word derivatives.
"""

from .errors import MultirecError
from .lattice import FiniteWord, WordSource, factor_at, directional_letter
from .generators import Morphism, load_preset, preset_word, thue_morse_word
from .recurrence import RecurrenceBudget, gap_report, check_urd_empirical
from .derive import derivative_per_direction, derivative_uniform

__version__ = "0.1.0"

__all__ = [
    "MultirecError",
    "FiniteWord",
    "WordSource",
    "factor_at",
    "directional_letter",
    "Morphism",
    "load_preset",
    "preset_word",
    "thue_morse_word",
    "RecurrenceBudget",
    "gap_report",
    "check_urd_empirical",
    "derivative_per_direction",
    "derivative_uniform",
    "__version__",
]
