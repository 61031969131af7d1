"""primus: exact primitivity tests in relatively free groups.

Deciders for the free case (Stallings graphs and Whitehead minimization),
free abelian of any exponent (Smith normal form), free nilpotent
(abelian reduction plus a class-2 oracle), abelian-by-abelian (induced
Fox derivatives and minor-ideal certificates), and free metabelian
(Jacobian determinant); plus a fuzz harness checking that primitivity
survives restriction to an initial sub-basis, against brute-force
oracles.
"""

from .verdict import PrimitivityVerdict, Status
from .words import (Automorphism, EndomorphismSpec, PrimitivityProblem,
                    VarietySpec, Word, WordSyntaxError, apply_endomorphism,
                    commutator, format_word, free_multiply, invert_word,
                    parse_word, random_automorphism, support)

__version__ = "0.1.0"

__all__ = [
    "Automorphism", "EndomorphismSpec", "PrimitivityProblem",
    "PrimitivityVerdict", "Status", "VarietySpec", "Word", "WordSyntaxError",
    "apply_endomorphism", "commutator", "format_word", "free_multiply",
    "invert_word", "parse_word", "random_automorphism", "support",
    "__version__",
]
