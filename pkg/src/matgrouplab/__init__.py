"""Laboratory for finitely generated integer matrix groups.

Exact arbitrary-precision linear algebra (characteristic polynomials,
cyclotomic factorizations, invariant bilinear forms, signatures), word and
ball machinery with relation search, congruence quotients with Cayley-graph
spectral gaps, integral hypergeometric monodromy construction and
classification, hyperbolic quadratic-lattice root certificates, averaging
operators for rotation generators, and Zaremba/Apollonian diophantine scans,
all behind a manifest-driven CLI.
"""

__version__ = "0.1.0"

from .matrices import IntMatrix
from .polynomials import IntPoly, cyclotomic, cyclotomic_factor
from .forms import FormSpace, fixed_form_space, symmetric_signature
from .groups import GenSet, CapExceeded

__all__ = [
    "IntMatrix",
    "IntPoly",
    "cyclotomic",
    "cyclotomic_factor",
    "FormSpace",
    "fixed_form_space",
    "symmetric_signature",
    "GenSet",
    "CapExceeded",
    "__version__",
]
