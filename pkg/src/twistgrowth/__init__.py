"""twistgrowth: graph-of-groups word arithmetic, Dehn twists, and growth.

The package decides, for a partial Dehn twist relative to local Dehn twists,
whether the induced outer automorphism of a free group is a Dehn twist
automorphism (linear growth) or has at least quadratic growth, and verifies
the verdict empirically by iterating the automorphism.
"""

__version__ = "0.1.0"

from .words import Basis, Word, CyclicWord  # noqa: F401
