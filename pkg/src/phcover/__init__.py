"""Covers of the non-incident point-hyperplane graph in characteristic 2.

The package builds the symmetric-square voltage assignment on the
affine point-hyperplane graph over GF(2^k), k <= 4, verifies its
structural properties exhaustively or by seeded sampling, constructs
the 64-fold cover over GF(2), and certifies that the induced extension
of SL4 by the 6-dimensional module does not split when the field has
more than two elements.
"""

from .field import GF, FIELD_ORDERS, field_of_order

__version__ = "0.1.0"

__all__ = ["GF", "FIELD_ORDERS", "field_of_order", "__version__"]
