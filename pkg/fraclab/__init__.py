"""fraclab: numerical laboratory for fractional-Laplacian commutator estimates."""

__version__ = "0.1.0"
